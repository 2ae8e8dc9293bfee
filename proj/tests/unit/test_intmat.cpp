#include <doctest.h>

#include <random>

#include "siegel/intmat.hpp"

using namespace siegel;

TEST_SUITE("intmat") {

TEST_CASE("ext_gcd bezout identity") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> dist(-1000, 1000);
    for (int i = 0; i < 500; ++i) {
        i64 a = dist(rng), b = dist(rng);
        i64 x, y;
        i64 g = ext_gcd(a, b, x, y);
        CHECK(g == gcd_ll(a, b));
        CHECK(a * x + b * y == g);
    }
}

TEST_CASE("mod_inverse") {
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(1, 1) == 0);
    for (i64 m = 2; m <= 40; ++m)
        for (i64 a = 1; a < m; ++a) {
            if (gcd_ll(a, m) != 1) continue;
            CHECK(mod_norm(a * mod_inverse(a, m), m) == 1);
        }
}

TEST_CASE("smith normal form reconstructs and divides") {
    auto check = [](const Mat2& c) {
        Smith2 s = smith_normal_form(c);
        CHECK(s.d1 >= 1);
        CHECK(s.d2 >= 1);
        CHECK(s.d2 % s.d1 == 0);
        i64 du1 = s.u1.det(), du2 = s.u2.det();
        CHECK((du1 == 1 || du1 == -1));
        CHECK((du2 == 1 || du2 == -1));
        Mat2 rebuilt = s.u1 * Mat2{s.d1, 0, 0, s.d2} * s.u2;
        CHECK(rebuilt == c);
    };
    check(Mat2{1, 0, 0, 1});
    check(Mat2{2, 0, 0, 4});
    check(Mat2{0, 1, 1, 0});
    check(Mat2{2, 3, 4, 5});
    check(Mat2{-3, 0, 0, -3});
    check(Mat2{6, 4, 2, 8});

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> dist(-9, 9);
    int done = 0;
    while (done < 500) {
        Mat2 c{dist(rng), dist(rng), dist(rng), dist(rng)};
        if (c.det() == 0) continue;
        check(c);
        ++done;
    }
}

TEST_CASE("smith normal form rejects singular input") {
    CHECK_THROWS_AS(smith_normal_form(Mat2{1, 2, 2, 4}), std::invalid_argument);
}

} // TEST_SUITE
