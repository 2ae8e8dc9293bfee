#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

#include "siegel/json_io.hpp"

namespace {

using namespace siegel;

constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
    int k = 10;
    long bits = 128;
    int workers = 0; // 0 = all cores
    int quad_nodes = 16;
    double quad_target = 1e-12;
    std::string out;
    std::string format = "json";
};

struct PolicyOpts {
    int c_max = 48;
    int s_max = 48;
    int norm_max = 6;
    std::string tail_mode = "envelope";
    double tail_target = 0.0;
};

PrecisionContext make_ctx(const GlobalOpts& g) {
    PrecisionContext ctx;
    ctx.bits = g.bits;
    ctx.quad_nodes = g.quad_nodes;
    ctx.tail_target = g.quad_target;
    ctx.validate();
    return ctx;
}

TruncationPolicy make_policy(const PolicyOpts& p) {
    TruncationPolicy pol;
    pol.rank1_c_max = p.c_max;
    pol.rank1_s_max = p.s_max;
    pol.rank2_norm_max = p.norm_max;
    if (p.tail_mode == "envelope")
        pol.tail_mode = TailMode::envelope;
    else if (p.tail_mode == "doubling")
        pol.tail_mode = TailMode::doubling;
    else
        throw std::invalid_argument("tail-mode must be 'envelope' or 'doubling'");
    pol.requested_tail = p.tail_target;
    pol.validate();
    return pol;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void emit_payload(const GlobalOpts& g, const std::string& payload) {
    if (g.out.empty()) {
        std::cout << payload << "\n";
    } else {
        std::ofstream f(g.out);
        if (!f) throw std::invalid_argument("cannot open output file: " + g.out);
        f << payload << "\n";
    }
}

void emit_manifest(const std::string& command, const std::string& config_text,
                   const GlobalOpts& g, double ms) {
    ordered_json m{
        {"command", command},
        {"config_hash", fnv1a(config_text)},
        {"version", kVersion},
        {"mpfr", MPFR_VERSION_STRING},
        {"workers", g.workers},
        {"timings_ms", ordered_json{{"total", ms}}}};
    std::cerr << m.dump() << "\n";
}

std::vector<i64> parse_i64_list(const std::string& s, const char* what) {
    std::vector<i64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier coefficients of Siegel Poincare series for Sp4(Z): Kitaoka assembly, "
                 "Kloosterman sums, Bessel kernels and linear-independence certificates"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config");

    GlobalOpts g;
    app.add_option("--k", g.k, "even weight k >= 6 (default 10)");
    app.add_option("--bits", g.bits, "working mantissa precision (default 128)");
    app.add_option("--workers", g.workers, "worker threads (default: all cores)");
    app.add_option("--quad-nodes", g.quad_nodes, "starting Gauss-Legendre level (default 16)");
    app.add_option("--quad-target", g.quad_target, "absolute quadrature target (default 1e-12)");
    app.add_option("--out", g.out, "write payload to file instead of stdout");
    app.add_option("--format", g.format, "json or csv (csv: matrix and decay tables)");

    PolicyOpts p;
    std::string q_str, t_str, c_str, mnr_str, indices_str, klist_str, primes_str, target_str = "qI2";
    std::string x_str = "1.0", sign_str = "+1";
    long hsum_c = 1;
    long two_l = 17;
    double env_c = 1.4;
    bool normalized_plain = false;
    bool mode_bessel = false, mode_decay = false, mode_triangle = false;
    long rand_n = 0, seed = 1, entry_bound = 20;
    i64 pp = 2, qq = 2, p0 = 2;

    auto add_policy = [&](CLI::App* cmd) {
        cmd->add_option("--c-max", p.c_max, "rank-1 c radius (default 48)");
        cmd->add_option("--s-max", p.s_max, "rank-1 s radius (default 48)");
        cmd->add_option("--norm-max", p.norm_max, "rank-2 shell radius for C (default 6)");
        cmd->add_option("--tail-mode", p.tail_mode, "envelope | doubling");
        cmd->add_option("--tail-target", p.tail_target, "hard absolute tail target (exit 2 if missed)");
    };

    CLI::App* c_coeff = app.add_subcommand("coefficient", "A(P_Q, T) with rank breakdown and certified tails");
    c_coeff->add_option("--Q", q_str, "form a,b,c (b = twice the off-diagonal)")->required();
    c_coeff->add_option("--T", t_str, "form a,b,c")->required();
    add_policy(c_coeff);

    CLI::App* c_matrix = app.add_subcommand("matrix", "matrix A(P_{mI2}, nI2) over an index set");
    c_matrix->add_option("--indices", indices_str, "comma-separated positive integers")->required();
    c_matrix->add_flag("--plain", normalized_plain, "skip the (m/n)^l normalization");
    add_policy(c_matrix);

    CLI::App* c_certify = app.add_subcommand("certify", "diagonal-dominance certificate for the series matrix");
    c_certify->add_option("--indices", indices_str, "comma-separated positive integers")->required();
    c_certify->add_flag("--plain", normalized_plain, "certify the unnormalized matrix");
    add_policy(c_certify);

    CLI::App* c_maass = app.add_subcommand("maass", "Maass relation residual for F = P_Q");
    c_maass->add_option("--Q", q_str, "form a,b,c")->required();
    c_maass->add_option("--mnr", mnr_str, "m,n,r of the target form [[m,r/2],[r/2,n]]")->required();
    add_policy(c_maass);

    CLI::App* c_sym = app.add_subcommand("symmetry", "Petersson symmetry gap for (Q, T)");
    c_sym->add_option("--Q", q_str, "form a,b,c")->required();
    c_sym->add_option("--T", t_str, "form a,b,c")->required();
    add_policy(c_sym);

    CLI::App* c_bounds = app.add_subcommand("bounds", "bessel envelope sweep / decay table / triangle report");
    c_bounds->add_flag("--bessel", mode_bessel, "envelope sweep over the standard (l, x) grid");
    c_bounds->add_option("--c", env_c, "envelope constant (> e/2, default 1.4)");
    c_bounds->add_flag("--decay", mode_decay, "|A(P_{pI2}, target) - rank0| against k");
    c_bounds->add_option("--k-list", klist_str, "increasing even weights, e.g. 10,12,16,20");
    c_bounds->add_option("--p", pp, "row prime/index p");
    c_bounds->add_option("--q", qq, "column prime/index q");
    c_bounds->add_option("--target", target_str, "qI2 | q2diag | I2");
    c_bounds->add_flag("--triangle", mode_triangle, "three bound sums of the Spezialschar exclusion");
    c_bounds->add_option("--primes", primes_str, "prime set, e.g. 2,3");
    c_bounds->add_option("--p0", p0, "distinguished prime");
    add_policy(c_bounds);

    CLI::App* c_eigen = app.add_subcommand("eigencheck", "exact smallest-eigenvalue inequality check");
    c_eigen->add_option("--C", c_str, "matrix c11,c12,c21,c22");
    c_eigen->add_option("--random", rand_n, "check N pseudo-random invertible matrices");
    c_eigen->add_option("--seed", seed, "PRNG seed (default 1)");
    c_eigen->add_option("--entry-bound", entry_bound, "entries drawn from [-B, B] (default 20)");

    CLI::App* c_kloost = app.add_subcommand("kloosterman", "symplectic Kloosterman sum K(Q, T; C)");
    c_kloost->add_option("--Q", q_str, "form a,b,c")->required();
    c_kloost->add_option("--T", t_str, "form a,b,c")->required();
    c_kloost->add_option("--C", c_str, "matrix c11,c12,c21,c22")->required();

    CLI::App* c_hsum = app.add_subcommand("hsum", "rank-1 exponential sum H^{+-}(P, S; c)");
    c_hsum->add_option("--P", q_str, "form a,b,c")->required();
    c_hsum->add_option("--S", t_str, "form a,b,c")->required();
    c_hsum->add_option("--c", hsum_c, "modulus c >= 1")->required();
    c_hsum->add_option("--sign", sign_str, "+1 or -1");

    CLI::App* c_bessel = app.add_subcommand("bessel", "half-integer order Bessel J evaluation");
    c_bessel->add_option("--two-l", two_l, "2l, an odd positive integer (default 17)");
    c_bessel->add_option("--x", x_str, "positive argument (decimal string)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            return app.exit(e);
        }
        std::cerr << ordered_json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }

    auto started = std::chrono::steady_clock::now();
    std::string command;
    int status = 0;
    try {
        PrecisionContext ctx = make_ctx(g);
        TruncationPolicy pol = make_policy(p);
        int digits = output_digits(ctx.bits);

        if (c_coeff->parsed()) {
            command = "coefficient";
            HalfIntegralForm Q = form_from_string(q_str), T = form_from_string(t_str);
            WeightContext w = WeightContext::make(g.k, ctx);
            CoefficientBreakdown cb = fourier_coefficient(Q, T, w, pol, g.workers);
            ordered_json j = breakdown_to_json(cb);
            j["Q"] = form_to_json(Q);
            j["T"] = form_to_json(T);
            emit_payload(g, j.dump(2));
        } else if (c_matrix->parsed() || c_certify->parsed()) {
            command = c_matrix->parsed() ? "matrix" : "certify";
            std::vector<i64> indices = parse_i64_list(indices_str, "indices");
            SeriesMatrix m = build_matrix(g.k, indices, !normalized_plain, pol, ctx, g.workers);
            if (c_matrix->parsed() && g.format == "csv") {
                emit_payload(g, matrix_to_csv(m));
            } else {
                ordered_json j = matrix_to_json(m);
                DominanceCertificate cert = dominance_certificate(m);
                j["certificate"] = certificate_to_json(cert, digits);
                if (c_certify->parsed()) j["elimination_nonsingular"] = elimination_nonsingular(m);
                emit_payload(g, j.dump(2));
            }
        } else if (c_maass->parsed()) {
            command = "maass";
            HalfIntegralForm Q = form_from_string(q_str);
            auto mnr = parse_i64_list(mnr_str, "mnr");
            if (mnr.size() != 3) throw std::invalid_argument("mnr: expected m,n,r");
            MaassResult r = maass_residual(g.k, Q, mnr[0], mnr[1], mnr[2], pol, ctx, g.workers);
            Real rel = r.residual / max(r.largest_term, Real(1e-30, ctx.bits));
            emit_payload(g, ordered_json{{"k", g.k},
                                         {"Q", form_to_json(Q)},
                                         {"mnr", mnr},
                                         {"residual", r.residual.str(digits)},
                                         {"combined_tails", r.combined_tails.str(digits)},
                                         {"largest_term", r.largest_term.str(digits)},
                                         {"relative_residual", rel.str(digits)}}
                                 .dump(2));
        } else if (c_sym->parsed()) {
            command = "symmetry";
            HalfIntegralForm Q = form_from_string(q_str), T = form_from_string(t_str);
            SymmetryResult r = petersson_symmetry_gap(g.k, Q, T, pol, ctx, g.workers);
            Real rel = r.gap / max(r.scale, Real(1e-30, ctx.bits));
            emit_payload(g, ordered_json{{"k", g.k},
                                         {"Q", form_to_json(Q)},
                                         {"T", form_to_json(T)},
                                         {"gap", r.gap.str(digits)},
                                         {"combined_tails", r.combined_tails.str(digits)},
                                         {"scale", r.scale.str(digits)},
                                         {"relative_gap", rel.str(digits)}}
                                 .dump(2));
        } else if (c_bounds->parsed()) {
            command = "bounds";
            if (!mode_decay && !mode_triangle) mode_bessel = true;
            if (mode_bessel) {
                const long grid_two_l[] = {9, 17, 25, 37, 77};
                const char* grid_x[] = {"0.1", "1", "5", "20", "60", "100"};
                ordered_json rows = ordered_json::array();
                bool all_ok = true;
                for (long tl : grid_two_l)
                    for (const char* xs : grid_x) {
                        BesselOrder l(tl);
                        Real x(xs, ctx.bits);
                        Real j = bessel_j(l, x, ctx);
                        Real env = bessel_bound(l, x, env_c);
                        bool ok = abs(j) <= env && abs(j) <= Real(1L, ctx.bits);
                        all_ok = all_ok && ok;
                        rows.push_back(ordered_json{{"two_l", tl},
                                                    {"x", xs},
                                                    {"J", j.str(digits)},
                                                    {"envelope", env.str(digits)},
                                                    {"ok", ok}});
                    }
                emit_payload(g, ordered_json{{"c", env_c}, {"all_pass", all_ok}, {"grid", rows}}.dump(2));
            } else if (mode_decay) {
                std::vector<i64> ks64 = parse_i64_list(klist_str, "k-list");
                std::vector<int> ks(ks64.begin(), ks64.end());
                DecayTarget tgt = target_str == "qI2"    ? DecayTarget::qI2
                                  : target_str == "q2diag" ? DecayTarget::q_squared_diag
                                  : target_str == "I2"     ? DecayTarget::I2
                                                           : throw std::invalid_argument("target: qI2 | q2diag | I2");
                auto rows = decay_experiment(ks, pp, qq, tgt, pol, ctx, g.workers);
                if (g.format == "csv") {
                    std::ostringstream os;
                    os << "k,deviation,tail\n";
                    for (const auto& r : rows)
                        os << r.k << "," << r.deviation.str(digits) << "," << r.tail.str(digits) << "\n";
                    emit_payload(g, os.str());
                } else {
                    ordered_json rj = ordered_json::array();
                    for (const auto& r : rows)
                        rj.push_back(ordered_json{{"k", r.k},
                                                  {"deviation", r.deviation.str(digits)},
                                                  {"tail", r.tail.str(digits)}});
                    emit_payload(g, ordered_json{{"p", pp}, {"q", qq}, {"target", target_str}, {"rows", rj}}.dump(2));
                }
            } else {
                std::vector<i64> primes = parse_i64_list(primes_str, "primes");
                TriangleReport r = triangle_report(g.k, primes, p0, pol, ctx, g.workers);
                emit_payload(g, ordered_json{{"k", g.k},
                                             {"p0", p0},
                                             {"diagonal", r.diagonal.str(digits)},
                                             {"sum_same_column", r.sum_same.str(digits)},
                                             {"sum_mixed_target", r.sum_mixed.str(digits)},
                                             {"sum_identity_target", r.sum_identity.str(digits)},
                                             {"combined_tails", r.combined_tails.str(digits)}}
                                     .dump(2));
            }
        } else if (c_eigen->parsed()) {
            command = "eigencheck";
            if (rand_n > 0) {
                std::mt19937_64 rng(static_cast<uint64_t>(seed));
                std::uniform_int_distribution<i64> dist(-entry_bound, entry_bound);
                long checked = 0;
                bool all_hold = true;
                ordered_json failures = ordered_json::array();
                while (checked < rand_n) {
                    Mat2 c{dist(rng), dist(rng), dist(rng), dist(rng)};
                    if (c.det() == 0) continue;
                    ++checked;
                    if (!eigen_inequality_check(c)) {
                        all_hold = false;
                        failures.push_back(ordered_json{{"C", {c.a, c.b, c.c, c.d}}});
                    }
                }
                emit_payload(g, ordered_json{{"checked", checked}, {"all_hold", all_hold}, {"failures", failures}}.dump(2));
            } else {
                Mat2 c = mat2_from_string(c_str);
                emit_payload(g, ordered_json{{"C", {c.a, c.b, c.c, c.d}},
                                             {"holds", eigen_inequality_check(c)}}
                                     .dump(2));
            }
        } else if (c_kloost->parsed()) {
            command = "kloosterman";
            HalfIntegralForm Q = form_from_string(q_str), T = form_from_string(t_str);
            Mat2 c = mat2_from_string(c_str);
            ExpSumValue v = symplectic_kloosterman(Q, T, c, ctx.bits);
            i64 ad = c.det() < 0 ? -c.det() : c.det();
            Real bound(ad, ctx.bits);
            bound *= sqrt(bound);
            ordered_json j = expsum_to_json(v, digits);
            j["trivial_bound"] = bound.str(digits);
            emit_payload(g, j.dump(2));
        } else if (c_hsum->parsed()) {
            command = "hsum";
            HalfIntegralForm P = form_from_string(q_str), S = form_from_string(t_str);
            int sign = sign_str == "-1" ? -1 : 1;
            ExpSumValue v = h_sum(P, S, hsum_c, sign, ctx.bits);
            ordered_json j = expsum_to_json(v, digits);
            j["trivial_bound"] = static_cast<double>(hsum_c) * static_cast<double>(hsum_c);
            emit_payload(g, j.dump(2));
        } else if (c_bessel->parsed()) {
            command = "bessel";
            BesselOrder l(two_l);
            Real x(x_str.c_str(), ctx.bits);
            if (x.sign() <= 0) throw std::invalid_argument("bessel: x must be positive");
            Real v = bessel_j(l, x, ctx);
            Real vs = bessel_j_series(l, x, ctx.bits);
            Real vr = bessel_j_recurrence(l, x, ctx.bits);
            emit_payload(g, ordered_json{{"two_l", two_l},
                                         {"x", x_str},
                                         {"value", v.str(digits)},
                                         {"series", vs.str(digits)},
                                         {"recurrence", vr.str(digits)},
                                         {"envelope_1p4", bessel_bound(l, x, 1.4).str(digits)},
                                         {"precision_bits", static_cast<long>(ctx.bits)}}
                                 .dump(2));
        }
    } catch (const TruncationTargetError& e) {
        std::cout << ordered_json{{"error", "truncation_target"},
                                  {"message", e.what()},
                                  {"achieved_tail", e.achieved}}
                         .dump(2)
                  << "\n";
        status = 2;
    } catch (const std::exception& e) {
        std::cerr << ordered_json{{"error", e.what()}}.dump() << "\n";
        status = 1;
    }

    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    emit_manifest(command.empty() ? "none" : command, app.config_to_str(true, false), g, ms);
    return status;
}
