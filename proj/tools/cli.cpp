// Experiment harness: every library surface as a subcommand with
// reproducible configs, CSV outputs, and a JSON run manifest.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ntshort/approximants.hpp"
#include "ntshort/correlations.hpp"
#include "ntshort/decomposition.hpp"
#include "ntshort/heisenberg.hpp"
#include "ntshort/hyperbola.hpp"
#include "ntshort/interval_sieve.hpp"
#include "ntshort/linear_forms.hpp"
#include "ntshort/poly_mod1.hpp"
#include "ntshort/progressions.hpp"

using namespace ntshort;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Manifest {
    json config;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void write(const std::string& out_path) const {
        if (out_path.empty()) return;
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json j{{"config", config}, {"version", kVersion}, {"seconds", secs}};
        std::ofstream f(out_path + ".manifest.json");
        f << j.dump(2) << '\n';
    }
};

i64 resolve_H(i64 X, i64 H, double theta) {
    if (H > 0) return H;
    if (theta > 0.0) return static_cast<i64>(std::ceil(std::pow(static_cast<double>(X), theta)));
    throw std::invalid_argument("provide --H or --theta");
}

IntervalSlab make_fn_slab(const std::string& fn, i64 X, i64 H, const ApproximantParams& ap,
                          int k) {
    auto kind = FnKind::parse(fn);
    if (!kind) throw std::invalid_argument("unknown function tag: " + fn);
    switch (kind->tag) {
        case FnKind::lambda_sharp:
            return lambda_sharp_slab(
                X, H, ap.R > 0 ? ap.R : ApproximantParams::default_R(static_cast<double>(X)));
        case FnKind::lambda_sharp_I: {
            double R = ap.R > 0 ? ap.R : ApproximantParams::default_R(static_cast<double>(X));
            double tr =
                ap.trunc > 0 ? ap.trunc : ApproximantParams::default_trunc(static_cast<double>(X));
            return lambda_sharp_I_slab(X, H, R, tr);
        }
        case FnKind::lambda_w:
            return lambda_w_slab(X, H, ap.w);
        case FnKind::dk_sharp: {
            double eta = ap.eta > 0 ? ap.eta : ApproximantParams::default_eta(k);
            return dk_sharp(factor_interval(X, H), k, eta);
        }
        default:
            return sieve_slab(X, H, *kind);
    }
}

// f minus its model: mu stays mu, lambda_vm subtracts the rough-number
// model, d_k subtracts the divisor model
IntervalSlab residual_slab(const std::string& fn, i64 X, i64 H, const ApproximantParams& ap) {
    auto kind = FnKind::parse(fn);
    if (!kind) throw std::invalid_argument("unknown function tag: " + fn);
    if (kind->tag == FnKind::mu || kind->tag == FnKind::liouville) return sieve_slab(X, H, *kind);
    if (kind->tag == FnKind::lambda_vm) {
        auto f = sieve_slab(X, H, *kind);
        double R = ap.R > 0 ? ap.R : ApproximantParams::default_R(static_cast<double>(X));
        auto sharp = lambda_sharp_slab(X, H, R);
        for (i64 i = 0; i < H; ++i)
            f.values[static_cast<size_t>(i)] -= sharp.values[static_cast<size_t>(i)];
        return f;
    }
    if (kind->tag == FnKind::dk) {
        auto f = sieve_slab(X, H, *kind);
        double eta = ap.eta > 0 ? ap.eta : ApproximantParams::default_eta(kind->k);
        auto sharp = dk_sharp(factor_interval(X, H), kind->k, eta);
        for (i64 i = 0; i < H; ++i)
            f.values[static_cast<size_t>(i)] -= sharp.values[static_cast<size_t>(i)];
        return f;
    }
    throw std::invalid_argument("discorrelation target must be mu, liouville, lambda_vm or d_k(k)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"short-interval arithmetic function engine"};
    app.require_subcommand(1);

    i64 X = 0, H = 0;
    double theta = 0.0;
    std::string fn = "mu", out;
    u64 seed = 1;
    int threads = 0;
    ApproximantParams ap{};
    int k = 2;

    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    auto add_common = [&](CLI::App* sub, bool with_fn = true) {
        sub->add_option("--X", X, "interval start (exclusive)")->required();
        sub->add_option("--H", H, "interval length");
        sub->add_option("--theta", theta, "H = ceil(X^theta) when --H absent");
        if (with_fn) sub->add_option("--fn", fn, "function tag");
        sub->add_option("--out", out, "output path");
        sub->add_option("--seed", seed, "rng seed");
        sub->add_option("--R", ap.R, "rough-number model level");
        sub->add_option("--w", ap.w, "W-variant level");
        sub->add_option("--eta", ap.eta, "d_k model exponent");
        sub->add_option("--trunc", ap.trunc, "type-I divisor cutoff");
        sub->add_option("--k", k, "divisor order for dk tags");
    };

    auto* sieve_cmd = app.add_subcommand("sieve", "sieve an arithmetic function slab to CSV");
    add_common(sieve_cmd);

    auto* approx_cmd = app.add_subcommand("approx", "evaluate a model-function slab to CSV");
    add_common(approx_cmd);

    auto* disc_cmd =
        app.add_subcommand("discorrelate", "phase/nilsequence sweeps of f - f_model correlations");
    add_common(disc_cmd);
    i64 qmax = 50, nrandom = 1000;
    int degree = 1;
    bool nil_sweep = false;
    disc_cmd->add_option("--qmax", qmax, "rational phase denominators up to q");
    disc_cmd->add_option("--random", nrandom, "random phases (or sequences) drawn");
    disc_cmd->add_option("--degree", degree, "polynomial phase degree (1 = linear a/q grid + randoms)");
    disc_cmd->add_flag("--nil", nil_sweep, "sweep nilsequences instead of linear phases");

    auto* gowers_cmd = app.add_subcommand("gowers", "uniformity norm of a slab");
    add_common(gowers_cmd);
    int s_order = 2;
    gowers_cmd->add_option("--s", s_order, "norm order 1..4");

    auto* part_cmd = app.add_subcommand("partition", "hyperbola-shell partition dump");
    i64 pM = 0, pJlo = -1, pJhi = -1, pQ = 1;
    bool do_verify = false;
    part_cmd->add_option("--X", X)->required();
    part_cmd->add_option("--H", H)->required();
    part_cmd->add_option("--M", pM)->required();
    part_cmd->add_option("--Jlo", pJlo, "J = (Jlo, Jhi], default (M, 2M]");
    part_cmd->add_option("--Jhi", pJhi);
    part_cmd->add_option("--Q", pQ)->required();
    part_cmd->add_option("--out", out);
    part_cmd->add_flag("--verify", do_verify, "run the exact verifier");

    auto* classify_cmd = app.add_subcommand("classify", "exponent-range classification");
    double cl_theta = 0.0;
    std::string cl_alphas;
    classify_cmd->add_option("--theta", cl_theta)->required();
    classify_cmd->add_option("--alphas", cl_alphas, "comma-separated exponents")->required();
    classify_cmd->add_option("--out", out);

    auto* hb_cmd = app.add_subcommand("hb-check", "identity-expansion residual check");
    std::string hb_target = "lambda_vm";
    int hb_L = 3;
    hb_cmd->add_option("--X", X)->required();
    hb_cmd->add_option("--L", hb_L);
    hb_cmd->add_option("--target", hb_target, "mu or lambda_vm");
    hb_cmd->add_option("--out", out);

    auto* ram_cmd = app.add_subcommand("ramare-check", "prime-extraction identity check");
    i64 rP = 10, rQ = 100;
    ram_cmd->add_option("--X", X)->required();
    ram_cmd->add_option("--H", H)->required();
    ram_cmd->add_option("--P", rP);
    ram_cmd->add_option("--Q", rQ);
    ram_cmd->add_option("--fn", fn, "mu or d2");
    ram_cmd->add_option("--out", out);

    auto* ss_cmd = app.add_subcommand("singular-series", "local factors over p <= pmax");
    std::string sys_json;
    i64 pmax = 100;
    int ss_k = 0, ss_J = 6;
    ss_cmd->add_option("--system", sys_json, "system JSON ({d,t,forms:[{dot,const}]})")->required();
    ss_cmd->add_option("--pmax", pmax);
    ss_cmd->add_option("--dk", ss_k, "divisor weight order (0 = prime weight)");
    ss_cmd->add_option("--J", ss_J, "p-adic truncation level for divisor weights");
    ss_cmd->add_option("--out", out);

    auto* ps_cmd = app.add_subcommand("prime-solutions", "weighted solution count vs local model");
    i64 ps_N = 1000000;
    double ps_side_exp = 0.65;
    i64 ps_pmax = 1000;
    ps_cmd->add_option("--N", ps_N);
    ps_cmd->add_option("--side-exp", ps_side_exp, "box side = 2 ceil(N^exp)");
    ps_cmd->add_option("--pmax", ps_pmax);
    ps_cmd->add_option("--out", out);

    auto* ma_cmd = app.add_subcommand("major-arc", "window sums of f - f_model over progressions");
    add_common(ma_cmd);
    i64 ma_qmax = 6;
    ma_cmd->add_option("--qmax", ma_qmax, "progression moduli up to q");

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) global_thread_count() = threads;

    Manifest manifest;
    try {
        if (*sieve_cmd || *approx_cmd) {
            i64 Hr = resolve_H(X, H, theta);
            manifest.config = {{"cmd", *sieve_cmd ? "sieve" : "approx"}, {"X", X}, {"H", Hr},
                               {"fn", fn},  {"R", ap.R}, {"eta", ap.eta}, {"w", ap.w},
                               {"trunc", ap.trunc}, {"k", k}};
            auto slab = make_fn_slab(fn, X, Hr, ap, k);
            double sum = 0;
            for (double v : slab.values) sum += v;
            if (!out.empty()) {
                write_slab_csv(slab, out);
                manifest.write(out);
            }
            std::cout << json{{"X", X}, {"H", Hr}, {"kind", slab.kind.str()}, {"sum", sum}}.dump()
                      << '\n';
        } else if (*disc_cmd) {
            i64 Hr = resolve_H(X, H, theta);
            manifest.config = {{"cmd", "discorrelate"}, {"X", X}, {"H", Hr}, {"fn", fn},
                               {"qmax", qmax}, {"random", nrandom}, {"seed", seed},
                               {"nil", nil_sweep}, {"R", ap.R}, {"eta", ap.eta}};
            auto f = residual_slab(fn, X, Hr, ap);
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::ostringstream csv;
            csv << "param,re,im,abs,normalized\n";
            double supval = 0.0;
            if (!nil_sweep) {
                if (degree < 1 || degree > kMaxPolyDegree)
                    throw std::invalid_argument("discorrelate: degree out of range");
                // phases: degree 1 gets the a/q grid plus seeded randoms;
                // higher degrees get seeded random coefficient vectors,
                // centered on the window so the reduction guard holds
                std::vector<std::pair<std::string, std::vector<double>>> phases;
                if (degree == 1) {
                    for (i64 q = 1; q <= qmax; ++q)
                        for (i64 a = 0; a < q; ++a)
                            if ((a == 0 && q == 1) || std::gcd(a, q) == 1)
                                phases.emplace_back(
                                    std::to_string(a) + "/" + std::to_string(q),
                                    std::vector<double>{0.0, static_cast<double>(a) /
                                                                 static_cast<double>(q)});
                    for (i64 t = 0; t < nrandom; ++t) {
                        double al = u(rng);
                        phases.emplace_back(fmt(al), std::vector<double>{0.0, al});
                    }
                } else {
                    for (i64 t = 0; t < nrandom; ++t) {
                        std::vector<double> coeffs(static_cast<size_t>(degree) + 1);
                        for (auto& c : coeffs) c = u(rng);
                        phases.emplace_back("poly" + std::to_string(t), coeffs);
                    }
                }
                // per-phase results land in indexed slots, so the sweep is
                // deterministic for any thread count
                std::vector<cd> results(phases.size());
                parallel_chunks(static_cast<i64>(phases.size()), [&](i64 lo, i64 hi, int) {
                    for (i64 i = lo; i < hi; ++i) {
                        auto base = make_poly(PolyMod1::Basis::binomial, degree == 1 ? 0 : X + Hr / 2,
                                              phases[static_cast<size_t>(i)].second);
                        results[static_cast<size_t>(i)] = exp_sum(f, base);
                    }
                });
                for (size_t i = 0; i < phases.size(); ++i) {
                    cd v = results[i];
                    double norm = std::abs(v) / static_cast<double>(Hr);
                    supval = std::max(supval, norm);
                    csv << phases[i].first << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << ','
                        << fmt(std::abs(v)) << ',' << fmt(norm) << '\n';
                }
            } else {
                std::uniform_real_distribution<double> ub(-1.0, 1.0);
                for (i64 t = 0; t < nrandom; ++t) {
                    HeisPolySeq seq;
                    seq.g0 = {ub(rng), ub(rng), ub(rng)};
                    seq.g1 = {ub(rng), ub(rng), ub(rng)};
                    seq.g2z = ub(rng);
                    NilFunction F;
                    F.xi = 1;
                    cd v = nil_corr(f, seq, F);
                    double norm = std::abs(v) / static_cast<double>(Hr);
                    supval = std::max(supval, norm);
                    csv << "seq" << t << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << ','
                        << fmt(std::abs(v)) << ',' << fmt(norm) << '\n';
                }
            }
            if (!out.empty()) {
                std::ofstream o(out);
                o << csv.str();
                manifest.write(out);
            }
            std::cout << json{{"sup_normalized", supval}}.dump() << '\n';
        } else if (*gowers_cmd) {
            i64 Hr = resolve_H(X, H, theta);
            manifest.config = {{"cmd", "gowers"}, {"X", X}, {"H", Hr}, {"fn", fn}, {"s", s_order}};
            auto slab = make_fn_slab(fn, X, Hr, ap, k);
            auto r = gowers_norm(slab, s_order);
            std::cout << json{{"s", r.s},
                              {"X", r.X},
                              {"H", r.H},
                              {"unnormalized", r.unnormalized},
                              {"normalizer", r.normalizer},
                              {"normalized", r.normalized}}
                             .dump()
                      << '\n';
        } else if (*part_cmd) {
            if (pJlo < 0) pJlo = pM;
            if (pJhi < 0) pJhi = 2 * pM;
            HyperbolaParams p{X, H, pM, pJlo, pJhi, pQ};
            manifest.config = {{"cmd", "partition"}, {"X", X}, {"H", H}, {"M", pM},
                               {"Jlo", pJlo}, {"Jhi", pJhi}, {"Q", pQ}, {"verify", do_verify}};
            auto part = partition_hyperbola(p);
            if (!out.empty()) {
                std::ofstream o(out);
                o << part.dump_jsonl();
                manifest.write(out);
            }
            json rep{{"points", part.stats.total_points},
                     {"progressions", part.stats.total_progressions},
                     {"max_length", part.stats.max_length},
                     {"a_ratio", {part.stats.min_a_ratio, part.stats.max_a_ratio}}};
            if (do_verify) {
                auto v = verify_partition(part);
                rep["verify"] = v.pass ? "PASS" : "FAIL";
                rep["fitted_family_C"] = v.fitted_family_C;
                rep["fitted_total_C"] = v.fitted_total_C;
                rep["exhaustive"] = v.exhaustive;
                if (!v.pass) rep["failure"] = v.failure;
                std::cout << rep.dump() << '\n';
                return v.pass ? 0 : 3;
            }
            std::cout << rep.dump() << '\n';
        } else if (*classify_cmd) {
            std::vector<double> alphas;
            std::stringstream ss(cl_alphas);
            std::string item;
            while (std::getline(ss, item, ',')) alphas.push_back(std::stod(item));
            manifest.config = {{"cmd", "classify"}, {"theta", cl_theta}, {"alphas", alphas}};
            auto cls = classify_exponents(alphas, cl_theta);
            std::cout << cls.json() << '\n';
            if (!out.empty()) {
                std::ofstream o(out);
                o << cls.json() << '\n';
                manifest.write(out);
            }
        } else if (*hb_cmd) {
            manifest.config = {{"cmd", "hb-check"}, {"X", X}, {"L", hb_L}, {"target", hb_target}};
            auto tag = hb_target == "mu" ? FnKind::mu : FnKind::lambda_vm;
            auto dec = heath_brown(tag, X, hb_L);
            i64 lo = X / 2, hi = 4 * X;
            double max_resid = 0.0;
            if (tag == FnKind::mu) {
                auto vals = evaluate_components_exact_window(dec.components, lo, hi);
                auto mu = sieve_slab(lo - 1, hi - lo + 1, FnKind::Mu());
                for (i64 n = lo; n <= hi; ++n)
                    max_resid = std::max(
                        max_resid,
                        std::abs(static_cast<double>(vals[static_cast<size_t>(n - lo)]) - mu.at_n(n)));
            } else {
                auto vals = evaluate_components_window(dec.components, lo, hi);
                auto vm = sieve_slab(lo - 1, hi - lo + 1, FnKind::LambdaVm());
                for (i64 n = lo; n <= hi; ++n)
                    max_resid =
                        std::max(max_resid, std::abs(vals[static_cast<size_t>(n - lo)] - vm.at_n(n)));
            }
            std::cout << json{{"components", dec.components.size()},
                              {"cutoff", dec.z},
                              {"mu_support_max", dec.mu_support_max},
                              {"max_residual", max_resid}}
                             .dump()
                      << '\n';
        } else if (*ram_cmd) {
            manifest.config = {{"cmd", "ramare-check"}, {"X", X}, {"H", H}, {"P", rP}, {"Q", rQ},
                               {"fn", fn}};
            auto fi = factor_interval(X, H);
            MultiplicativeFn mf;
            int bound_k;
            if (fn == "mu") {
                mf = mu_of_factors;
                bound_k = 1;
            } else if (fn == "d2") {
                mf = [](const FactoredInterval::Factors& fc) { return dk_int_of_factors(fc, 2); };
                bound_k = 2;
            } else {
                throw std::invalid_argument("ramare-check: --fn must be mu or d2");
            }
            auto dec = ramare_decompose(fi, rP, rQ, mf);
            bool equal = true;
            for (i64 i = 0; i < H; ++i)
                if (!(dec.lhs[static_cast<size_t>(i)] == dec.rhs[static_cast<size_t>(i)])) equal = false;
            bool bounded = true;
            auto frc = factor_interval(0, 12000);
            for (auto& [r, a] : dec.a_r) {
                auto bound = Rat(dk_int_of_factors(frc.factors_of(static_cast<i64>(r)), bound_k + 1));
                if (!(a.abs() <= bound)) bounded = false;
            }
            std::cout << json{{"identity_exact", equal}, {"coefficients_bounded", bounded},
                              {"emitted", dec.a_r.size()}}
                             .dump()
                      << '\n';
            if (!equal || !bounded) return 3;
        } else if (*ss_cmd) {
            auto sys = AffineLinearSystem::from_json(sys_json);
            manifest.config = {{"cmd", "singular-series"}, {"system", json::parse(sys_json)},
                               {"pmax", pmax}, {"dk", ss_k}, {"J", ss_J}};
            auto ps = primes_upto(static_cast<u64>(pmax));
            std::ostringstream csv;
            csv << "p,beta_p,abs_beta_minus_1_times_p2\n";
            double product = 1.0;
            for (u64 p : ps) {
                double b;
                if (ss_k >= 2)
                    b = local_factor_dk(sys, static_cast<i64>(p), ss_k, ss_J).value.to_double();
                else
                    b = local_factor_lambda(sys, static_cast<i64>(p)).to_double();
                product *= b;
                csv << p << ',' << fmt(b) << ','
                    << fmt(std::abs(b - 1.0) * static_cast<double>(p) * static_cast<double>(p))
                    << '\n';
            }
            if (!out.empty()) {
                std::ofstream o(out);
                o << csv.str();
                manifest.write(out);
            }
            std::cout << json{{"product", product}, {"primes", ps.size()}}.dump() << '\n';
        } else if (*ps_cmd) {
            manifest.config = {{"cmd", "prime-solutions"}, {"N", ps_N}, {"side_exp", ps_side_exp},
                               {"pmax", ps_pmax}};
            AffineLinearSystem sys;
            sys.d = 2;
            sys.forms = {{{1, 0}, 0}, {{0, 1}, 0}, {{-1, -1}, ps_N}};
            i64 half = static_cast<i64>(std::ceil(std::pow(static_cast<double>(ps_N), ps_side_exp)));
            i64 c = ps_N / 3;
            Box box{{c - half, c - half}, {2 * half, 2 * half}};
            std::vector<IntervalSlab> slabs;
            for (int i = 0; i < sys.t(); ++i) {
                auto [lo, hi] = form_range(sys, box, i);
                i64 slab_lo = std::max<i64>(0, lo - 1);
                slabs.push_back(sieve_slab(slab_lo, hi - slab_lo, FnKind::LambdaVm()));
            }
            std::vector<const IntervalSlab*> w{&slabs[0], &slabs[1], &slabs[2]};
            double count = count_weighted_solutions(sys, box, w);
            double product = 1.0;
            for (u64 p : primes_upto(static_cast<u64>(ps_pmax)))
                product *= local_factor_lambda(sys, static_cast<i64>(p)).to_double();
            auto arch = archimedean_factor(sys, box, {ArchimedeanWeight::lambda, 2});
            double predicted = arch.value * product;
            std::cout << json{{"count", count},
                              {"predicted", predicted},
                              {"ratio", count / predicted},
                              {"archimedean", arch.value},
                              {"local_product", product}}
                             .dump()
                      << '\n';
        } else if (*ma_cmd) {
            i64 Hr = resolve_H(X, H, theta);
            manifest.config = {{"cmd", "major-arc"}, {"X", X}, {"H", Hr}, {"fn", fn},
                               {"qmax", ma_qmax}, {"R", ap.R}, {"eta", ap.eta}};
            auto f = residual_slab(fn, X, Hr, ap);
            std::ostringstream csv;
            csv << "q,a,sum,normalized\n";
            double worst = 0.0;
            for (i64 q = 1; q <= ma_qmax; ++q)
                for (i64 a = 0; a < q; ++a) {
                    double sum = 0.0;
                    for (i64 i = 0; i < Hr; ++i)
                        if ((f.n_at(i) % q) == a) sum += f.values[static_cast<size_t>(i)];
                    double norm = std::abs(sum) / static_cast<double>(Hr);
                    worst = std::max(worst, norm);
                    csv << q << ',' << a << ',' << fmt(sum) << ',' << fmt(norm) << '\n';
                }
            if (!out.empty()) {
                std::ofstream o(out);
                o << csv.str();
                manifest.write(out);
            }
            std::cout << json{{"max_normalized", worst}}.dump() << '\n';
        }
    } catch (const std::exception& e) {
        std::cout << json{{"error", e.what()}}.dump() << '\n';
        return 2;
    }
    return 0;
}
