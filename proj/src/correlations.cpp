#include "ntshort/correlations.hpp"

#include <algorithm>
#include <numeric>

namespace ntshort {

DirichletCharacter DirichletCharacter::principal(i64 q) {
    if (q < 1) throw std::invalid_argument("character: q >= 1");
    DirichletCharacter chi;
    chi.q = q;
    chi.table.resize(static_cast<size_t>(q));
    for (i64 n = 0; n < q; ++n)
        chi.table[static_cast<size_t>(n)] = std::gcd(n, q) == 1 ? cd{1.0, 0.0} : cd{0.0, 0.0};
    return chi;
}

DirichletCharacter DirichletCharacter::chi4() {
    DirichletCharacter chi;
    chi.q = 4;
    chi.table = {cd{0, 0}, cd{1, 0}, cd{0, 0}, cd{-1, 0}};
    return chi;
}

DirichletCharacter DirichletCharacter::quadratic(i64 p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("quadratic character: odd prime modulus");
    DirichletCharacter chi;
    chi.q = p;
    chi.table.assign(static_cast<size_t>(p), cd{-1.0, 0.0});
    chi.table[0] = cd{0.0, 0.0};
    for (i64 n = 1; n < p; ++n) chi.table[static_cast<size_t>((n * n) % p)] = cd{1.0, 0.0};
    return chi;
}

DirichletCharacter DirichletCharacter::from_table(i64 q, std::vector<cd> table) {
    if (q < 1 || static_cast<i64>(table.size()) != q)
        throw std::invalid_argument("character: table length must equal q");
    DirichletCharacter chi;
    chi.q = q;
    chi.table = std::move(table);
    constexpr double kTol = 1e-9;
    for (i64 n = 0; n < q; ++n) {
        cd v = chi.table[static_cast<size_t>(n)];
        bool unit = std::abs(std::abs(v) - 1.0) <= kTol;
        bool zero = std::abs(v) <= kTol;
        if (std::gcd(n, q) == 1 ? !unit : !zero)
            throw std::invalid_argument("character: values must be roots of unity on units, 0 elsewhere");
    }
    for (i64 a = 0; a < q; ++a)
        for (i64 b = 0; b < q; ++b) {
            cd lhs = chi.table[static_cast<size_t>((a * b) % q)];
            cd rhs = chi.table[static_cast<size_t>(a)] * chi.table[static_cast<size_t>(b)];
            if (std::abs(lhs - rhs) > 1e-6)
                throw std::invalid_argument("character: table is not completely multiplicative");
        }
    return chi;
}

cd exp_sum(const IntervalSlab& f, const PolyMod1& P) {
    // guard from the design contract: coefficients times the binomial scale
    // must stay inside exact-integer double range
    PolyMod1 b = to_binomial(P);
    i64 mid = f.X + 1 + f.H / 2;
    b = recenter(b, mid);
    double reach = static_cast<double>(f.H) / 2.0 + 2.0;
    for (int j = 0; j <= b.degree(); ++j) {
        double scale = std::abs(b.coeffs[static_cast<size_t>(j)]);
        for (int i = 0; i < j; ++i) scale *= reach / (i + 1);
        if (scale > static_cast<double>(kMaxRepresentable))
            throw std::invalid_argument("exp_sum: phase magnitude exceeds exact reduction range");
    }
    cd acc{0.0, 0.0};
    for (i64 i = 0; i < f.H; ++i) {
        double v = f.values[static_cast<size_t>(i)];
        if (v == 0.0) continue;
        acc += v * e_of(eval_mod1(b, f.n_at(i)));
    }
    return acc;
}

cd twisted_sum(const IntervalSlab& f, double T, const std::optional<DirichletCharacter>& chi) {
    cd acc{0.0, 0.0};
    for (i64 i = 0; i < f.H; ++i) {
        double v = f.values[static_cast<size_t>(i)];
        if (v == 0.0) continue;
        cd term{v, 0.0};
        if (chi) {
            cd c = (*chi)(f.n_at(i));
            if (c == cd{0.0, 0.0}) continue;
            term *= c;
        }
        if (T != 0.0) {
            double phase = T * std::log(static_cast<double>(f.n_at(i)));
            term *= cd{std::cos(phase), std::sin(phase)};
        }
        acc += term;
    }
    return acc;
}

double gowers_pow(std::span<const cd> values, int s) {
    const i64 L = static_cast<i64>(values.size());
    if (s < 1) throw std::invalid_argument("gowers: s >= 1");
    if (L == 0) return 0.0;
    if (s == 1) {
        cd sum = std::accumulate(values.begin(), values.end(), cd{0.0, 0.0});
        return std::norm(sum);
    }
    double acc = 0.0;
    std::vector<cd> diff;
    for (i64 h = -(L - 1); h <= L - 1; ++h) {
        // Delta_h f supported where both x and x+h are in the window
        i64 lo = std::max<i64>(0, -h), hi = std::min(L, L - h);  // x index range [lo, hi)
        if (lo >= hi) continue;
        diff.assign(static_cast<size_t>(hi - lo), cd{0.0, 0.0});
        for (i64 x = lo; x < hi; ++x)
            diff[static_cast<size_t>(x - lo)] =
                values[static_cast<size_t>(x)] * std::conj(values[static_cast<size_t>(x + h)]);
        double inner = gowers_pow(std::span<const cd>(diff), s - 1);
        // inner is ||.||^{2^{s-1}} already
        acc += inner;
    }
    return acc;
}

double gowers_pow_cyclic(std::span<const cd> values, i64 N, int s) {
    if (static_cast<i64>(values.size()) > N)
        throw std::invalid_argument("gowers_pow_cyclic: support exceeds N");
    std::vector<cd> f(static_cast<size_t>(N), cd{0.0, 0.0});
    std::copy(values.begin(), values.end(), f.begin());
    if (s == 1) {
        cd sum = std::accumulate(f.begin(), f.end(), cd{0.0, 0.0});
        return std::norm(sum);
    }
    double acc = 0.0;
    std::vector<cd> diff(static_cast<size_t>(N));
    for (i64 h = 0; h < N; ++h) {
        for (i64 x = 0; x < N; ++x)
            diff[static_cast<size_t>(x)] =
                f[static_cast<size_t>(x)] * std::conj(f[static_cast<size_t>((x + h) % N)]);
        acc += gowers_pow_cyclic(std::span<const cd>(diff), N, s - 1);
    }
    return acc;
}

GowersResult gowers_norm(std::span<const cd> values, i64 X, int s) {
    const i64 H = static_cast<i64>(values.size());
    if (s < 1 || s > 4) throw std::invalid_argument("gowers_norm: 1 <= s <= 4");
    if (s >= 3 && H > (i64(1) << 12))
        throw std::invalid_argument("gowers_norm: H <= 4096 required for s >= 3");
    GowersResult r;
    r.s = s;
    r.X = X;
    r.H = H;
    double pw = gowers_pow(values, s);
    std::vector<cd> ones(static_cast<size_t>(H), cd{1.0, 0.0});
    double pw1 = gowers_pow(std::span<const cd>(ones), s);
    double inv = 1.0 / static_cast<double>(i64(1) << s);
    r.unnormalized = std::pow(std::max(0.0, pw), inv);
    r.normalizer = std::pow(std::max(0.0, pw1), inv);
    r.normalized = r.normalizer > 0 ? r.unnormalized / r.normalizer : 0.0;
    return r;
}

GowersResult gowers_norm(const IntervalSlab& f, int s) {
    std::vector<cd> vals(f.values.size());
    for (size_t i = 0; i < f.values.size(); ++i) vals[i] = cd{f.values[i], 0.0};
    return gowers_norm(std::span<const cd>(vals), f.X, s);
}

DirichletSupResult dirichlet_poly_sup(std::span<const double> v, i64 L,
                                      const DirichletCharacter& chi,
                                      double t_lo, double t_hi, i64 grid) {
    if (grid < 2) throw std::invalid_argument("dirichlet_poly_sup: grid >= 2");
    const i64 len = static_cast<i64>(v.size());
    std::vector<double> logs(static_cast<size_t>(len)), amps(static_cast<size_t>(len));
    std::vector<cd> chis(static_cast<size_t>(len));
    for (i64 i = 0; i < len; ++i) {
        i64 ell = L + 1 + i;
        logs[static_cast<size_t>(i)] = std::log(static_cast<double>(ell));
        amps[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] / std::sqrt(static_cast<double>(ell));
        chis[static_cast<size_t>(i)] = chi(ell);
    }
    auto eval_t = [&](double t) {
        cd acc{0.0, 0.0};
        double best = 0.0;
        i64 besty = L;
        for (i64 i = 0; i < len; ++i) {
            size_t k = static_cast<size_t>(i);
            if (amps[k] != 0.0 && chis[k] != cd{0.0, 0.0}) {
                double ph = -t * logs[k];
                acc += amps[k] * chis[k] * cd{std::cos(ph), std::sin(ph)};
            }
            double m = std::abs(acc);
            if (m > best) { best = m; besty = L + 1 + i; }
        }
        return std::pair<double, i64>(best, besty);
    };

    DirichletSupResult best;
    for (i64 g = 0; g < grid; ++g) {
        double t = t_lo + (t_hi - t_lo) * static_cast<double>(g) / static_cast<double>(grid - 1);
        auto [m, y] = eval_t(t);
        if (m > best.sup) { best.sup = m; best.argmax_t = t; best.prefix_end = y; }
    }
    // golden-section refinement around the grid argmax (heuristic sup)
    double step = (t_hi - t_lo) / static_cast<double>(grid - 1);
    double a = std::max(t_lo, best.argmax_t - step), b = std::min(t_hi, best.argmax_t + step);
    const double gr = 0.6180339887498949;
    for (int round = 0; round < 3; ++round) {
        double m1 = b - gr * (b - a), m2 = a + gr * (b - a);
        auto [v1, y1] = eval_t(m1);
        auto [v2, y2] = eval_t(m2);
        if (v1 > best.sup) { best.sup = v1; best.argmax_t = m1; best.prefix_end = y1; }
        if (v2 > best.sup) { best.sup = v2; best.argmax_t = m2; best.prefix_end = y2; }
        if (v1 < v2) a = m1; else b = m2;
    }
    return best;
}

}  // namespace ntshort
