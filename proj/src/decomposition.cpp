#include "ntshort/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "json.hpp"

namespace ntshort {

namespace {

// dyadic exponent e: block (N, 2N] with N = 2^{e-1}, so e = 0 means (1/2, 1]
double block_start(int e) { return std::ldexp(1.0, e - 1); }

// integer contents of (N, 2N]: [2^{e-1}+1 .. 2^e], and {1} for e = 0
std::pair<i64, i64> block_ints(double N) {
    if (N < 1.0) return {1, 1};
    i64 n = static_cast<i64>(N);
    return {n + 1, 2 * n};
}

i64 multiset_orderings(const std::vector<int>& sorted) {
    i64 n = static_cast<i64>(sorted.size());
    i64 numer = 1;
    for (i64 i = 2; i <= n; ++i) numer *= i;
    i64 denom = 1;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        for (i64 t = 2; t <= static_cast<i64>(j - i); ++t) denom *= t;
        i = j;
    }
    return numer / denom;
}

}  // namespace

HeathBrownDecomposition heath_brown(FnKind::Tag target, i64 X, int L) {
    if (L < 1) throw std::invalid_argument("heath_brown: L >= 1");
    if (X < 2) throw std::invalid_argument("heath_brown: X >= 2");
    if (target != FnKind::mu && target != FnKind::lambda_vm)
        throw std::invalid_argument("heath_brown: target must be mu or lambda_vm");

    HeathBrownDecomposition out;
    // power-of-two cutoff z with z^L >= 4X keeps the identity exact on [X/2, 4X]
    int z_exp = 0;
    while (std::pow(std::ldexp(1.0, z_exp), L) < 4.0 * static_cast<double>(X)) ++z_exp;
    out.z = std::ldexp(1.0, z_exp);
    const int mu_emax = z_exp;  // mu blocks tile [1, z]

    const double lo_prod = static_cast<double>(X) / 2.0;
    const double hi_prod = 4.0 * static_cast<double>(X);
    int big_emax = 0;
    while (block_start(big_emax + 1) <= hi_prod) ++big_emax;

    const bool with_log = target == FnKind::lambda_vm;

    for (int j = 1; j <= L; ++j) {
        i64 sign_binom = static_cast<i64>(binom_i128(L, j));
        if (j % 2 == 0) sign_binom = -sign_binom;
        const int n_big = with_log ? j : j - 1;  // unit slots plus one log slot
        const int ell = j + n_big;
        const double support_spread = std::ldexp(1.0, ell);

        std::vector<int> mu_e(static_cast<size_t>(j));
        std::vector<int> big_e(static_cast<size_t>(n_big));

        auto emit = [&](double prod) {
            if (prod * support_spread < lo_prod || prod > hi_prod) return;
            if (!with_log) {
                ConvolutionComponent comp;
                comp.coeff = sign_binom * multiset_orderings(mu_e) * multiset_orderings(big_e);
                for (int e : mu_e) comp.factors.push_back({ConvolutionFactor::moebius, block_start(e)});
                for (int e : big_e) comp.factors.push_back({ConvolutionFactor::unit, block_start(e)});
                out.components.push_back(std::move(comp));
                return;
            }
            // one element of big_e carries the log; distinct block values
            // give distinct components
            std::vector<int> distinct = big_e;
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            for (int le : distinct) {
                std::vector<int> units = big_e;
                units.erase(std::find(units.begin(), units.end(), le));
                ConvolutionComponent comp;
                comp.coeff = sign_binom * multiset_orderings(mu_e) * multiset_orderings(units);
                for (int e : mu_e) comp.factors.push_back({ConvolutionFactor::moebius, block_start(e)});
                for (int e : units) comp.factors.push_back({ConvolutionFactor::unit, block_start(e)});
                comp.factors.push_back({ConvolutionFactor::log, block_start(le)});
                out.components.push_back(std::move(comp));
            }
        };

        std::function<void(int, int, double)> walk_big = [&](int idx, int min_e, double prod) {
            if (prod > hi_prod) return;
            if (idx == n_big) {
                emit(prod);
                return;
            }
            for (int e = min_e; e <= big_emax; ++e) {
                double np = prod * block_start(e);
                if (np > hi_prod) break;
                big_e[static_cast<size_t>(idx)] = e;
                walk_big(idx + 1, e, np);
            }
        };
        std::function<void(int, int, double)> walk_mu = [&](int idx, int min_e, double prod) {
            if (idx == j) {
                walk_big(0, 0, prod);
                return;
            }
            for (int e = min_e; e <= mu_emax; ++e) {
                double np = prod * block_start(e);
                if (np > hi_prod) break;
                mu_e[static_cast<size_t>(idx)] = e;
                walk_mu(idx + 1, e, np);
            }
        };
        walk_mu(0, 0, 1.0);
    }

    for (const auto& comp : out.components)
        for (const auto& f : comp.factors)
            if (f.kind == ConvolutionFactor::moebius)
                out.mu_support_max = std::max(out.mu_support_max, f.N);
    return out;
}

namespace {

// g := g * factor restricted to [out_lo, out_hi]
template <typename T>
void convolve_block(std::vector<T>& g, i64& g_lo, i64& g_hi, const ConvolutionFactor& f,
                    i64 out_lo, i64 out_hi, const std::vector<double>& mu_table) {
    auto [blo, bhi] = block_ints(f.N);
    std::vector<T> out(static_cast<size_t>(out_hi - out_lo + 1), T(0));
    for (i64 d = blo; d <= bhi; ++d) {
        T fd;
        switch (f.kind) {
            case ConvolutionFactor::unit: fd = T(1); break;
            case ConvolutionFactor::log:
                if constexpr (std::is_same_v<T, double>) fd = std::log(static_cast<double>(d));
                else throw std::invalid_argument("exact evaluation with log factor");
                break;
            case ConvolutionFactor::moebius:
                fd = static_cast<T>(mu_table[static_cast<size_t>(d)]);
                break;
            default: fd = T(0);
        }
        if (fd == T(0)) continue;
        i64 e_lo = std::max(g_lo, (out_lo + d - 1) / d);
        i64 e_hi = std::min(g_hi, out_hi / d);
        for (i64 e = e_lo; e <= e_hi; ++e) {
            T ge = g[static_cast<size_t>(e - g_lo)];
            if (ge != T(0)) out[static_cast<size_t>(d * e - out_lo)] += fd * ge;
        }
    }
    g = std::move(out);
    g_lo = out_lo;
    g_hi = out_hi;
}

template <typename T>
std::vector<T> evaluate_window_impl(const std::vector<ConvolutionComponent>& comps, i64 lo, i64 hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("evaluate_components: bad window");
    if (hi - lo + 1 > 8'000'000)
        throw std::invalid_argument("evaluate_components: window exceeds the array budget");

    double mu_max = 2.0;
    for (const auto& comp : comps)
        for (const auto& f : comp.factors)
            if (f.kind == ConvolutionFactor::moebius) mu_max = std::max(mu_max, 2.0 * f.N);
    std::vector<double> mu_table(static_cast<size_t>(mu_max) + 1, 0.0);
    {
        auto slab = sieve_slab(0, static_cast<i64>(mu_max), FnKind::Mu());
        for (i64 i = 0; i < slab.H; ++i)
            mu_table[static_cast<size_t>(i + 1)] = slab.values[static_cast<size_t>(i)];
    }

    std::vector<T> total(static_cast<size_t>(hi - lo + 1), T(0));
    std::vector<T> g;
    for (const auto& comp : comps) {
        // ascending block order keeps intermediate windows short
        std::vector<ConvolutionFactor> fs = comp.factors;
        std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) { return a.N < b.N; });

        const size_t nf = fs.size();
        std::vector<i64> win_lo(nf + 1), win_hi(nf + 1);
        win_lo[nf] = lo;
        win_hi[nf] = hi;
        bool dead = false;
        for (size_t i = nf; i-- > 0;) {
            auto [blo, bhi] = block_ints(fs[i].N);
            win_lo[i] = std::max<i64>(1, (win_lo[i + 1] + bhi - 1) / bhi);
            win_hi[i] = win_hi[i + 1] / blo;
            if (win_hi[i] < win_lo[i]) { dead = true; break; }
        }
        if (dead || win_lo[0] > 1 || win_hi[0] < 1) continue;

        g.assign(1, T(1));  // delta at n = 1
        i64 g_lo = 1, g_hi = 1;
        for (size_t i = 0; i < nf; ++i)
            convolve_block(g, g_lo, g_hi, fs[i], win_lo[i + 1], win_hi[i + 1], mu_table);
        for (i64 n = std::max(lo, g_lo); n <= std::min(hi, g_hi); ++n)
            total[static_cast<size_t>(n - lo)] += T(comp.coeff) * g[static_cast<size_t>(n - g_lo)];
    }
    return total;
}

}  // namespace

std::vector<double> evaluate_components(const std::vector<ConvolutionComponent>& comps, i64 N_max) {
    if (N_max > 2'000'000) throw std::invalid_argument("evaluate_components: N_max budget is 2e6");
    return evaluate_window_impl<double>(comps, 1, N_max);
}

std::vector<double> evaluate_components_window(const std::vector<ConvolutionComponent>& comps,
                                               i64 lo, i64 hi) {
    return evaluate_window_impl<double>(comps, lo, hi);
}

std::vector<i64> evaluate_components_exact_window(const std::vector<ConvolutionComponent>& comps,
                                                  i64 lo, i64 hi) {
    return evaluate_window_impl<i64>(comps, lo, hi);
}

i64 mu_of_factors(const FactoredInterval::Factors& f) {
    for (size_t j = 0; j < f.count; ++j)
        if (f.e[j] > 1) return 0;
    return f.count % 2 == 0 ? 1 : -1;
}

i64 dk_int_of_factors(const FactoredInterval::Factors& f, int k) {
    i64 v = 1;
    for (size_t j = 0; j < f.count; ++j)
        v *= static_cast<i64>(binom_i128(static_cast<i64>(k) - 1 + f.e[j], k - 1));
    return v;
}

RamareDecomposition ramare_decompose(const FactoredInterval& fi, i64 P, i64 Q,
                                     const MultiplicativeFn& f, u64 r_cap) {
    if (!(2 <= P && P < Q)) throw std::invalid_argument("ramare: 2 <= P < Q required");

    RamareDecomposition out;
    out.lhs.resize(static_cast<size_t>(fi.H));
    out.rhs.assign(static_cast<size_t>(fi.H), Rat(0));

    std::vector<i64> fvals(static_cast<size_t>(fi.H));
    std::vector<i64> omega(static_cast<size_t>(fi.H), 0);
    for (i64 i = 0; i < fi.H; ++i) {
        auto fac = fi.factors_of_index(i);
        fvals[static_cast<size_t>(i)] = f(fac);
        for (size_t j = 0; j < fac.count; ++j)
            if (static_cast<i64>(fac.p[j]) > P && static_cast<i64>(fac.p[j]) <= Q)
                ++omega[static_cast<size_t>(i)];
        out.lhs[static_cast<size_t>(i)] =
            Rat(omega[static_cast<size_t>(i)] > 0 ? fvals[static_cast<size_t>(i)] : 0);
    }

    // the identity's right side, assembled over pairs pm = n with P < p <= Q
    auto primes = primes_upto(static_cast<u64>(Q));
    for (u64 p : primes) {
        if (static_cast<i64>(p) <= P) continue;
        u64 first = (static_cast<u64>(fi.X) / p + 1) * p;
        for (u64 n = first; n <= static_cast<u64>(fi.X + fi.H); n += p) {
            size_t i = static_cast<size_t>(static_cast<i64>(n) - fi.X - 1);
            out.rhs[i] = out.rhs[i] + Rat(fvals[i], omega[i]);
        }
    }

    // a_r = f(r) sum_{r = d m1, d | rad(r)} mu(d)/(omega(m1)+1), supported on
    // r whose prime factors all lie in (P, Q]
    auto fr = factor_interval(0, static_cast<i64>(r_cap));
    for (u64 r = 1; r <= r_cap; ++r) {
        auto fac = fr.factors_of(static_cast<i64>(r));
        bool supported = true;
        for (size_t j = 0; j < fac.count; ++j)
            if (!(static_cast<i64>(fac.p[j]) > P && static_cast<i64>(fac.p[j]) <= Q)) {
                supported = false;
                break;
            }
        if (!supported) continue;
        // subsets of the (squarefree) prime set of r are the d's
        size_t np = fac.count;
        Rat acc(0);
        for (u64 mask = 0; mask < (u64(1) << np); ++mask) {
            int mu_d = std::popcount(mask) % 2 == 0 ? 1 : -1;
            // omega(m1): primes with e >= 2 stay, primes with e = 1 survive iff not in d
            i64 om = 0;
            for (size_t j = 0; j < np; ++j)
                if (fac.e[j] >= 2 || !(mask & (u64(1) << j))) ++om;
            acc = acc + Rat(mu_d, om + 1);
        }
        out.a_r.emplace_back(r, Rat(f(fac)) * acc);
    }
    return out;
}

std::string to_string(SumLabel l) {
    switch (l) {
        case SumLabel::I: return "I";
        case SumLabel::I2maj: return "I2maj";
        case SumLabel::I2: return "I2";
        case SumLabel::IImaj: return "IImaj";
        case SumLabel::IImin: return "IImin";
    }
    return "?";
}

namespace {

template <typename V>
struct Cmp;

template <>
struct Cmp<double> {
    static constexpr double slack = 1e-9;
    static bool le(double a, double b) { return a <= b + slack; }
    static bool ge(double a, double b) { return a + slack >= b; }
};
template <>
struct Cmp<Rat> {
    static bool le(const Rat& a, const Rat& b) { return a <= b; }
    static bool ge(const Rat& a, const Rat& b) { return a >= b; }
};

std::vector<int> mask_to_indices(u64 mask) {
    std::vector<int> idx;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) idx.push_back(i);
    return idx;
}

template <typename V>
ExponentClassification classify_impl(const std::vector<V>& alphas, const V& theta,
                                     const std::vector<double>& alphas_d, double theta_d) {
    const int k = static_cast<int>(alphas.size());
    ExponentClassification cls;
    cls.alphas = alphas_d;
    cls.theta = theta_d;
    if (k == 0) throw std::invalid_argument("classify: empty exponent list");

    const V one = V(1);
    const V one_minus_theta = one - theta;
    const V two_theta_minus_1 = theta + theta - one;
    const V four_theta_minus_2 = two_theta_minus_1 + two_theta_minus_1;
    const V i2_threshold = (one_minus_theta + one_minus_theta + one_minus_theta) / V(2);

    for (int i = 0; i < k; ++i)
        if (Cmp<V>::ge(alphas[static_cast<size_t>(i)], one_minus_theta)) {
            cls.holds[static_cast<int>(SumLabel::I)] = true;
            cls.w_I = {i};
            break;
        }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            V s = alphas[static_cast<size_t>(i)] + alphas[static_cast<size_t>(j)];
            if (!cls.has(SumLabel::I2maj) && Cmp<V>::ge(s, one_minus_theta)) {
                cls.holds[static_cast<int>(SumLabel::I2maj)] = true;
                cls.w_I2maj = {i, j};
            }
            if (!cls.has(SumLabel::I2) && Cmp<V>::ge(s, i2_threshold)) {
                cls.holds[static_cast<int>(SumLabel::I2)] = true;
                cls.w_I2 = {i, j};
            }
        }

    if (k <= 12) {
        const u64 full = (u64(1) << k) - 1;
        std::vector<V> subset(static_cast<size_t>(full) + 1, V(0));
        for (u64 m = 1; m <= full; ++m) {
            int low = std::countr_zero(m);
            subset[static_cast<size_t>(m)] =
                subset[static_cast<size_t>(m & (m - 1))] + alphas[static_cast<size_t>(low)];
        }
        for (u64 m = 0; m <= full && !cls.has(SumLabel::IImin); ++m) {
            if (Cmp<V>::ge(subset[static_cast<size_t>(m)], one_minus_theta) &&
                Cmp<V>::le(subset[static_cast<size_t>(m)], theta)) {
                cls.holds[static_cast<int>(SumLabel::IImin)] = true;
                cls.w_IImin_J = mask_to_indices(m);
            }
        }
        for (u64 mI = 0; mI <= full && !cls.has(SumLabel::IImaj); ++mI) {
            const V aI = subset[static_cast<size_t>(mI)];
            if (!(Cmp<V>::ge(aI, two_theta_minus_1) && Cmp<V>::le(aI, four_theta_minus_2))) continue;
            const u64 rest = full & ~mI;
            u64 mJ = rest;
            for (;;) {
                V aJ = subset[static_cast<size_t>(mJ)];
                V aJp = subset[static_cast<size_t>(rest & ~mJ)];
                V diff = Cmp<V>::ge(aJ, aJp) ? aJ - aJp : aJp - aJ;
                if (Cmp<V>::le(diff, two_theta_minus_1)) {
                    cls.holds[static_cast<int>(SumLabel::IImaj)] = true;
                    cls.w_IImaj_I = mask_to_indices(mI);
                    cls.w_IImaj_J = mask_to_indices(mJ);
                    cls.w_IImaj_Jp = mask_to_indices(rest & ~mJ);
                    break;
                }
                if (mJ == 0) break;
                mJ = (mJ - 1) & rest;
            }
        }
    } else {
        // constructive balancing greedy from the lemma's proof
        std::vector<int> order(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) order[static_cast<size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return alphas_d[static_cast<size_t>(a)] > alphas_d[static_cast<size_t>(b)];
        });
        std::vector<int> J, Jp;
        V aJ = V(0), aJp = V(0);
        for (int idx : order) {
            if (Cmp<V>::le(aJ, aJp)) {
                J.push_back(idx);
                aJ = aJ + alphas[static_cast<size_t>(idx)];
            } else {
                Jp.push_back(idx);
                aJp = aJp + alphas[static_cast<size_t>(idx)];
            }
            V diff = Cmp<V>::ge(aJ, aJp) ? aJ - aJp : aJp - aJ;
            if (!Cmp<V>::le(diff, two_theta_minus_1)) continue;
            if (!cls.has(SumLabel::IImin) && Cmp<V>::ge(aJ, one_minus_theta) &&
                Cmp<V>::le(aJ, theta)) {
                cls.holds[static_cast<int>(SumLabel::IImin)] = true;
                cls.w_IImin_J = J;
            }
            V rest = one - aJ - aJp;
            if (!cls.has(SumLabel::IImaj) && Cmp<V>::ge(rest, two_theta_minus_1) &&
                Cmp<V>::le(rest, four_theta_minus_2)) {
                cls.holds[static_cast<int>(SumLabel::IImaj)] = true;
                cls.w_IImaj_J = J;
                cls.w_IImaj_Jp = Jp;
                std::vector<int> used = J;
                used.insert(used.end(), Jp.begin(), Jp.end());
                std::sort(used.begin(), used.end());
                cls.w_IImaj_I.clear();
                for (int i = 0; i < k; ++i)
                    if (!std::binary_search(used.begin(), used.end(), i)) cls.w_IImaj_I.push_back(i);
            }
        }
    }
    return cls;
}

}  // namespace

ExponentClassification classify_exponents(const std::vector<double>& alphas, double theta) {
    double sum = std::accumulate(alphas.begin(), alphas.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("classify: exponents must sum to 1 (got " + std::to_string(sum) + ")");
    for (double a : alphas)
        if (a < -1e-15) throw std::invalid_argument("classify: exponents must be nonnegative");
    if (!(theta >= 1.0 / 3.0 - 1e-12 && theta <= 1.0 + 1e-12))
        throw std::invalid_argument("classify: theta in [1/3, 1] required");
    return classify_impl<double>(alphas, theta, alphas, theta);
}

ExponentClassification classify_exponents_exact(const std::vector<Rat>& alphas, const Rat& theta) {
    Rat sum(0);
    for (const auto& a : alphas) sum = sum + a;
    if (!(sum == Rat(1))) throw std::invalid_argument("classify_exact: exponents must sum to 1");
    std::vector<double> ad(alphas.size());
    for (size_t i = 0; i < alphas.size(); ++i) ad[i] = alphas[i].to_double();
    return classify_impl<Rat>(alphas, theta, ad, theta.to_double());
}

std::vector<SumLabel> guaranteed_conclusions(int case_index) {
    switch (case_index) {
        case 1: return {SumLabel::I, SumLabel::IImaj};
        case 2: return {SumLabel::I, SumLabel::I2, SumLabel::IImin};
        case 3: return {SumLabel::I, SumLabel::I2maj, SumLabel::IImaj};
        case 4: return {SumLabel::I2maj, SumLabel::IImaj};
        case 5: return {SumLabel::I2maj};
        case 6: return {SumLabel::I2};
    }
    throw std::invalid_argument("guaranteed_conclusions: case 1..6");
}

std::string ExponentClassification::json() const {
    nlohmann::json j;
    j["alphas"] = alphas;
    j["theta"] = theta;
    std::vector<std::string> hold;
    for (int i = 0; i < 5; ++i)
        if (holds[i]) hold.push_back(to_string(static_cast<SumLabel>(i)));
    j["holds"] = hold;
    nlohmann::json w;
    if (has(SumLabel::I)) w["I"] = w_I;
    if (has(SumLabel::I2maj)) w["I2maj"] = w_I2maj;
    if (has(SumLabel::I2)) w["I2"] = w_I2;
    if (has(SumLabel::IImaj)) w["IImaj"] = {{"I", w_IImaj_I}, {"J", w_IImaj_J}, {"Jp", w_IImaj_Jp}};
    if (has(SumLabel::IImin)) w["IImin"] = {{"J", w_IImin_J}};
    j["witnesses"] = w;
    return j.dump();
}

}  // namespace ntshort
