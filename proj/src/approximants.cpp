#include "ntshort/approximants.hpp"

#include <algorithm>
#include <cmath>

namespace ntshort {

namespace {

void check_level(double R) {
    if (!(R >= 2.0)) throw std::invalid_argument("approximant level must be >= 2");
}

// primes strictly below R
std::vector<u64> primes_below(double R) {
    if (R <= 2.0) return {};
    return primes_upto(static_cast<u64>(std::ceil(R)) - 1);
}

double sieve_weight(const std::vector<u64>& ps) {
    double w = 1.0;
    for (u64 p : ps) w *= static_cast<double>(p) / static_cast<double>(p - 1);
    return w;
}

// marks multiples of any prime in ps within (X, X+H]
std::vector<char> has_small_factor(i64 X, i64 H, const std::vector<u64>& ps) {
    std::vector<char> hit(static_cast<size_t>(H), 0);
    for (u64 p : ps) {
        u64 first = (static_cast<u64>(X) / p + 1) * p;
        for (u64 n = first; n <= static_cast<u64>(X + H); n += p)
            hit[static_cast<size_t>(static_cast<i64>(n) - X - 1)] = 1;
    }
    return hit;
}

}  // namespace

double lambda_sharp(u64 n, double R) {
    if (n < 1) throw std::invalid_argument("lambda_sharp: n >= 1 required");
    check_level(R);
    auto ps = primes_below(R);
    for (u64 p : ps)
        if (n % p == 0) return 0.0;
    return sieve_weight(ps);
}

IntervalSlab lambda_sharp_slab(i64 X, i64 H, double R) {
    check_interval_args(X, H);
    check_level(R);
    auto ps = primes_below(R);
    double w = sieve_weight(ps);
    auto hit = has_small_factor(X, H, ps);
    IntervalSlab s;
    s.X = X;
    s.H = H;
    s.kind = FnKind{FnKind::lambda_sharp};
    s.values.resize(static_cast<size_t>(H));
    for (i64 i = 0; i < H; ++i) s.values[static_cast<size_t>(i)] = hit[static_cast<size_t>(i)] ? 0.0 : w;
    return s;
}

IntervalSlab lambda_sharp_I_slab(i64 X, i64 H, double R, double trunc) {
    check_interval_args(X, H);
    check_level(R);
    if (trunc < 1.0) throw std::invalid_argument("lambda_sharp_I: trunc >= 1 required");
    auto ps = primes_below(R);
    double w = sieve_weight(ps);

    IntervalSlab s;
    s.X = X;
    s.H = H;
    s.kind = FnKind{FnKind::lambda_sharp_I};
    s.values.assign(static_cast<size_t>(H), 0.0);

    // enumerate squarefree d <= trunc composed of primes < R, add mu(d)*w on multiples
    u64 cap = static_cast<u64>(std::floor(trunc));
    std::vector<std::pair<u64, int>> divs;  // (d, mu(d))
    std::function<void(u64, size_t, int)> rec = [&](u64 d, size_t idx, int sign) {
        divs.emplace_back(d, sign);
        for (size_t i = idx; i < ps.size(); ++i) {
            if (ps[i] > cap / d) break;
            rec(d * ps[i], i + 1, -sign);
        }
    };
    rec(1, 0, 1);

    for (auto& [d, sign] : divs) {
        double add = w * sign;
        u64 first = (static_cast<u64>(X) / d + 1) * d;
        for (u64 n = first; n <= static_cast<u64>(X + H); n += d)
            s.values[static_cast<size_t>(static_cast<i64>(n) - X - 1)] += add;
    }
    return s;
}

double lambda_w(u64 n, double w) {
    if (n < 1) throw std::invalid_argument("lambda_w: n >= 1 required");
    check_level(w);
    auto ps = primes_upto(static_cast<u64>(std::floor(w)));
    for (u64 p : ps)
        if (n % p == 0) return 0.0;
    return sieve_weight(ps);
}

IntervalSlab lambda_w_slab(i64 X, i64 H, double w) {
    check_interval_args(X, H);
    check_level(w);
    auto ps = primes_upto(static_cast<u64>(std::floor(w)));
    double wt = sieve_weight(ps);
    auto hit = has_small_factor(X, H, ps);
    IntervalSlab s;
    s.X = X;
    s.H = H;
    s.kind = FnKind{FnKind::lambda_w};
    s.values.resize(static_cast<size_t>(H));
    for (i64 i = 0; i < H; ++i) s.values[static_cast<size_t>(i)] = hit[static_cast<size_t>(i)] ? 0.0 : wt;
    return s;
}

namespace {

// Ordered factorizations of m into (k-1) parts, first j parts <= R, the
// remaining parts in (R, R^2]. For each one, accumulate the polynomial
// ((t - log(s * R^{k-j}))^{k-j-1}) / ((k-j-1)! log^{k-j-1} R), s the product
// of the small parts, expanded in powers of t.
void accumulate_tuples(u64 m, int parts_left, int small_left, u64 small_prod, double R,
                       int k, int j, std::vector<double>& out) {
    if (parts_left == 0) {
        if (m != 1) return;
        int e = k - j - 1;  // degree of this contribution
        double L = std::log(static_cast<double>(small_prod)) + (k - j) * std::log(R);
        double denom = 1.0;
        for (int i = 2; i <= e; ++i) denom *= i;
        denom *= std::pow(std::log(R), e);
        // (t - L)^e / denom
        double binc = 1.0;
        double Lp = 1.0;
        for (int i = e; i >= 0; --i) {
            // coefficient of t^i: C(e, i) (-L)^(e-i) / denom
            out[static_cast<size_t>(i)] +=
                binc * ((e - i) % 2 == 0 ? Lp : -Lp) / denom;
            binc = binc * i / (e - i + 1);
            Lp *= L;
        }
        return;
    }
    bool small_slot = small_left > 0;
    for (u64 d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        double dv = static_cast<double>(d);
        if (small_slot) {
            if (dv > R) break;
            accumulate_tuples(m / d, parts_left - 1, small_left - 1, small_prod * d, R, k, j, out);
        } else {
            if (dv <= R) continue;
            if (dv > R * R) break;
            accumulate_tuples(m / d, parts_left - 1, 0, small_prod, R, k, j, out);
        }
    }
}

}  // namespace

std::vector<double> dk_model_poly(u64 m, int k, double R_k) {
    if (m < 1 || k < 2 || !(R_k >= 2.0))
        throw std::invalid_argument("dk_model_poly: need m >= 1, k >= 2, R_k >= 2");
    std::vector<double> out(static_cast<size_t>(k), 0.0);
    double cap = std::pow(R_k, 2.0 * (k - 1));
    if (static_cast<double>(m) > cap) return out;  // vanishes beyond R_k^{2k-2}
    for (int j = 0; j <= k - 1; ++j) {
        std::vector<double> part(static_cast<size_t>(k), 0.0);
        accumulate_tuples(m, k - 1, j, 1, R_k, k, j, part);
        double binkj = static_cast<double>(binom_i128(k, j));
        for (size_t i = 0; i < part.size(); ++i) out[i] += binkj * part[i];
    }
    return out;
}

DkModelTable::DkModelTable(int k, double R_k) : k_(k), rk_(R_k) {
    if (k < 2 || !(R_k >= 2.0)) throw std::invalid_argument("DkModelTable: k >= 2, R_k >= 2");
    double cap = std::pow(R_k, 2.0 * (k - 1));
    if (cap > 1e7) throw std::invalid_argument("DkModelTable: R_k^{2k-2} exceeds table budget");
    m_cap_ = static_cast<u64>(std::floor(cap + 1e-9));
    zero_.assign(static_cast<size_t>(k), 0.0);
}

void DkModelTable::build() {
    polys_.resize(m_cap_ + 1);
    for (u64 m = 1; m <= m_cap_; ++m) polys_[m] = dk_model_poly(m, k_, rk_);
}

const std::vector<double>& DkModelTable::poly(u64 m) const {
    if (m == 0 || m > m_cap_ || polys_.empty()) return zero_;
    return polys_[m];
}

IntervalSlab dk_sharp(const FactoredInterval& fi, int k, double eta) {
    if (k < 2) throw std::invalid_argument("dk_sharp: k >= 2");
    if (!(eta > 0.0 && eta <= 1.0 / (10.0 * k)))
        throw std::invalid_argument("dk_sharp: eta in (0, 1/(10k)] required");
    double X = static_cast<double>(fi.X);
    double R_k = std::pow(X, eta);
    if (R_k < 2.0) R_k = 2.0;  // degenerate desk scales
    DkModelTable table(k, R_k);
    table.build();

    IntervalSlab s;
    s.X = fi.X;
    s.H = fi.H;
    s.kind = FnKind{FnKind::dk_sharp};
    s.kind.k = k;
    s.values.assign(static_cast<size_t>(fi.H), 0.0);
    for (i64 i = 0; i < fi.H; ++i) {
        double t = std::log(static_cast<double>(fi.X + 1 + i));
        auto divs = fi.divisors_upto(i, table.m_cap());
        double v = 0.0;
        for (u64 m : divs) {
            const auto& poly = table.poly(m);
            double acc = 0.0;
            for (size_t p = poly.size(); p-- > 0;) acc = acc * t + poly[p];
            v += acc;
        }
        s.values[static_cast<size_t>(i)] = v;
    }
    return s;
}

double dk_model_upper_constant(int k, double eta, double X) {
    // Each factorization in P_m contributes at most B^{k-j-1}/(k-j-1)!
    // with B = log(2X)/log(R_k); factorization counts across all j are
    // dominated by d_{k-1}(m), and summing d_{k-1} over divisors gives d_k.
    double R_k = std::max(2.0, std::pow(X, eta));
    double B = std::log(2.0 * X) / std::log(R_k);
    double C = 0.0;
    for (int j = 0; j <= k - 1; ++j) {
        double fact = 1.0;
        for (int i = 2; i <= k - j - 1; ++i) fact *= i;
        C += static_cast<double>(binom_i128(k, j)) * std::pow(B, k - j - 1) / fact;
    }
    return C;
}

}  // namespace ntshort
