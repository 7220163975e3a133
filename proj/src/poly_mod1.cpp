#include "ntshort/poly_mod1.hpp"

#include <algorithm>
#include <array>

#include "json.hpp"

namespace ntshort {

namespace {

constexpr int kD = kMaxPolyDegree;

// Stirling numbers up to kMaxPolyDegree: S2 (second kind), s (first kind, signed).
struct Stirling {
    std::array<std::array<i64, kD + 1>, kD + 1> S2{}, s1{};
    Stirling() {
        S2[0][0] = s1[0][0] = 1;
        for (int n = 1; n <= kD; ++n)
            for (int k = 1; k <= n; ++k) {
                S2[n][k] = S2[n - 1][k - 1] + static_cast<i64>(k) * S2[n - 1][k];
                s1[n][k] = s1[n - 1][k - 1] - static_cast<i64>(n - 1) * s1[n - 1][k];
            }
    }
};
const Stirling& stirling() {
    static Stirling t;
    return t;
}

i64 factorial(int j) {
    i64 f = 1;
    for (int i = 2; i <= j; ++i) f *= i;
    return f;
}

i64 mod_pos(i64 x, i64 m) { return ((x % m) + m) % m; }

// C(m, j) mod D via the product of j consecutive integers mod D*j!.
i64 binom_mod(i64 m, int j, i64 D) {
    if (j == 0) return mod_pos(1, D);
    if (m >= 0 && m < j) return 0;
    bool neg = false;
    if (m < 0) {  // C(m,j) = (-1)^j C(j-1-m, j)
        neg = (j % 2) != 0;
        m = static_cast<i64>(j) - 1 - m;
    }
    const i64 fj = factorial(j);
    const i64 M = D * fj;
    i128 prod = 1;
    for (int i = 0; i < j; ++i) prod = (prod * mod_pos(m - i, M)) % M;
    i64 p = static_cast<i64>(prod);
    // the true product is divisible by j!, and M is a multiple of j!
    p /= fj;
    p %= D;
    return neg ? mod_pos(-p, D) : p;
}

void validate(const PolyMod1& p) {
    if (p.coeffs.empty()) throw std::invalid_argument("poly: empty coefficient list");
    if (p.degree() > kMaxPolyDegree)
        throw std::invalid_argument("poly: degree cap is " + std::to_string(kMaxPolyDegree));
}

// multiply coefficient vectors by an integer matrix T[j][i]: out_i = sum_j in_j T[j][i]
PolyMod1 apply_int_matrix(const PolyMod1& p, const std::vector<std::vector<i128>>& T,
                          PolyMod1::Basis out_basis, i64 out_center) {
    PolyMod1 q;
    q.basis = out_basis;
    q.center = out_center;
    int d = p.degree();
    q.coeffs.assign(static_cast<size_t>(d) + 1, 0.0);
    for (int i = 0; i <= d; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= d; ++j)
            acc += p.coeffs[static_cast<size_t>(j)] * static_cast<double>(T[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        q.coeffs[static_cast<size_t>(i)] = acc;
    }
    if (p.exact) {
        q.exact = true;
        q.den = p.den;
        q.nums.assign(static_cast<size_t>(d) + 1, 0);
        for (int i = 0; i <= d; ++i) {
            i128 acc = 0;
            for (int j = 0; j <= d; ++j)
                acc += static_cast<i128>(p.nums[static_cast<size_t>(j)]) *
                       (T[static_cast<size_t>(j)][static_cast<size_t>(i)] % p.den);
            q.nums[static_cast<size_t>(i)] = static_cast<i64>(((acc % p.den) + p.den) % p.den);
        }
    }
    return q;
}

}  // namespace

PolyMod1 make_poly(PolyMod1::Basis basis, i64 center, std::vector<double> coeffs) {
    PolyMod1 p;
    p.basis = basis;
    p.center = center;
    p.coeffs = std::move(coeffs);
    validate(p);
    return p;
}

PolyMod1 make_poly_exact(PolyMod1::Basis basis, i64 center, std::vector<i64> nums, i64 den) {
    if (den < 1 || den > kMaxExactDen)
        throw std::invalid_argument("poly: exact denominator must be in [1, 1e6]");
    PolyMod1 p;
    p.basis = basis;
    p.center = center;
    p.exact = true;
    p.den = den;
    p.nums.resize(nums.size());
    p.coeffs.resize(nums.size());
    for (size_t j = 0; j < nums.size(); ++j) {
        p.nums[j] = mod_pos(nums[j], den);
        p.coeffs[j] = static_cast<double>(nums[j]) / static_cast<double>(den);
    }
    validate(p);
    return p;
}

PolyMod1 to_binomial(const PolyMod1& p) {
    validate(p);
    if (p.basis == PolyMod1::Basis::binomial) return p;
    // (n-c)^j = sum_i S2(j,i) i! C(n-c, i)
    int d = p.degree();
    std::vector<std::vector<i128>> T(static_cast<size_t>(d) + 1,
                                     std::vector<i128>(static_cast<size_t>(d) + 1, 0));
    for (int j = 0; j <= d; ++j)
        for (int i = 0; i <= j; ++i)
            T[static_cast<size_t>(j)][static_cast<size_t>(i)] =
                static_cast<i128>(stirling().S2[j][i]) * factorial(i);
    return apply_int_matrix(p, T, PolyMod1::Basis::binomial, p.center);
}

PolyMod1 to_monomial(const PolyMod1& p) {
    validate(p);
    if (p.basis == PolyMod1::Basis::monomial) return p;
    // C(n-c, j) = (1/j!) sum_i s1(j,i) (n-c)^i  -- rational matrix
    int d = p.degree();
    PolyMod1 q;
    q.basis = PolyMod1::Basis::monomial;
    q.center = p.center;
    q.coeffs.assign(static_cast<size_t>(d) + 1, 0.0);
    for (int i = 0; i <= d; ++i) {
        double acc = 0.0;
        for (int j = i; j <= d; ++j)
            acc += p.coeffs[static_cast<size_t>(j)] *
                   static_cast<double>(stirling().s1[j][i]) / static_cast<double>(factorial(j));
        q.coeffs[static_cast<size_t>(i)] = acc;
    }
    if (p.exact) {
        // common denominator becomes den * d!; keep exactness while it fits
        i64 fl = factorial(d);
        if (p.den <= kMaxExactDen / fl) {
            i64 newden = p.den * fl;
            q.exact = true;
            q.den = newden;
            q.nums.assign(static_cast<size_t>(d) + 1, 0);
            for (int i = 0; i <= d; ++i) {
                i128 acc = 0;
                for (int j = i; j <= d; ++j) {
                    // nums[j]/den * s1(j,i)/j! scaled to denominator newden
                    i128 scale = fl / factorial(j);
                    acc += static_cast<i128>(p.nums[static_cast<size_t>(j)]) * stirling().s1[j][i] * scale;
                }
                q.nums[static_cast<size_t>(i)] = mod_pos(static_cast<i64>(acc % newden), newden);
            }
        }
    }
    return q;
}

PolyMod1 recenter(const PolyMod1& p, i64 new_center) {
    validate(p);
    if (new_center == p.center) return p;
    int d = p.degree();
    i64 t = new_center - p.center;
    std::vector<std::vector<i128>> T(static_cast<size_t>(d) + 1,
                                     std::vector<i128>(static_cast<size_t>(d) + 1, 0));
    if (p.basis == PolyMod1::Basis::binomial) {
        // C(n-c, j) = C((n-c') + t, j) = sum_i C(t, j-i) C(n-c', i)
        for (int j = 0; j <= d; ++j)
            for (int i = 0; i <= j; ++i)
                T[static_cast<size_t>(j)][static_cast<size_t>(i)] = binom_i128(t, j - i);
    } else {
        // (n-c)^j = ((n-c') + t)^j = sum_i C(j,i) t^(j-i) (n-c')^i
        for (int j = 0; j <= d; ++j) {
            i128 tp = 1;
            for (int i = j; i >= 0; --i) {
                T[static_cast<size_t>(j)][static_cast<size_t>(i)] = binom_i128(j, j - i) * tp;
                tp *= t;
            }
        }
    }
    return apply_int_matrix(p, T, p.basis, new_center);
}

PolyMod1 scale_int(const PolyMod1& p, i64 q) {
    validate(p);
    PolyMod1 r = p;
    for (auto& c : r.coeffs) c *= static_cast<double>(q);
    if (r.exact)
        for (auto& n : r.nums) n = static_cast<i64>(mod_pos(static_cast<i64>((static_cast<i128>(n) * q) % r.den), r.den));
    return r;
}

PolyMod1 dilate(const PolyMod1& p, i64 a) {
    validate(p);
    if (a < 1) throw std::invalid_argument("dilate: a >= 1 required");
    PolyMod1 b = to_binomial(p);
    int d = b.degree();
    // P(an) = sum_j alpha_j C(an - c, j) = sum_i beta_i C(n, i),
    // beta_i = sum_j alpha_j T[j][i], T[j][i] = sum_r (-1)^(i-r) C(i,r) C(ar - c, j)
    std::vector<std::vector<i128>> T(static_cast<size_t>(d) + 1,
                                     std::vector<i128>(static_cast<size_t>(d) + 1, 0));
    for (int j = 0; j <= d; ++j)
        for (int i = 0; i <= d; ++i) {
            i128 acc = 0;
            for (int r = 0; r <= i; ++r) {
                i128 term = binom_i128(i, r) * binom_i128(a * r - b.center, j);
                acc += ((i - r) % 2 == 0) ? term : -term;
            }
            T[static_cast<size_t>(j)][static_cast<size_t>(i)] = acc;
        }
    return apply_int_matrix(b, T, PolyMod1::Basis::binomial, 0);
}

double eval_mod1(const PolyMod1& p, i64 n) {
    validate(p);
    const PolyMod1* q = &p;
    PolyMod1 tmp;
    if (p.basis == PolyMod1::Basis::monomial) {
        tmp = to_binomial(p);
        q = &tmp;
    }
    i64 m = n - q->center;
    if (q->exact) {
        i128 acc = 0;
        for (int j = 0; j <= q->degree(); ++j)
            acc += static_cast<i128>(q->nums[static_cast<size_t>(j)]) * binom_mod(m, j, q->den);
        i64 r = static_cast<i64>(acc % q->den);
        return static_cast<double>(r) / static_cast<double>(q->den);
    }
    double acc = 0.0;
    for (int j = 0; j <= q->degree(); ++j)
        acc = frac01(acc + frac_mul(q->coeffs[static_cast<size_t>(j)], binom_i128(m, j)));
    return acc;
}

namespace {

// ||D^j P|| rows share the binomial representation: D P has the coefficients
// shifted down with the center moved up by one.
struct DerivativeRow {
    std::vector<double> coeffs;
    std::vector<i64> nums;
    i64 center;
};

double sup_dist_on_interval(const PolyMod1& p, const Interval& I, i64 stride) {
    i64 first = I.first_int(), last = I.last_int();
    double sup = 0.0;
    for (i64 n = first; n <= last; n += stride)
        sup = std::max(sup, dist_eval(p, n));
    if (stride > 1 && last > first) sup = std::max(sup, dist_eval(p, last));
    return sup;
}

}  // namespace

double smoothness_norm(const PolyMod1& p, const Interval& I, bool* exact_out) {
    validate(p);
    if (I.length() < 1.0 - 1e-9) throw std::invalid_argument("smoothness_norm: |I| >= 1 required");
    PolyMod1 b = to_binomial(p);
    if (!b.exact) {
        // recenter near the interval so binomials stay representable
        i64 mid = I.first_int() + I.int_count() / 2;
        b = recenter(b, mid);
    }
    i64 count = I.int_count();
    i64 stride = 1;
    bool exact = true;
    if (count > kExactEvalWindow) {
        stride = (count + kExactEvalWindow - 1) / kExactEvalWindow;
        exact = false;
    }
    if (exact_out) *exact_out = exact;

    double norm = 0.0;
    double scale = 1.0;
    PolyMod1 row = b;
    for (int j = 0; j <= b.degree(); ++j) {
        norm = std::max(norm, scale * sup_dist_on_interval(row, I, stride));
        scale *= I.length();
        // backward difference: drop constant term, shift center by +1
        if (row.degree() == 0) {
            row.coeffs = {0.0};
            if (row.exact) row.nums = {0};
        } else {
            row.coeffs.erase(row.coeffs.begin());
            if (row.exact) row.nums.erase(row.nums.begin());
        }
        row.center += 1;
    }
    return norm;
}

std::optional<VinogradovHit> vinogradov_search(const PolyMod1& p, const Interval& I,
                                               i64 q_max, double tol) {
    if (q_max < 1) throw std::invalid_argument("vinogradov_search: q_max >= 1 required");
    PolyMod1 b = to_binomial(p);
    for (i64 q = 1; q <= q_max; ++q) {
        double norm = smoothness_norm(scale_int(b, q), I);
        if (norm <= tol) return VinogradovHit{q, norm};
    }
    return std::nullopt;
}

double fraction_small(const PolyMod1& p, const Interval& I, double eps) {
    i64 count = I.int_count();
    if (count <= 0) return 0.0;
    PolyMod1 b = to_binomial(p);
    if (!b.exact) b = recenter(b, I.first_int() + count / 2);
    i64 hits = 0;
    for (i64 n = I.first_int(); n <= I.last_int(); ++n)
        if (dist_eval(b, n) <= eps) ++hits;
    return static_cast<double>(hits) / static_cast<double>(count);
}

double smooth_dilate_profile(const PolyMod1& p, i64 A, const Interval& I, double threshold) {
    if (A < 1) throw std::invalid_argument("smooth_dilate_profile: A >= 1 required");
    if (I.length() < 2.0 * static_cast<double>(A))
        throw std::invalid_argument("smooth_dilate_profile: |I| >= 2A required");
    i64 hits = 0, total = 0;
    for (i64 a = A; a <= 2 * A; ++a) {
        ++total;
        Interval Ia{I.lo / static_cast<double>(a), I.hi / static_cast<double>(a)};
        if (smoothness_norm(dilate(p, a), Ia) <= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

std::string PolyMod1::json() const {
    nlohmann::json j{
        {"basis", basis == Basis::monomial ? "monomial" : "binomial"},
        {"center", center},
        {"coeffs", coeffs}};
    return j.dump();
}

PolyMod1 PolyMod1::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PolyMod1 p;
    p.basis = j.at("basis").get<std::string>() == "monomial" ? Basis::monomial : Basis::binomial;
    p.center = j.at("center").get<i64>();
    p.coeffs = j.at("coeffs").get<std::vector<double>>();
    validate(p);
    return p;
}

}  // namespace ntshort
