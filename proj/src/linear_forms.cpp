#include "ntshort/linear_forms.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace ntshort {

bool pairwise_independent(const AffineLinearSystem& sys) {
    for (size_t i = 0; i < sys.forms.size(); ++i)
        for (size_t j = i + 1; j < sys.forms.size(); ++j) {
            // dependent iff every 2x2 minor of (dot_i; dot_j) vanishes
            const auto& a = sys.forms[i].dot;
            const auto& b = sys.forms[j].dot;
            bool dependent = true;
            for (int r = 0; r < sys.d && dependent; ++r)
                for (int s = r + 1; s < sys.d && dependent; ++s)
                    if (static_cast<i128>(a[static_cast<size_t>(r)]) * b[static_cast<size_t>(s)] !=
                        static_cast<i128>(a[static_cast<size_t>(s)]) * b[static_cast<size_t>(r)])
                        dependent = false;
            if (sys.d == 1) dependent = a[0] == 0 || b[0] == 0 || true;  // scalars
            if (dependent) return false;
        }
    return true;
}

void check_system(const AffineLinearSystem& sys) {
    if (sys.d < 1) throw std::invalid_argument("system: d >= 1");
    for (const auto& f : sys.forms)
        if (static_cast<int>(f.dot.size()) != sys.d)
            throw std::invalid_argument("system: form arity mismatch");
    // constellation systems (d = 1, shifted copies of n) are allowed for the
    // local/archimedean computations; only literal duplicates are rejected
    for (size_t i = 0; i < sys.forms.size(); ++i)
        for (size_t j = i + 1; j < sys.forms.size(); ++j)
            if (sys.forms[i].dot == sys.forms[j].dot &&
                sys.forms[i].constant == sys.forms[j].constant)
                throw std::invalid_argument("system: duplicate forms");
}

Rat local_factor_lambda(const AffineLinearSystem& sys, i64 p) {
    check_system(sys);
    if (p < 2) throw std::invalid_argument("local_factor: p must be prime >= 2");
    double pd = std::pow(static_cast<double>(p), sys.d);
    if (pd > 1e8) throw std::invalid_argument("local_factor: p^d exceeds the 1e8 enumeration guard");

    const int t = sys.t();
    i64 count = 0;  // points with every form nonzero mod p
    std::vector<i64> n(static_cast<size_t>(sys.d), 0);
    i64 total = static_cast<i64>(pd + 0.5);
    for (i64 it = 0; it < total; ++it) {
        i64 v = it;
        for (int j = 0; j < sys.d; ++j) { n[static_cast<size_t>(j)] = v % p; v /= p; }
        bool ok = true;
        for (const auto& f : sys.forms)
            if (((f.eval(n) % p) + p) % p == 0) { ok = false; break; }
        count += ok;
    }
    // (p/(p-1))^t * count / p^d
    Rat r(count, 1);
    for (int i = 0; i < t; ++i) r = r * Rat(p, p - 1);
    for (int j = 0; j < sys.d; ++j) r = r / Rat(p, 1);
    return r;
}

DkLocalFactor local_factor_dk(const AffineLinearSystem& sys, i64 p, int k, int J) {
    check_system(sys);
    if (p < 2 || k < 1 || J < 1) throw std::invalid_argument("local_factor_dk: bad arguments");
    double pJd = std::pow(static_cast<double>(p), static_cast<double>(J) * sys.d);
    if (pJd > 1e8) throw std::invalid_argument("local_factor_dk: p^{Jd} exceeds the 1e8 guard");

    const int t = sys.t();
    i64 pJ = 1;
    for (int i = 0; i < J; ++i) pJ *= p;

    auto dkp = [&](i64 m) -> i64 {
        // C(k-1+v, k-1) with v = v_p(m mod p^J) truncated at J
        i64 mm = ((m % pJ) + pJ) % pJ;
        int v = 0;
        if (mm == 0) v = J;
        else
            while (mm % p == 0) { mm /= p; ++v; }
        return static_cast<i64>(binom_i128(static_cast<i64>(k) - 1 + v, k - 1));
    };

    i128 S = 0;
    std::vector<i64> n(static_cast<size_t>(sys.d), 0);
    i64 total = static_cast<i64>(pJd + 0.5);
    for (i64 it = 0; it < total; ++it) {
        i64 v = it;
        for (int j = 0; j < sys.d; ++j) { n[static_cast<size_t>(j)] = v % pJ; v /= pJ; }
        i128 prod = 1;
        for (const auto& f : sys.forms) prod *= dkp(f.eval(n));
        S += prod;
    }
    // ((p-1)/p)^{t(k-1)} * S / p^{Jd}
    Rat r(S, 1);
    for (int i = 0; i < t * (k - 1); ++i) r = r * Rat(p - 1, p);
    for (int i = 0; i < J * sys.d; ++i) r = r / Rat(p, 1);

    // geometric tail: each form's v > J contribution is at most
    // t * sum_{v > J} C(k-1+v, k-1) (max factor)^{t-1} p^{-v} (crude, finite)
    double maxfac = static_cast<double>(binom_i128(static_cast<i64>(k) - 1 + J, k - 1));
    double tail = 0.0;
    for (int v = J + 1; v <= J + 200; ++v)
        tail += static_cast<double>(binom_i128(static_cast<i64>(k) - 1 + v, k - 1)) *
                std::pow(static_cast<double>(p), -v);
    tail *= t * std::pow(maxfac, t - 1);
    return {r, tail};
}

namespace {
void check_box(const AffineLinearSystem& sys, const Box& box) {
    if (static_cast<int>(box.lo.size()) != sys.d || static_cast<int>(box.len.size()) != sys.d)
        throw std::invalid_argument("box dimension mismatch");
    for (i64 l : box.len)
        if (l < 1) throw std::invalid_argument("box sides must be >= 1");
}
}  // namespace

ArchimedeanResult archimedean_factor(const AffineLinearSystem& sys, const Box& box,
                                     ArchimedeanWeight weight) {
    check_system(sys);
    check_box(sys, box);

    int nodes_exp = sys.d <= 2 ? 10 : (sys.d == 3 ? 6 : 4);
    auto integrate = [&](int ne) {
        i64 nodes = i64(1) << ne;
        std::vector<double> x(static_cast<size_t>(sys.d));
        double cell = 1.0;
        for (int j = 0; j < sys.d; ++j)
            cell *= static_cast<double>(box.len[static_cast<size_t>(j)]) / static_cast<double>(nodes);
        double total = 0.0;
        i64 points = 1;
        for (int j = 0; j < sys.d; ++j) points *= nodes;
        for (i64 it = 0; it < points; ++it) {
            i64 v = it;
            for (int j = 0; j < sys.d; ++j) {
                i64 g = v % nodes;
                v /= nodes;
                x[static_cast<size_t>(j)] = static_cast<double>(box.lo[static_cast<size_t>(j)]) +
                                            (static_cast<double>(g) + 0.5) *
                                                static_cast<double>(box.len[static_cast<size_t>(j)]) /
                                                static_cast<double>(nodes);
            }
            double w = 1.0;
            for (const auto& f : sys.forms) {
                double val = static_cast<double>(f.constant);
                for (int j = 0; j < sys.d; ++j)
                    val += static_cast<double>(f.dot[static_cast<size_t>(j)]) * x[static_cast<size_t>(j)];
                if (weight.kind == ArchimedeanWeight::lambda) {
                    if (val <= 0.0) { w = 0.0; break; }
                } else {
                    double lp = val > 1.0 ? std::log(val) : 0.0;
                    double fac = 1.0;
                    for (int i = 2; i <= weight.k - 1; ++i) fac *= i;
                    w *= std::pow(lp, weight.k - 1) / fac;
                    if (w == 0.0) break;
                }
            }
            total += w;
        }
        return total * cell;
    };
    double fine = integrate(nodes_exp);
    double coarse = integrate(nodes_exp - 1);
    return {fine, std::abs(fine - coarse)};
}

std::pair<i64, i64> form_range(const AffineLinearSystem& sys, const Box& box, int i) {
    const auto& f = sys.forms[static_cast<size_t>(i)];
    i64 lo = f.constant, hi = f.constant;
    for (int j = 0; j < sys.d; ++j) {
        i64 c = f.dot[static_cast<size_t>(j)];
        i64 a = box.lo[static_cast<size_t>(j)] + 1;
        i64 b = box.lo[static_cast<size_t>(j)] + box.len[static_cast<size_t>(j)];
        lo += c >= 0 ? c * a : c * b;
        hi += c >= 0 ? c * b : c * a;
    }
    return {lo, hi};
}

double count_weighted_solutions(const AffineLinearSystem& sys, const Box& box,
                                const std::vector<const IntervalSlab*>& weights) {
    check_system(sys);
    check_box(sys, box);
    if (static_cast<int>(weights.size()) != sys.t())
        throw std::invalid_argument("count_weighted_solutions: one weight slab per form");
    if (box.volume() > 1e9)
        throw std::invalid_argument("count_weighted_solutions: box exceeds the 1e9 point budget");

    std::vector<i64> n(static_cast<size_t>(sys.d));
    i64 points = 1;
    for (int j = 0; j < sys.d; ++j) points *= box.len[static_cast<size_t>(j)];

    double total = 0.0;
    for (i64 it = 0; it < points; ++it) {
        i64 v = it;
        for (int j = 0; j < sys.d; ++j) {
            n[static_cast<size_t>(j)] =
                box.lo[static_cast<size_t>(j)] + 1 + (v % box.len[static_cast<size_t>(j)]);
            v /= box.len[static_cast<size_t>(j)];
        }
        double w = 1.0;
        for (int i = 0; i < sys.t() && w != 0.0; ++i) {
            i64 val = sys.forms[static_cast<size_t>(i)].eval(n);
            const IntervalSlab* s = weights[static_cast<size_t>(i)];
            if (val <= 0 || val <= s->X || val > s->X + s->H) w = 0.0;
            else w *= s->at_n(val);
        }
        total += w;
    }
    return total;
}

std::string AffineLinearSystem::json() const {
    nlohmann::json forms_j = nlohmann::json::array();
    for (const auto& f : forms) forms_j.push_back({{"dot", f.dot}, {"const", f.constant}});
    nlohmann::json j{{"d", d}, {"t", t()}, {"forms", forms_j}};
    return j.dump();
}

AffineLinearSystem AffineLinearSystem::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    AffineLinearSystem sys;
    sys.d = j.at("d").get<int>();
    for (const auto& fj : j.at("forms")) {
        AffineForm f;
        f.dot = fj.at("dot").get<std::vector<i64>>();
        f.constant = fj.at("const").get<i64>();
        sys.forms.push_back(std::move(f));
    }
    check_system(sys);
    return sys;
}

}  // namespace ntshort
