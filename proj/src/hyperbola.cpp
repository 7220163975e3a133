#include "ntshort/hyperbola.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace ntshort {

void check_hyperbola_params(const HyperbolaParams& p) {
    auto fail = [](const std::string& s) { throw std::invalid_argument("hyperbola: " + s); };
    if (p.X < 1 || p.H < 1) fail("X >= 1 and H >= 1 required");
    double X = static_cast<double>(p.X), H = static_cast<double>(p.H), M = static_cast<double>(p.M);
    if (H < std::cbrt(X) - 1e-9) fail("H >= X^{1/3} violated");
    if (H > X) fail("H <= X violated");
    if (M < 1) fail("M >= 1 required");
    if (M > std::sqrt(X) + 1e-9) fail("M <= sqrt(X) violated");
    if (p.J_lo < p.M || p.J_hi > 2 * p.M || p.J_lo > p.J_hi)
        fail("J must satisfy M <= J_lo <= J_hi <= 2M");
    if (p.Q < 1) fail("Q >= 1 required");
    if (static_cast<double>(p.Q) < M / H - 1e-9) fail("Q >= M/H violated");
    if (static_cast<double>(p.Q) > M / std::pow(H * X, 0.25) + 1e-9)
        fail("Q <= M/(HX)^{1/4} violated");
}

namespace {

// Smallest q in [1, Q] whose Dirichlet interval [a/q - 1/(Qq), a/q + 1/(Qq)]
// contains n/m, a the nearest integer to q n/m; exactly |qn - am| Q <= m.
// Reducible (a, q) never win the scan: the reduced fraction qualifies at q/d.
std::pair<i64, i64> assign_fraction(i64 m, i64 n, i64 Q) {
    for (i64 q = 1; q <= Q; ++q) {
        i64 a = (2 * q * n + m) / (2 * m);
        for (i64 cand : {a, a - 1, a + 1}) {
            if (cand < 0) continue;  // a = 0 only pairs with q = 1
            if (std::llabs(q * n - cand * m) * Q <= m && std::gcd(cand, q) == 1)
                return {q, cand};
        }
    }
    throw std::logic_error("hyperbola: Dirichlet assignment failed");
}

struct Pt {
    i64 q, a, c, m, n;
    bool operator<(const Pt& o) const {
        return std::tie(q, a, c, m) < std::tie(o.q, o.a, o.c, o.m);
    }
};

}  // namespace

HyperbolaPartition partition_hyperbola(const HyperbolaParams& p) {
    check_hyperbola_params(p);
    HyperbolaPartition part;
    part.params = p;

    i64 chop = std::max<i64>(1, static_cast<i64>(std::floor(
                                    static_cast<double>(p.H) * static_cast<double>(p.Q) /
                                    static_cast<double>(p.M))));

    std::vector<Pt> pts;
    for (i64 m = p.J_lo + 1; m <= p.J_hi; ++m) {
        i64 n_lo = p.X / m + 1, n_hi = (p.X + p.H) / m;
        for (i64 n = n_lo; n <= n_hi; ++n) {
            auto [q, a] = assign_fraction(m, n, p.Q);
            pts.push_back({q, a, q * n + a * m, m, n});
        }
    }
    std::sort(pts.begin(), pts.end());

    double aq_scale = static_cast<double>(p.X) / (static_cast<double>(p.M) * static_cast<double>(p.M));
    double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;

    // consecutive points of one (q,a,c) group arrive in ascending m; emit
    // maximal m-step-q runs chopped to the length bound
    size_t i = 0;
    while (i < pts.size()) {
        size_t j = i + 1;
        while (j < pts.size() && pts[j].q == pts[i].q && pts[j].a == pts[i].a &&
               pts[j].c == pts[i].c && pts[j].m == pts[j - 1].m + pts[i].q)
            ++j;
        auto& fam = part.families[{pts[i].q, pts[i].a}];
        for (size_t s = i; s < j; s += static_cast<size_t>(chop)) {
            size_t e = std::min(j, s + static_cast<size_t>(chop));
            Progression2D prog;
            prog.m0 = pts[s].m;
            prog.n0 = pts[s].n;
            prog.q = pts[i].q;
            prog.a = pts[i].a;
            prog.length = static_cast<i64>(e - s);
            fam.push_back(prog);
            part.stats.max_length = std::max(part.stats.max_length, prog.length);
        }
        i = j;
    }
    part.stats.total_points = static_cast<i64>(pts.size());
    for (auto& [key, fam] : part.families) {
        part.stats.total_progressions += static_cast<i64>(fam.size());
        double ratio = static_cast<double>(key.second) / (aq_scale * static_cast<double>(key.first));
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
    }
    part.stats.min_a_ratio = part.families.empty() ? 0.0 : min_ratio;
    part.stats.max_a_ratio = part.families.empty() ? 0.0 : max_ratio;
    return part;
}

std::string HyperbolaPartition::dump_jsonl() const {
    std::ostringstream out;
    for (const auto& [key, fam] : families)
        for (const auto& prog : fam)
            out << "{\"q\":" << prog.q << ",\"a\":" << prog.a << ",\"m0\":" << prog.m0
                << ",\"n0\":" << prog.n0 << ",\"len\":" << prog.length << "}\n";
    return out.str();
}

VerifyReport verify_partition(const HyperbolaPartition& part, i64 enumeration_budget,
                              u64 sample_seed) {
    const auto& p = part.params;
    VerifyReport rep;
    auto fail = [&](std::string why) {
        rep.pass = false;
        rep.failure = std::move(why);
        return rep;
    };

    double X = static_cast<double>(p.X), M = static_cast<double>(p.M), Q = static_cast<double>(p.Q);
    double len_bound = static_cast<double>(p.H) * Q / M;

    std::vector<std::pair<i64, i64>> covered;
    for (const auto& [key, fam] : part.families) {
        auto [q, a] = key;
        if (q < 1 || q > p.Q) return fail("family q out of [1, Q]");
        if (std::gcd(a, q) != 1) return fail("family (a,q) not coprime");
        double family_bound = M * M * M / (X * Q * Q * static_cast<double>(q));
        rep.fitted_family_C =
            std::max(rep.fitted_family_C, static_cast<double>(fam.size()) / std::max(1e-30, family_bound));
        for (const auto& prog : fam) {
            if (prog.q != q || prog.a != a) return fail("progression spacing differs from family key");
            if (prog.length < 1) return fail("empty progression listed");
            if (static_cast<double>(prog.length) > len_bound + 1e-9)
                return fail("progression length exceeds HQ/M");
            i64 c = q * prog.n0 + a * prog.m0;
            for (i64 j = 0; j < prog.length; ++j) {
                auto [m, n] = prog.point(j);
                if (!(m > p.J_lo && m <= p.J_hi)) return fail("point leaves J");
                i128 prod = static_cast<i128>(m) * n;
                if (!(prod > p.X && prod <= p.X + p.H)) return fail("point leaves hyperbola shell");
                if (q * n + a * m != c) return fail("Bezout level not constant along progression");
                covered.emplace_back(m, n);
            }
        }
    }
    std::sort(covered.begin(), covered.end());
    if (std::adjacent_find(covered.begin(), covered.end()) != covered.end())
        return fail("duplicate point across progressions");
    rep.set_size = static_cast<i64>(covered.size());
    rep.fitted_total_C = static_cast<double>(covered.size()) / static_cast<double>(p.H);

    i64 direct = 0;
    for (i64 m = p.J_lo + 1; m <= p.J_hi; ++m) direct += (p.X + p.H) / m - p.X / m;
    if (direct != rep.set_size) return fail("partition does not cover the set (count mismatch)");

    auto contains = [&](i64 m, i64 n) {
        return std::binary_search(covered.begin(), covered.end(), std::pair<i64, i64>(m, n));
    };
    if (direct <= enumeration_budget) {
        for (i64 m = p.J_lo + 1; m <= p.J_hi; ++m)
            for (i64 n = p.X / m + 1; n <= (p.X + p.H) / m; ++n)
                if (!contains(m, n)) return fail("enumerated point missing from partition");
        rep.exhaustive = true;
    } else {
        rep.exhaustive = false;
        std::mt19937_64 rng(sample_seed);
        std::uniform_int_distribution<i64> pick_m(p.J_lo + 1, p.J_hi);
        for (int t = 0; t < 100000; ++t) {
            i64 m = pick_m(rng);
            i64 n_lo = p.X / m + 1, n_hi = (p.X + p.H) / m;
            if (n_lo > n_hi) continue;
            std::uniform_int_distribution<i64> pick_n(n_lo, n_hi);
            if (!contains(m, pick_n(rng))) return fail("sampled point missing from partition");
        }
    }
    rep.pass = true;
    return rep;
}

}  // namespace ntshort
