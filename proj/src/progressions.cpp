#include "ntshort/progressions.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

#include "json.hpp"

namespace ntshort {

std::string Progression1D::json() const {
    nlohmann::json j{{"start", start}, {"step", step}, {"length", length}};
    return j.dump();
}

namespace {

struct Best {
    double value = -1.0;
    Progression1D w;

    // lexicographic (step, start, length) tie-break, smaller wins
    void offer(double v, i64 start, i64 step, i64 len) {
        if (v > value) {
            value = v;
            w = {start, step, len};
        } else if (v == value &&
                   std::tuple(step, start, len) < std::tuple(w.step, w.start, w.length)) {
            w = {start, step, len};
        }
    }
};

template <typename T>
MaximalSumResult maximal_sum_impl(std::span<const T> f, i64 first, i64 q_max) {
    const i64 L = static_cast<i64>(f.size());
    MaximalSumResult res;
    if (L == 0) return res;
    if (q_max < 1) throw std::invalid_argument("maximal_sum: q_max >= 1 required");
    q_max = std::min(q_max, L);
    // the exact scan costs ~ |I|^2 log q_max; budget pinned at the full
    // |I| = 2^14 case, larger slabs must shrink q_max accordingly
    double work = static_cast<double>(L) * static_cast<double>(L) *
                  (1.0 + std::log(static_cast<double>(q_max)));
    if (work > 2.8e9)
        throw std::invalid_argument(
            "maximal_sum: exact scan budget exceeded (cap is |I| = 2^14 at full q_max); "
            "reduce q_max or the slab length");

    Best best;
    std::vector<cd> prefix;
    for (i64 q = 1; q <= q_max; ++q) {
        for (i64 r = 0; r < q; ++r) {
            // class positions r, r+q, ... ; prefix sums of its values
            i64 cls_len = (L - r + q - 1) / q;
            if (cls_len <= 0) continue;
            prefix.assign(static_cast<size_t>(cls_len) + 1, cd{0.0, 0.0});
            for (i64 j = 0; j < cls_len; ++j)
                prefix[static_cast<size_t>(j) + 1] =
                    prefix[static_cast<size_t>(j)] + cd(f[static_cast<size_t>(r + j * q)]);
            for (i64 i = 0; i < cls_len; ++i)
                for (i64 j = i + 1; j <= cls_len; ++j) {
                    double v = std::abs(prefix[static_cast<size_t>(j)] - prefix[static_cast<size_t>(i)]);
                    best.offer(v, first + r + i * q, q, j - i);
                }
        }
    }
    res.value = best.value < 0 ? 0.0 : best.value;
    res.witness = best.w;
    return res;
}

}  // namespace

MaximalSumResult maximal_sum(std::span<const cd> f, i64 first, i64 q_max) {
    return maximal_sum_impl(f, first, q_max);
}
MaximalSumResult maximal_sum(std::span<const double> f, i64 first, i64 q_max) {
    return maximal_sum_impl(f, first, q_max);
}

double tv_norm(std::span<const cd> f) {
    if (f.empty()) return 0.0;
    double sup = 0.0, var = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        sup = std::max(sup, std::abs(f[i]));
        if (i + 1 < f.size()) var += std::abs(f[i + 1] - f[i]);
    }
    return sup + var;
}

double tv_norm(std::span<const double> f) {
    if (f.empty()) return 0.0;
    double sup = 0.0, var = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        sup = std::max(sup, std::abs(f[i]));
        if (i + 1 < f.size()) var += std::abs(f[i + 1] - f[i]);
    }
    return sup + var;
}

double tv_norm_q(std::span<const cd> f, const Progression1D& P, i64 q) {
    if (q < 1) throw std::invalid_argument("tv_norm_q: q >= 1 required");
    if (P.length != static_cast<i64>(f.size()))
        throw std::invalid_argument("tv_norm_q: value count must match progression length");
    double total = 0.0;
    std::vector<cd> cls;
    for (i64 r = 0; r < q; ++r) {
        cls.clear();
        for (i64 j = 0; j < P.length; ++j) {
            i64 n = P.element(j);
            i64 m = ((n % q) + q) % q;
            if (m == r) cls.push_back(f[static_cast<size_t>(j)]);
        }
        total += tv_norm(std::span<const cd>(cls));
    }
    return total;
}

}  // namespace ntshort
