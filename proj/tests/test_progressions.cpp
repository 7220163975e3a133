#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ntshort/progressions.hpp"

using namespace ntshort;

namespace {

// independent exhaustive route over every (step, start, length)
double maximal_sum_oracle(const std::vector<cd>& f, i64 q_max) {
    const i64 L = static_cast<i64>(f.size());
    double best = 0.0;
    for (i64 q = 1; q <= std::min(q_max, L); ++q)
        for (i64 s = 0; s < L; ++s)
            for (i64 len = 1; s + (len - 1) * q < L; ++len) {
                cd acc{0, 0};
                for (i64 j = 0; j < len; ++j) acc += f[static_cast<size_t>(s + j * q)];
                best = std::max(best, std::abs(acc));
            }
    return best;
}

std::vector<cd> random_complex(std::mt19937_64& rng, i64 len) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cd> f(static_cast<size_t>(len));
    for (auto& v : f) v = cd{u(rng), u(rng)};
    return f;
}

}  // namespace

TEST_CASE("maximal_sum basic values and witnesses") {
    std::vector<cd> zeros(16, cd{0, 0});
    auto r0 = maximal_sum(std::span<const cd>(zeros), 1, 16);
    CHECK(r0.value == 0.0);

    std::vector<cd> ones(10, cd{1, 0});
    auto r1 = maximal_sum(std::span<const cd>(ones), 1, 10);
    CHECK(r1.value == doctest::Approx(10.0));
    CHECK(r1.witness.start == 1);
    CHECK(r1.witness.step == 1);
    CHECK(r1.witness.length == 10);

    // alternating signs on [1, 10]: the even class sums to 5
    std::vector<cd> alt(10);
    for (i64 n = 1; n <= 10; ++n)
        alt[static_cast<size_t>(n - 1)] = cd{n % 2 == 0 ? 1.0 : -1.0, 0.0};
    auto r2 = maximal_sum(std::span<const cd>(alt), 1, 10);
    CHECK(r2.value == doctest::Approx(5.0));
    CHECK(r2.witness.step == 2);
    CHECK(r2.witness.length == 5);
    // both parity classes attain 5; ties resolve to the smaller start
    CHECK(r2.witness.start == 1);

    auto empty = maximal_sum(std::span<const cd>(), 0, 4);
    CHECK(empty.value == 0.0);
    CHECK(empty.witness.length == 0);
}

TEST_CASE("maximal_sum agrees with exhaustive enumeration") {
    std::mt19937_64 rng(20240517);
    for (int trial = 0; trial < 30; ++trial) {
        i64 L = 1 + static_cast<i64>(rng() % 24);
        auto f = random_complex(rng, L);
        auto got = maximal_sum(std::span<const cd>(f), 0, L);
        CHECK(got.value == doctest::Approx(maximal_sum_oracle(f, L)).epsilon(1e-12));
        // witness attains the value
        cd acc{0, 0};
        for (i64 j = 0; j < got.witness.length; ++j)
            acc += f[static_cast<size_t>(got.witness.element(j))];
        CHECK(std::abs(acc) == doctest::Approx(got.value).epsilon(1e-12));
    }
}

TEST_CASE("maximal_sum monotone in q_max") {
    std::mt19937_64 rng(7);
    auto f = random_complex(rng, 40);
    double prev = 0.0;
    for (i64 q = 1; q <= 40; ++q) {
        double v = maximal_sum(std::span<const cd>(f), 0, q).value;
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("partition triangle inequality over random splits") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        i64 L = 8 + static_cast<i64>(rng() % 16);
        auto f = random_complex(rng, L);
        double whole = maximal_sum(std::span<const cd>(f), 0, L).value;
        i64 cut = 1 + static_cast<i64>(rng() % (L - 1));
        std::vector<cd> left(f.begin(), f.begin() + cut), right(f.begin() + cut, f.end());
        double a = maximal_sum(std::span<const cd>(left), 0, L).value;
        double b = maximal_sum(std::span<const cd>(right), 0, L).value;
        CHECK(whole <= a + b + 1e-12);
    }
}

TEST_CASE("tv norm values") {
    std::vector<cd> c5(5, cd{-2.5, 0});
    CHECK(tv_norm(std::span<const cd>(c5)) == doctest::Approx(2.5));  // constants: sup only

    std::vector<cd> lin(5);
    for (i64 n = 1; n <= 5; ++n) lin[static_cast<size_t>(n - 1)] = cd{static_cast<double>(n), 0};
    CHECK(tv_norm(std::span<const cd>(lin)) == doctest::Approx(9.0));  // 5 + 4

    CHECK(tv_norm(std::span<const cd>()) == 0.0);
}

TEST_CASE("summation by parts bound |sum fg|* <= TV(g;q) |sum f|*") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 25; ++trial) {
        i64 L = 4 + static_cast<i64>(rng() % 60);
        auto f = random_complex(rng, L);
        auto g = random_complex(rng, L);
        std::vector<cd> fg(static_cast<size_t>(L));
        for (i64 i = 0; i < L; ++i)
            fg[static_cast<size_t>(i)] = f[static_cast<size_t>(i)] * g[static_cast<size_t>(i)];
        double fstar = maximal_sum(std::span<const cd>(f), 0, L).value;
        double fgstar = maximal_sum(std::span<const cd>(fg), 0, L).value;
        Progression1D P{0, 1, L};
        for (i64 q = 1; q <= 8; ++q) {
            double tv = tv_norm_q(std::span<const cd>(g), P, q);
            CHECK(fgstar <= tv * fstar + 1e-9);
        }
    }
}

TEST_CASE("tv product inequality with constant 1") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        i64 L = 3 + static_cast<i64>(rng() % 40);
        auto f = random_complex(rng, L);
        auto g = random_complex(rng, L);
        std::vector<cd> fg(static_cast<size_t>(L));
        for (i64 i = 0; i < L; ++i)
            fg[static_cast<size_t>(i)] = f[static_cast<size_t>(i)] * g[static_cast<size_t>(i)];
        Progression1D P{5, 3, L};  // arbitrary progression carrier
        for (i64 q : {i64(1), i64(2), i64(5)}) {
            double lhs = tv_norm_q(std::span<const cd>(fg), P, q);
            double rhs = tv_norm_q(std::span<const cd>(f), P, q) *
                         tv_norm_q(std::span<const cd>(g), P, q);
            CHECK(lhs <= rhs + 1e-9);
        }
    }
}

TEST_CASE("empty progression has zero tv in every class") {
    Progression1D P{0, 1, 0};
    CHECK(tv_norm_q(std::span<const cd>(), P, 3) == 0.0);
}

TEST_CASE("witness serialization") {
    Progression1D p{3, 2, 7};
    auto j = p.json();
    CHECK(j.find("\"start\":3") != std::string::npos);
    CHECK(j.find("\"step\":2") != std::string::npos);
    CHECK(j.find("\"length\":7") != std::string::npos);
}

TEST_CASE("exact-scan budget guard") {
    std::vector<cd> big(40000, cd{1, 0});
    CHECK_THROWS(maximal_sum(std::span<const cd>(big), 0, 40000));
    std::vector<cd> ok(1 << 14, cd{1, 0});
    CHECK(maximal_sum(std::span<const cd>(ok), 0, 4).value == doctest::Approx(16384.0));
}
