#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ntshort/linear_forms.hpp"

using namespace ntshort;

namespace {
AffineLinearSystem twin_primes() {
    AffineLinearSystem sys;
    sys.d = 1;
    sys.forms = {{{1}, 0}, {{1}, 2}};
    return sys;
}
}  // namespace

TEST_CASE("single form n has unit local factors") {
    AffineLinearSystem sys;
    sys.d = 1;
    sys.forms = {{{1}, 0}};
    for (i64 p : {i64(2), i64(3), i64(5), i64(7), i64(97)})
        CHECK(local_factor_lambda(sys, p) == Rat(1));
}

TEST_CASE("twin local factors: beta_2 = 2 and the odd closed form") {
    auto sys = twin_primes();
    CHECK(local_factor_lambda(sys, 2) == Rat(2));
    auto ps = primes_upto(97);
    for (u64 p : ps) {
        if (p == 2) continue;
        Rat expect(static_cast<i64>(p) * (static_cast<i64>(p) - 2),
                   (static_cast<i64>(p) - 1) * (static_cast<i64>(p) - 1));
        CHECK(local_factor_lambda(sys, static_cast<i64>(p)) == expect);
    }
}

TEST_CASE("local factors approach 1 like 1/p^2 with a finite fitted constant") {
    std::mt19937_64 rng(5);
    auto ps = primes_upto(97);
    for (int trial = 0; trial < 20; ++trial) {
        AffineLinearSystem sys;
        sys.d = 2;
        int t = 2 + static_cast<int>(rng() % 2);
        for (int i = 0; i < t; ++i) {
            for (;;) {
                AffineForm f;
                f.dot = {static_cast<i64>(rng() % 5) - 2, static_cast<i64>(rng() % 5) - 2};
                f.constant = static_cast<i64>(rng() % 7) - 3;
                if (f.dot[0] == 0 && f.dot[1] == 0) continue;
                sys.forms.push_back(f);
                try {
                    check_system(sys);
                    break;
                } catch (const std::invalid_argument&) {
                    sys.forms.pop_back();
                }
            }
        }
        double C = 0.0;
        for (u64 p : ps) {
            double dev = std::abs(local_factor_lambda(sys, static_cast<i64>(p)).to_double() - 1.0);
            C = std::max(C, dev * static_cast<double>(p) * static_cast<double>(p));
        }
        CHECK(C < 64.0);  // finite and modest for small coefficient systems
    }
}

TEST_CASE("symmetry: relabeling forms and permuting coordinates") {
    AffineLinearSystem sys;
    sys.d = 2;
    sys.forms = {{{1, 0}, 0}, {{0, 1}, 0}, {{1, 1}, 0}};
    AffineLinearSystem swapped;
    swapped.d = 2;
    swapped.forms = {{{1, 1}, 0}, {{1, 0}, 0}, {{0, 1}, 0}};
    for (i64 p : {i64(2), i64(3), i64(5), i64(13)})
        CHECK(local_factor_lambda(sys, p) == local_factor_lambda(swapped, p));
}

TEST_CASE("truncated singular products converge within the tail bound") {
    auto sys = twin_primes();
    auto ps = primes_upto(1000);
    double partial = 1.0;
    std::vector<double> partials;
    for (u64 p : ps) {
        partial *= local_factor_lambda(sys, static_cast<i64>(p)).to_double();
        partials.push_back(partial);
    }
    // successive window: |prod_{p<=P'} - prod_{p<=P}| <= tail sum of C/p^2
    double C = 4.0;
    for (size_t i = 20; i + 1 < partials.size(); ++i) {
        double tail = 0.0;
        for (size_t j = i + 1; j < ps.size(); ++j)
            tail += C / (static_cast<double>(ps[j]) * static_cast<double>(ps[j]));
        CHECK(std::abs(partials.back() - partials[i]) <= tail + 1e-12);
    }
}

TEST_CASE("divisor-weight local factor: single form at k = 2, p = 2 converges to 1") {
    AffineLinearSystem sys;
    sys.d = 1;
    sys.forms = {{{1}, 0}};
    auto r10 = local_factor_dk(sys, 2, 2, 10);
    CHECK(r10.value.to_double() == doctest::Approx(1.0).epsilon(1e-2));
    // closed form at truncation J: 1 - 2^{-(J+1)}
    CHECK(r10.value == Rat((i64(1) << 11) - 1, i64(1) << 11));

    // k = 1 degenerates to 1 exactly
    auto r1 = local_factor_dk(sys, 5, 1, 3);
    CHECK(r1.value == Rat(1));
}

TEST_CASE("divisor-weight local factor: J and J+2 agree within the tail bound") {
    AffineLinearSystem sys;
    sys.d = 1;
    sys.forms = {{{1}, 0}, {{1}, 1}};
    for (i64 p : {i64(2), i64(3)}) {
        auto a = local_factor_dk(sys, p, 2, 6);
        auto b = local_factor_dk(sys, p, 2, 8);
        CHECK(std::abs(a.value.to_double() - b.value.to_double()) <= a.tail_bound + 1e-12);
    }
}

TEST_CASE("archimedean factor: boxes fully inside the positive region") {
    AffineLinearSystem sys;
    sys.d = 1;
    sys.forms = {{{1}, 0}};
    Box box{{100}, {50}};
    auto r = archimedean_factor(sys, box, {ArchimedeanWeight::lambda, 2});
    CHECK(r.value == doctest::Approx(50.0));

    AffineLinearSystem tern;
    tern.d = 2;
    tern.forms = {{{1, 0}, 0}, {{0, 1}, 0}, {{-1, -1}, 1000}};
    Box b2{{100, 100}, {80, 90}};
    auto r2 = archimedean_factor(tern, b2, {ArchimedeanWeight::lambda, 2});
    CHECK(r2.value == doctest::Approx(80.0 * 90.0));
}

TEST_CASE("archimedean factor: half-cut box matches the triangle area") {
    // form x + y - c cuts the box along a diagonal
    AffineLinearSystem sys;
    sys.d = 2;
    sys.forms = {{{1, 0}, 0}, {{1, 1}, -300}};
    Box box{{100, 100}, {60, 60}};
    // x + y > 300 inside [100,160]^2 keeps the corner triangle with
    // vertices (140,160), (160,140), (160,160): legs 20, area 200
    auto r = archimedean_factor(sys, box, {ArchimedeanWeight::lambda, 2});
    CHECK(std::abs(r.value - 200.0) / 200.0 < 1e-3);
    CHECK(r.refinement_delta / 200.0 < 5e-3);
}

TEST_CASE("weighted counts: empty box and the one-form consistency identity") {
    AffineLinearSystem sys;
    sys.d = 1;
    sys.forms = {{{1}, 0}};
    auto slab = sieve_slab(1000, 500, FnKind::LambdaVm());
    Box box{{1000}, {500}};
    double got = count_weighted_solutions(sys, box, {&slab});
    double direct = 0.0;
    for (double v : slab.values) direct += v;
    CHECK(got == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("system json round trip and validation") {
    auto sys = twin_primes();
    auto back = AffineLinearSystem::from_json(sys.json());
    CHECK(back.d == 1);
    CHECK(back.t() == 2);
    CHECK(back.forms[1].constant == 2);

    AffineLinearSystem dup;
    dup.d = 2;
    dup.forms = {{{2, 4}, 0}, {{2, 4}, 0}};
    CHECK_THROWS(check_system(dup));
    AffineLinearSystem prop;
    prop.d = 2;
    prop.forms = {{{2, 4}, 0}, {{1, 2}, 5}};  // proportional dots: allowed
    CHECK_NOTHROW(check_system(prop));        // but not independent
    CHECK(!pairwise_independent(prop));
    CHECK(pairwise_independent(twin_primes()) == false);  // d = 1 constellation
    AffineLinearSystem guard;
    guard.d = 4;
    guard.forms = {{{1, 0, 0, 0}, 0}};
    CHECK_THROWS(local_factor_lambda(guard, 101));  // 101^4 > 1e8
}

TEST_CASE("weighted count rejects oversized boxes") {
    AffineLinearSystem sys;
    sys.d = 2;
    sys.forms = {{{1, 0}, 0}, {{0, 1}, 1}};
    auto slab = sieve_slab(0, 10, FnKind::LambdaVm());
    Box big{{0, 0}, {40000, 40000}};
    CHECK_THROWS(count_weighted_solutions(sys, big, {&slab, &slab}));
}
