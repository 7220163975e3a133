#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ntshort/decomposition.hpp"
#include "oracles.hpp"

using namespace ntshort;

TEST_CASE("identity expansion at L = 1 restricts mu dyadically, exact match") {
    i64 X = 2000;
    auto dec = heath_brown(FnKind::mu, X, 1);
    auto vals = evaluate_components_exact_window(dec.components, X / 2, 4 * X);
    auto mu = sieve_slab(X / 2 - 1, 4 * X - X / 2 + 1, FnKind::Mu());
    for (i64 n = X / 2; n <= 4 * X; ++n)
        CHECK(vals[static_cast<size_t>(n - X / 2)] == static_cast<i64>(mu.at_n(n)));
}

TEST_CASE("identity expansion for the prime-power log weight at L = 2, small scale") {
    i64 X = 600;
    auto dec = heath_brown(FnKind::lambda_vm, X, 2);
    auto vals = evaluate_components_window(dec.components, X / 2, 4 * X);
    auto vm = sieve_slab(X / 2 - 1, 4 * X - X / 2 + 1, FnKind::LambdaVm());
    for (i64 n = X / 2; n <= 4 * X; ++n)
        CHECK(vals[static_cast<size_t>(n - X / 2)] ==
              doctest::Approx(vm.at_n(n)).epsilon(1e-9));
}

TEST_CASE("mu expansion carries no log factors; mu-support bound holds") {
    auto dec = heath_brown(FnKind::mu, 5000, 3);
    double bound = std::pow(4.0 * 5000.0, 1.0 / 3.0);
    CHECK(dec.mu_support_max <= bound + 1e-9);
    for (const auto& comp : dec.components)
        for (const auto& f : comp.factors) CHECK(f.kind != ConvolutionFactor::log);
    CHECK(dec.components.size() > 0);
}

TEST_CASE("component evaluation basics") {
    // single unit factor on (4, 8]: indicator of 5..8
    ConvolutionComponent unit;
    unit.coeff = 1;
    unit.factors.push_back({ConvolutionFactor::unit, 4.0});
    auto vals = evaluate_components({unit}, 10);
    for (i64 n = 1; n <= 10; ++n)
        CHECK(vals[static_cast<size_t>(n - 1)] == ((n > 4 && n <= 8) ? 1.0 : 0.0));

    // unit * unit on blocks = restricted two-part divisor count
    ConvolutionComponent two;
    two.coeff = 1;
    two.factors.push_back({ConvolutionFactor::unit, 4.0});
    two.factors.push_back({ConvolutionFactor::unit, 8.0});
    auto v2 = evaluate_components({two}, 150);
    for (i64 n = 1; n <= 150; ++n) {
        i64 reps = 0;
        for (i64 d = 5; d <= 8; ++d)
            if (n % d == 0 && n / d > 8 && n / d <= 16) ++reps;
        CHECK(v2[static_cast<size_t>(n - 1)] == static_cast<double>(reps));
    }

    ConvolutionComponent one;
    one.coeff = 1;
    one.factors.push_back({ConvolutionFactor::unit, 0.5});
    CHECK(evaluate_components({one}, 1)[0] == 1.0);  // the block (1/2, 1] is {1}

    CHECK(evaluate_components({}, 5) == std::vector<double>(5, 0.0));
}

TEST_CASE("ramare identity: exact rational equality on a window") {
    i64 X = 100000, H = 1000, P = 10, Q = 100;
    auto fi = factor_interval(X, H);
    SUBCASE("f = mu") {
        auto dec = ramare_decompose(fi, P, Q, mu_of_factors, 2000);
        for (i64 i = 0; i < H; ++i)
            CHECK(dec.lhs[static_cast<size_t>(i)] == dec.rhs[static_cast<size_t>(i)]);
        // coefficient bound |a_r| <= d_2(r)
        for (auto& [r, a] : dec.a_r) {
            Rat bound(oracles::dk_trial(r, 2));
            CHECK(a.abs() <= bound);
        }
    }
    SUBCASE("f = d2") {
        auto d2fn = [](const FactoredInterval::Factors& f) { return dk_int_of_factors(f, 2); };
        auto dec = ramare_decompose(fi, P, Q, d2fn, 2000);
        for (i64 i = 0; i < H; ++i)
            CHECK(dec.lhs[static_cast<size_t>(i)] == dec.rhs[static_cast<size_t>(i)]);
        for (auto& [r, a] : dec.a_r) {
            Rat bound(oracles::dk_trial(r, 3));
            CHECK(a.abs() <= bound);
        }
    }
}

TEST_CASE("ramare identity trivial cases") {
    auto fi = factor_interval(100, 30);
    auto dec = ramare_decompose(fi, 10, 20, mu_of_factors, 50);
    for (i64 i = 0; i < 30; ++i) {
        i64 n = 101 + i;
        bool rough = false;
        for (i64 p = 11; p <= 20; ++p)
            if (n % p == 0) rough = true;
        if (!rough) {
            CHECK(dec.lhs[static_cast<size_t>(i)].is_zero());
            CHECK(dec.rhs[static_cast<size_t>(i)].is_zero());
        }
    }
}

TEST_CASE("classifier spot checks from the stated cases") {
    // theta = 5/8 with the balanced quadruple: I fails, IImaj holds
    auto c1 = classify_exponents({0.25, 0.25, 0.25, 0.25}, 0.625);
    CHECK(!c1.has(SumLabel::I));
    CHECK(c1.has(SumLabel::IImaj));

    // theta = 1/3, alphas (1/2, 1/2): I2 via the full pair
    auto c2 = classify_exponents({0.5, 0.5}, 1.0 / 3.0);
    CHECK(c2.has(SumLabel::I2));
    CHECK(c2.w_I2 == std::vector<int>{0, 1});

    // theta = 3/5 - 0.01 with five equal parts: none of I, I2, IImin
    auto c3 = classify_exponents({0.2, 0.2, 0.2, 0.2, 0.2}, 0.6 - 0.01);
    CHECK(!c3.has(SumLabel::I));
    CHECK(!c3.has(SumLabel::I2));
    CHECK(!c3.has(SumLabel::IImin));
}

TEST_CASE("classifier witnesses satisfy their inequalities") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        int k = 2 + static_cast<int>(rng() % 7);
        std::vector<double> alphas(static_cast<size_t>(k));
        double sum = 0;
        for (auto& a : alphas) { a = -std::log(u(rng)); sum += a; }
        for (auto& a : alphas) a /= sum;
        // re-normalize exactly
        double s2 = 0;
        for (size_t i = 0; i + 1 < alphas.size(); ++i) s2 += alphas[i];
        alphas.back() = 1.0 - s2;
        double theta = 1.0 / 3.0 + (2.0 / 3.0) * u(rng);
        auto cls = classify_exponents(alphas, theta);
        auto subset_sum = [&](const std::vector<int>& idx) {
            double s = 0;
            for (int i : idx) s += alphas[static_cast<size_t>(i)];
            return s;
        };
        const double slack = 1e-8;
        if (cls.has(SumLabel::I)) CHECK(subset_sum(cls.w_I) >= 1.0 - theta - slack);
        if (cls.has(SumLabel::I2maj)) CHECK(subset_sum(cls.w_I2maj) >= 1.0 - theta - slack);
        if (cls.has(SumLabel::I2)) CHECK(subset_sum(cls.w_I2) >= 1.5 * (1.0 - theta) - slack);
        if (cls.has(SumLabel::IImin)) {
            double aJ = subset_sum(cls.w_IImin_J);
            CHECK(aJ >= 1.0 - theta - slack);
            CHECK(aJ <= theta + slack);
        }
        if (cls.has(SumLabel::IImaj)) {
            double aI = subset_sum(cls.w_IImaj_I);
            CHECK(aI >= 2.0 * theta - 1.0 - slack);
            CHECK(aI <= 4.0 * theta - 2.0 + slack);
            CHECK(std::abs(subset_sum(cls.w_IImaj_J) - subset_sum(cls.w_IImaj_Jp)) <=
                  2.0 * theta - 1.0 + slack);
        }
    }
}

TEST_CASE("guaranteed conclusions hold on simplex samples") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto sample = [&](int k) {
        std::vector<double> a(static_cast<size_t>(k));
        double s = 0;
        for (auto& x : a) { x = -std::log(u(rng)); s += x; }
        for (auto& x : a) x /= s;
        double s2 = 0;
        for (size_t i = 0; i + 1 < a.size(); ++i) s2 += a[i];
        a.back() = 1.0 - s2;
        return a;
    };
    auto holds_one = [](const ExponentClassification& cls, const std::vector<SumLabel>& want) {
        for (auto l : want)
            if (cls.has(l)) return true;
        return false;
    };
    for (int t = 0; t < 500; ++t) {
        int k = 2 + static_cast<int>(rng() % 7);
        CHECK(holds_one(classify_exponents(sample(k), 5.0 / 8.0), guaranteed_conclusions(1)));
        CHECK(holds_one(classify_exponents(sample(k), 3.0 / 5.0), guaranteed_conclusions(2)));
        CHECK(holds_one(classify_exponents(sample(k), 7.0 / 12.0), guaranteed_conclusions(3)));
        CHECK(holds_one(classify_exponents(sample(5), 11.0 / 20.0), guaranteed_conclusions(4)));
        CHECK(holds_one(classify_exponents(sample(3 + static_cast<int>(rng() % 2)), 0.5),
                        guaranteed_conclusions(5)));
        CHECK(holds_one(classify_exponents(sample(3), 5.0 / 9.0), guaranteed_conclusions(6)));
        CHECK(holds_one(classify_exponents(sample(2), 1.0 / 3.0), guaranteed_conclusions(6)));
    }
}

TEST_CASE("counterexample tuples fail just below their thresholds, exactly") {
    auto fails_all = [](const ExponentClassification& cls, const std::vector<SumLabel>& want) {
        for (auto l : want)
            if (cls.has(l)) return false;
        return true;
    };
    // rational arithmetic: theta - 1/100
    auto drop = [](i64 num, i64 den) { return Rat(num, den) - Rat(1, 100); };
    auto quarters = std::vector<Rat>{Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)};
    CHECK(fails_all(classify_exponents_exact(quarters, drop(5, 8)), guaranteed_conclusions(1)));

    auto mix = std::vector<Rat>{Rat(2, 5), Rat(1, 5), Rat(1, 5), Rat(1, 5)};
    CHECK(fails_all(classify_exponents_exact(mix, drop(3, 5)), guaranteed_conclusions(2)));

    auto fifths = std::vector<Rat>{Rat(1, 5), Rat(1, 5), Rat(1, 5), Rat(1, 5), Rat(1, 5)};
    CHECK(fails_all(classify_exponents_exact(fifths, drop(3, 5)), guaranteed_conclusions(2)));

    auto sixths = std::vector<Rat>(6, Rat(1, 6));
    CHECK(fails_all(classify_exponents_exact(sixths, drop(7, 12)), guaranteed_conclusions(3)));

    CHECK(fails_all(classify_exponents_exact(fifths, drop(11, 20)), guaranteed_conclusions(4)));

    CHECK(fails_all(classify_exponents_exact(quarters, drop(1, 2)), guaranteed_conclusions(5)));

    auto thirds = std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    CHECK(fails_all(classify_exponents_exact(thirds, drop(5, 9)), guaranteed_conclusions(6)));

    auto pair = std::vector<Rat>{Rat(3, 10), Rat(7, 10)};
    CHECK(fails_all(classify_exponents_exact(pair, drop(1, 3)), guaranteed_conclusions(6)));
}

TEST_CASE("classification json shape") {
    auto cls = classify_exponents({0.25, 0.25, 0.25, 0.25}, 0.625);
    auto j = cls.json();
    CHECK(j.find("\"theta\"") != std::string::npos);
    CHECK(j.find("IImaj") != std::string::npos);
}

TEST_CASE("input validation") {
    CHECK_THROWS(classify_exponents({0.5, 0.6}, 0.5));       // sum != 1
    CHECK_THROWS(classify_exponents({0.5, 0.5}, 0.2));       // theta < 1/3
    CHECK_THROWS(heath_brown(FnKind::dk, 100, 2));
    CHECK_THROWS(evaluate_components({}, 3'000'000));
    auto fi = factor_interval(10, 5);
    CHECK_THROWS(ramare_decompose(fi, 10, 10, mu_of_factors));
}

TEST_CASE("large-k classification uses the balancing construction") {
    // 14 equal parts at theta = 5/8: no single or pair reaches 1 - theta,
    // but the balanced split lands both type-II shapes
    std::vector<double> a(14, 1.0 / 14.0);
    auto cls = classify_exponents(a, 5.0 / 8.0);
    CHECK(!cls.has(SumLabel::I));
    CHECK(!cls.has(SumLabel::I2maj));
    CHECK(cls.has(SumLabel::IImaj));
    CHECK(cls.has(SumLabel::IImin));
    // witnesses satisfy the inequalities
    auto sum_of = [&](const std::vector<int>& idx) {
        double s = 0;
        for (int i : idx) s += a[static_cast<size_t>(i)];
        return s;
    };
    double aI = sum_of(cls.w_IImaj_I);
    CHECK(aI >= 0.25 - 1e-9);
    CHECK(aI <= 0.5 + 1e-9);
    CHECK(std::abs(sum_of(cls.w_IImaj_J) - sum_of(cls.w_IImaj_Jp)) <= 0.25 + 1e-9);
    double aJ = sum_of(cls.w_IImin_J);
    CHECK(aJ >= 0.375 - 1e-9);
    CHECK(aJ <= 0.625 + 1e-9);
}

TEST_CASE("log-weight expansion support bounds") {
    i64 X = 5000;
    int L = 3;
    auto dec = heath_brown(FnKind::lambda_vm, X, L);
    CHECK(dec.mu_support_max <= std::pow(4.0 * static_cast<double>(X), 1.0 / L) + 1e-9);
    CHECK(dec.components.size() > 0);
    // exactly one log factor per component
    for (const auto& comp : dec.components) {
        int logs = 0;
        for (const auto& f : comp.factors)
            if (f.kind == ConvolutionFactor::log) ++logs;
        CHECK(logs == 1);
    }
}
