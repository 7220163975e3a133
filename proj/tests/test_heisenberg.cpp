#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ntshort/correlations.hpp"
#include "ntshort/heisenberg.hpp"
#include "ntshort/interval_sieve.hpp"

using namespace ntshort;

namespace {
Rat rand_rat(std::mt19937_64& rng) {
    i64 num = static_cast<i64>(rng() % 41) - 20;
    i64 den = 1 + static_cast<i64>(rng() % 12);
    return Rat(num, den);
}
HeisPointQ rand_point(std::mt19937_64& rng) {
    return {rand_rat(rng), rand_rat(rng), rand_rat(rng)};
}
bool eq(const HeisPointQ& a, const HeisPointQ& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
}
}  // namespace

TEST_CASE("group axioms hold exactly in rational coordinates") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 10000; ++t) {
        auto g = rand_point(rng), h = rand_point(rng), k = rand_point(rng);
        CHECK(eq((g * h) * k, g * (h * k)));
        auto e = HeisPointQ::identity();
        CHECK(eq(g * e, g));
        CHECK(eq(e * g, g));
        CHECK(eq(g * g.inverse(), e));
        CHECK(eq(g.inverse() * g, e));
    }
}

TEST_CASE("closed-form powers match iterated multiplication") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto g = rand_point(rng);
        auto acc = HeisPointQ::identity();
        for (i64 n = 0; n <= 50; ++n) {
            CHECK(eq(heis_pow(g, n), acc));
            acc = acc * g;
        }
        auto inv_acc = HeisPointQ::identity();
        for (i64 n = 0; n >= -50; --n) {
            CHECK(eq(heis_pow(g, n), inv_acc));
            inv_acc = inv_acc * g.inverse();
        }
    }
    // spot value: (1,1,0)^3 = (3,3,3)
    HeisPointQ g{Rat(1), Rat(1), Rat(0)};
    auto p3 = heis_pow(g, 3);
    CHECK(p3.x == Rat(3));
    CHECK(p3.y == Rat(3));
    CHECK(p3.z == Rat(3));
}

TEST_CASE("reduction: fixed points, idempotence, coset invariance") {
    HeisPoint inside{0.25, 0.5, 0.75};
    auto r = heis_reduce(inside);
    CHECK(r.rep.x == 0.25);
    CHECK(r.rep.y == 0.5);
    CHECK(r.rep.z == 0.75);
    CHECK(r.gx == 0);
    CHECK(r.gy == 0);
    CHECK(r.gz == 0);

    auto r2 = heis_reduce({1.25, -0.5, 0.0});
    CHECK(r2.rep.x == doctest::Approx(0.25));
    CHECK(r2.rep.y == doctest::Approx(0.5));
    CHECK(r2.rep.x >= 0.0);
    CHECK(r2.rep.z >= 0.0);
    CHECK(r2.rep.z < 1.0);
    // group-law oracle: rep equals g * gamma
    HeisPoint gamma{static_cast<double>(r2.gx), static_cast<double>(r2.gy),
                    static_cast<double>(r2.gz)};
    auto prod = HeisPoint{1.25, -0.5, 0.0} * gamma;
    CHECK(prod.x == doctest::Approx(r2.rep.x));
    CHECK(prod.y == doctest::Approx(r2.rep.y));
    CHECK(prod.z == doctest::Approx(r2.rep.z));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 2000; ++t) {
        HeisPoint g{u(rng), u(rng), u(rng)};
        auto a = heis_reduce(g);
        auto b = heis_reduce(a.rep);  // idempotent
        CHECK(a.rep.x == doctest::Approx(b.rep.x));
        CHECK(a.rep.y == doctest::Approx(b.rep.y));
        CHECK(a.rep.z == doctest::Approx(b.rep.z));
        // coset invariance: right-multiply by random lattice elements
        HeisPoint gamma2{static_cast<double>(static_cast<i64>(rng() % 9) - 4),
                         static_cast<double>(static_cast<i64>(rng() % 9) - 4),
                         static_cast<double>(static_cast<i64>(rng() % 9) - 4)};
        auto c = heis_reduce(g * gamma2);
        CHECK(c.rep.x == doctest::Approx(a.rep.x));
        CHECK(c.rep.y == doctest::Approx(a.rep.y));
        CHECK(c.rep.z == doctest::Approx(a.rep.z).epsilon(1e-9));
    }
}

TEST_CASE("sequence coordinates are degree <= 2: third differences vanish") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        HeisPolySeq seq;
        seq.g0 = {u(rng), u(rng), u(rng)};
        seq.g1 = {u(rng), u(rng), u(rng)};
        seq.g2z = u(rng);
        for (i64 n = 0; n <= 20; ++n) {
            auto d3 = [&](auto proj) {
                return proj(seq.at(n + 3)) - 3 * proj(seq.at(n + 2)) + 3 * proj(seq.at(n + 1)) -
                       proj(seq.at(n));
            };
            CHECK(d3([](const HeisPoint& p) { return p.x; }) == doctest::Approx(0.0));
            CHECK(d3([](const HeisPoint& p) { return p.y; }) == doctest::Approx(0.0));
            CHECK(d3([](const HeisPoint& p) { return p.z; }) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("reduced_at equals reduce(at) for moderate n") {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        HeisPolySeq seq;
        seq.g0 = {u(rng), u(rng), u(rng)};
        seq.g1 = {u(rng), u(rng), u(rng)};
        seq.g2z = u(rng);
        for (i64 n = 0; n <= 200; n += 7) {
            auto direct = heis_reduce(seq.at(n)).rep;
            auto fast = seq.reduced_at(n);
            CHECK(fast.x == doctest::Approx(direct.x).epsilon(1e-9));
            CHECK(fast.y == doctest::Approx(direct.y).epsilon(1e-9));
            CHECK(dist_to_int(fast.z - direct.z) < 1e-8);
        }
    }
}

TEST_CASE("default function: identity orbit vanishes; oscillation in the center") {
    HeisPolySeq constant_identity;  // all zeros
    NilFunction F;
    F.xi = 1;
    CHECK(std::abs(nilsequence_eval(constant_identity, F, 5)) == 0.0);

    // central oscillation: F(z . x) = e(xi z) F(x)
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        HeisPoint x{u(rng), u(rng), u(rng)};
        double zc = u(rng);
        HeisPoint zx{x.x, x.y, frac01(x.z + zc)};
        cd lhs = F(zx);
        cd rhs = e_of(static_cast<double>(F.xi) * zc) * F(x);
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("quotient continuity: shipped function passes, a raw-x function fails") {
    NilFunction F;
    F.xi = 2;
    CHECK(quotient_continuous(F));

    NilFunction bad;
    bad.custom = [](double x, double, double) { return cd{x, 0.0}; };
    CHECK(!quotient_continuous(bad));
}

TEST_CASE("equidistribution of the x-coordinate under an irrational rotation") {
    HeisPolySeq seq;
    seq.g1 = {std::sqrt(2.0) - 1.0, 0.0, 0.0};
    NilFunction F;
    F.custom = [](double x, double, double) {
        double s = std::sin(M_PI * x);
        return cd{s * s, 0.0};
    };
    i64 H = 100000;
    cd acc{0, 0};
    for (i64 n = 1; n <= H; ++n) acc += F(seq.reduced_at(n));
    // Riemann-sum target: integral of sin^2(pi t) over [0,1] is 1/2
    CHECK(std::abs(acc.real() / static_cast<double>(H) - 0.5) < 0.02);
}

TEST_CASE("nil_corr of mu stays small for seeded bounded sequences") {
    i64 X = 10000000;
    i64 H = static_cast<i64>(std::ceil(std::pow(static_cast<double>(X), 0.7)));
    auto mu = sieve_slab(X, H, FnKind::Mu());
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        HeisPolySeq seq;
        seq.g0 = {u(rng), u(rng), u(rng)};
        seq.g1 = {u(rng), u(rng), u(rng)};
        seq.g2z = u(rng);
        NilFunction F;
        F.xi = 1;
        CHECK(std::abs(nil_corr(mu, seq, F)) / static_cast<double>(H) <= 0.1);
    }
}

TEST_CASE("horizontal pullback: zero character, rational structure, cross-check") {
    HeisPolySeq seq;
    seq.g0 = {0.3, -0.2, 0.9};
    seq.g1 = {3.0 / 7.0, 0.0, 0.1};
    auto zero = horizontal_pullback(seq, 0, 0);
    for (double c : zero.coeffs) CHECK(c == 0.0);

    // g1.x = a/q: the (1,0) pullback has denominator-q coefficients
    auto pb = horizontal_pullback(seq, 1, 0);
    CHECK(pb.coeffs[1] == doctest::Approx(3.0 / 7.0));

    // values mod 1 match the reduced x coordinate combination
    std::mt19937_64 rng(21);
    for (int t = 0; t < 1000; ++t) {
        i64 n = static_cast<i64>(rng() % 10000000);
        double via_poly = eval_mod1(pb, n);
        double via_reduce = seq.reduced_at(n).x;
        CHECK(dist_to_int(via_poly - via_reduce) < 1e-9);
    }
}

TEST_CASE("sequence json round trip") {
    HeisPolySeq seq;
    seq.g0 = {0.1, 0.2, 0.3};
    seq.g1 = {0.4, 0.5, 0.6};
    seq.g2z = 0.7;
    auto [back, xi] = HeisPolySeq::from_json(seq.json(3));
    CHECK(xi == 3);
    CHECK(back.g0.x == seq.g0.x);
    CHECK(back.g1.z == seq.g1.z);
    CHECK(back.g2z == seq.g2z);
}

TEST_CASE("rational orbit feeds the equidistribution search through the pullback") {
    // g1.x = a/q: the (1,0) pullback is a rational-coefficient polynomial,
    // so scaling by q kills it mod 1 and the search lands at a divisor of q
    HeisPolySeq seq;
    seq.g0 = {0.0, 0.5, 0.25};
    seq.g1 = {3.0 / 8.0, 0.0, 0.7};
    auto pb = horizontal_pullback(seq, 1, 0);
    auto hit = vinogradov_search(pb, {0, 2000}, 16, 1e-6);
    REQUIRE(hit.has_value());
    CHECK(hit->q == 8);
    CHECK(hit->norm <= 1e-6);

    // an irrational orbit gives no small-q structure at the same tolerance
    HeisPolySeq irr;
    irr.g1 = {std::sqrt(5.0) - 2.0, 0.0, 0.0};
    auto pb2 = horizontal_pullback(irr, 1, 0);
    CHECK(!vinogradov_search(pb2, {0, 2000}, 16, 1e-3).has_value());
}
