#include <gtest/gtest.h>

#include <random>

#include "qperiod/graded_poly.hpp"
#include "qperiod/rational.hpp"

using namespace qperiod;

namespace {

// Generators: x0 = h, x1 = h1, x2 = h2, x3 = h3.
constexpr std::size_t N = 4;

GradedPoly var(std::size_t i, int cap) { return GradedPoly::variable(N, cap, i); }
GradedPoly cst(const Rational& c, int cap) { return GradedPoly::constant(N, cap, c); }

GradedPoly random_poly(std::mt19937& rng, int cap, bool unit)
{
    std::uniform_int_distribution<int> coef(-5, 5), ex(0, 2), nterms(0, 5);
    GradedPoly p(N, cap);
    for (int t = nterms(rng); t > 0; --t) {
        GradedPoly::Exponent e(N);
        for (auto& x : e)
            x = static_cast<std::uint16_t>(ex(rng));
        p.add_term(e, Rational(coef(rng), 1 + std::abs(coef(rng))));
    }
    if (unit)
        p += cst(1 + std::abs(coef(rng)) - p.constant_term(), cap);
    return p;
}

} // namespace

TEST(Rational, CanonicalForm)
{
    EXPECT_EQ(make_rational(6, -4), Rational(-3, 2));
    EXPECT_EQ(to_string(make_rational(6, -4)), "-3/2");
    EXPECT_EQ(parse_rational("10/4"), Rational(5, 2));
    EXPECT_EQ(parse_rational("-7"), Rational(-7));
    EXPECT_THROW(make_rational(1, 0), UsageError);
    EXPECT_THROW(parse_rational("1/0"), UsageError);
    EXPECT_THROW(parse_rational("x"), UsageError);
}

TEST(Rational, FactorialBinomialPow)
{
    EXPECT_EQ(factorial(0), 1);
    EXPECT_EQ(factorial(12), 479001600);
    EXPECT_EQ(binomial(6, 2), 15);
    EXPECT_EQ(pow(Rational(2, 3), -2), Rational(9, 4));
    EXPECT_EQ(pow(Rational(-1), 3), Rational(-1));
    EXPECT_THROW(pow(Rational(0), -1), UsageError);
    auto r = regularise({Rational(1), Rational(1, 2), Rational(1, 6)});
    EXPECT_EQ(r[2], Rational(1, 3));
}

TEST(PolyMul, DifferenceOfSquares)
{
    auto h = var(0, 2);
    EXPECT_EQ((cst(1, 2) + h) * (cst(1, 2) - h), cst(1, 2) - h * h);
}

TEST(PolyMul, ProductsAboveCapVanish)
{
    auto a = var(1, 1) + var(2, 1);
    auto b = var(1, 1) - var(2, 1);
    EXPECT_TRUE(poly_mul(a, b).is_zero());
}

TEST(PolyMul, BinomialSquare)
{
    auto p = cst(1, 2) + var(1, 2);
    auto expected = cst(1, 2) + var(1, 2) * Rational(2) + var(1, 2) * var(1, 2);
    EXPECT_EQ(p * p, expected);
}

TEST(PolyMul, MismatchedCapsIsUsageError)
{
    EXPECT_THROW(var(0, 1) * var(0, 2), UsageError);
    EXPECT_THROW(var(0, 1) + var(0, 2), UsageError);
}

TEST(UnitInverse, GeometricSeries)
{
    auto h = var(0, 2);
    EXPECT_EQ(unit_inverse(cst(1, 2) + h), cst(1, 2) - h + h * h);
}

TEST(UnitInverse, Constant)
{
    EXPECT_EQ(unit_inverse(cst(2, 3)), cst(Rational(1, 2), 3));
}

TEST(UnitInverse, TwoGenerators)
{
    auto p = cst(1, 1) + var(1, 1) + var(2, 1);
    EXPECT_EQ(unit_inverse(p), cst(1, 1) - var(1, 1) - var(2, 1));
}

TEST(UnitInverse, ZeroConstantTermIsNotAUnit)
{
    EXPECT_THROW(unit_inverse(var(0, 2)), NotUnitError);
    try {
        unit_inverse(var(0, 2));
    } catch (const NotUnitError& e) {
        EXPECT_NE(std::string(e.what()).find("not a unit"), std::string::npos);
    }
}

TEST(ExpNilpotent, Examples)
{
    EXPECT_EQ(exp_nilpotent(GradedPoly(N, 3)), cst(1, 3));
    auto h = var(0, 2);
    EXPECT_EQ(exp_nilpotent(h), cst(1, 2) + h + h * h * Rational(1, 2));
    EXPECT_EQ(exp_nilpotent(var(1, 1) + var(2, 1)), cst(1, 1) + var(1, 1) + var(2, 1));
    EXPECT_THROW(exp_nilpotent(cst(1, 2)), UsageError);
}

TEST(DivideLinear, Examples)
{
    auto h1 = var(1, 2), h2 = var(2, 2);
    EXPECT_EQ(divide_linear(h1 * h1 - h2 * h2, 1, 2), var(1, 1) + var(2, 1));
    EXPECT_EQ(divide_linear(var(1, 1) - var(2, 1), 1, 2), cst(1, 0));
    auto h1c = var(1, 3), h2c = var(2, 3);
    EXPECT_EQ(divide_linear(h1c * h2c * (h1c - h2c), 1, 2), var(1, 2) * var(2, 2));
}

TEST(DivideLinear, RemainderIsReported)
{
    auto p = var(1, 2) * var(1, 2) + var(2, 2);
    try {
        divide_linear(p, 1, 2);
        FAIL() << "expected NotDivisibleError";
    } catch (const NotDivisibleError& e) {
        EXPECT_EQ(e.gi(), 1u);
        EXPECT_EQ(e.gj(), 2u);
        EXPECT_EQ(e.remainder(), p.identify(1, 2));
        EXPECT_NE(std::string(e.what()).find("not divisible"), std::string::npos);
    }
}

TEST(DivideLinear, BadArguments)
{
    EXPECT_THROW(divide_linear(var(1, 1), 1, 1), UsageError);
    EXPECT_THROW(divide_linear(cst(1, 0), 1, 2), UsageError);
}

TEST(VandermondeDivide, Examples)
{
    const std::vector<std::vector<std::size_t>> two{{1, 2}}, three{{1, 2, 3}};
    EXPECT_EQ(vandermonde_divide(var(1, 1) - var(2, 1), two), cst(1, 0));
    auto h1 = var(1, 2), h2 = var(2, 2);
    EXPECT_EQ(vandermonde_divide(h1 * h1 - h2 * h2, two), var(1, 1) + var(2, 1));
    auto a = var(1, 3), b = var(2, 3), c = var(3, 3);
    std::size_t divisions = 0;
    EXPECT_EQ(vandermonde_divide((a - b) * (a - c) * (b - c), three, &divisions), cst(1, 0));
    EXPECT_EQ(divisions, 3u);
}

TEST(VandermondeDivide, SymmetricQuotient)
{
    auto a = var(1, 3), b = var(2, 3), c = var(3, 3), h = var(0, 3);
    auto omega = (a - b) * (a - c) * (b - c);
    auto s = cst(2, 3) + h * Rational(3);
    auto q = vandermonde_divide(omega * s, {{1, 2, 3}});
    EXPECT_EQ(q, cst(2, 0));
}

TEST(UnitPart, Examples)
{
    EXPECT_EQ(unit_part(cst(1, 1) + var(0, 1) * Rational(3)), 1);
    EXPECT_EQ(unit_part(var(1, 2) * var(2, 2)), 0);
    EXPECT_EQ(unit_part(cst(Rational(7, 2), 0)), Rational(7, 2));
}

TEST(GradedPoly, StructuralEqualityAndPruning)
{
    auto h = var(0, 2);
    auto p = h - h;
    EXPECT_TRUE(p.is_zero());
    EXPECT_EQ(p.size(), 0u);
    EXPECT_EQ(p, GradedPoly(N, 2));
    EXPECT_NE(GradedPoly(N, 2), GradedPoly(N, 3));
    GradedPoly q(N, 1);
    q.add_term({2, 0, 0, 0}, 5);
    EXPECT_TRUE(q.is_zero());
}

TEST(GradedPoly, ToString)
{
    GeneratorSet g({2});
    EXPECT_EQ(GradedPoly::constant(3, 2, Rational(-1, 2)).to_string(&g), "-1/2");
    EXPECT_EQ((GradedPoly::constant(3, 2, 1) - GradedPoly::variable(3, 2, 2)).to_string(&g), "1 - h2");
    EXPECT_EQ((GradedPoly::variable(3, 2, 0) * GradedPoly::variable(3, 2, 0) * Rational(3)).to_string(&g), "3*h^2");
}

TEST(GeneratorSet, Layout)
{
    GeneratorSet g({1, 3});
    EXPECT_EQ(g.size(), 5u);
    EXPECT_EQ(g.root(0, 0), 1u);
    EXPECT_EQ(g.root(1, 2), 4u);
    EXPECT_EQ(g.omega_degree(), 3);
    EXPECT_EQ(g.name(0), "h");
    EXPECT_EQ(g.name(3), "h2_2");
    EXPECT_THROW(g.root(0, 1), UsageError);
}

TEST(Properties, Distributivity)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int cap = trial % 4;
        auto a = random_poly(rng, cap, false), b = random_poly(rng, cap, false), c = random_poly(rng, cap, false);
        ASSERT_EQ((a + b) * c, a * c + b * c);
        ASSERT_EQ(a * b, b * a);
        ASSERT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(Properties, UnitInverseRoundTrip)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int cap = trial % 4;
        auto a = random_poly(rng, cap, true);
        ASSERT_EQ(a * unit_inverse(a), cst(1, cap));
        auto n = a - cst(a.constant_term(), cap);
        ASSERT_EQ(exp_nilpotent(n) * exp_nilpotent(-n), cst(1, cap));
    }
}

TEST(Properties, DivideLinearRoundTrip)
{
    std::mt19937 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int cap = 1 + trial % 4;
        const std::size_t gi = 1 + static_cast<std::size_t>(trial % 3);
        const std::size_t gj = (gi + 1 + static_cast<std::size_t>(trial % 2)) % N;
        auto q = random_poly(rng, cap - 1, trial % 2 == 0);
        auto f = var(gi, cap) - var(gj, cap);
        ASSERT_EQ(divide_linear(f * q.with_cap(cap), gi, gj), q);
    }
}

TEST(Properties, VandermondeOfSymmetric)
{
    std::mt19937 rng(17);
    auto a = var(1, 4), b = var(2, 4), c = var(3, 4);
    auto omega = (a - b) * (a - c) * (b - c);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_poly(rng, 1, false);
        // Symmetrize in x1, x2, x3.
        GradedPoly sym(N, 1);
        for (auto perm : std::vector<std::vector<std::size_t>>{
                 {0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 2, 1}, {0, 1, 3, 2}, {0, 2, 3, 1}, {0, 3, 1, 2}})
            sym += s.permuted(perm);
        ASSERT_EQ(vandermonde_divide(omega * sym.with_cap(4), {{1, 2, 3}}), sym);
    }
}

TEST(Properties, UnitPartLinear)
{
    std::mt19937 rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_poly(rng, 2, trial % 2 == 0);
        Rational c(trial - 50, 7);
        ASSERT_EQ(unit_part(p * c), c * unit_part(p));
        ASSERT_EQ(unit_part(p + p), 2 * unit_part(p));
    }
}
