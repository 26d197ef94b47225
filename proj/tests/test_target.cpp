#include <gtest/gtest.h>

#include <set>

#include "qperiod/target.hpp"

using namespace qperiod;

namespace {

std::set<LatticePoint> points(const FlagTarget& t, const CurveClass& c)
{
    std::set<LatticePoint> out;
    for (const auto& p : lattice_range(t, c))
        EXPECT_TRUE(out.insert(p).second) << "duplicate lattice point";
    return out;
}

FlagTarget ex1() { return normalize_blowup({4, {1, 1, 2}}, 1).first; }
FlagTarget ex2() { return normalize_blowup({6, {1, 2, 2}}, 2).first; }

} // namespace

TEST(NormalizeBlowup, Example1)
{
    auto [t, tw] = normalize_blowup({4, {1, 1, 2}}, 1);
    EXPECT_EQ(t.e_degrees, (std::vector<int>{0, 0, -1}));
    EXPECT_EQ(t.ranks, (std::vector<int>{2}));
    EXPECT_EQ(tw.rho, 1);
    EXPECT_EQ(tw.weight_vectors, (std::vector<std::vector<int>>{{1, 0}, {0, 1}}));
}

TEST(NormalizeBlowup, Example2)
{
    auto [t, tw] = normalize_blowup({6, {1, 2, 2}}, 2);
    EXPECT_EQ(t.e_degrees, (std::vector<int>{1, 0, 0}));
    EXPECT_EQ(t.ranks, (std::vector<int>{2}));
    EXPECT_EQ(tw.rho, 2);
}

TEST(NormalizeBlowup, PointInPlane)
{
    auto [t, tw] = normalize_blowup({2, {1, 1}}, 1);
    EXPECT_EQ(t.e_degrees, (std::vector<int>{0, 0}));
    EXPECT_EQ(t.ranks, (std::vector<int>{1}));
    EXPECT_EQ(tw.rho, 1);
}

TEST(NormalizeBlowup, DefaultTwistIsMinimum)
{
    EXPECT_EQ(normalize_blowup({6, {3, 2, 5}}).second.rho, 2);
    EXPECT_EQ(normalize_blowup({6, {3, 2, 5}}).first.e_degrees, (std::vector<int>{-1, 0, -3}));
}

TEST(NormalizeBlowup, Errors)
{
    try {
        normalize_blowup({2, {1, 1, 1}});
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("center codimension exceeds ambient dimension"), std::string::npos);
    }
    EXPECT_THROW(normalize_blowup({4, {1}}), UsageError);
    EXPECT_THROW(normalize_blowup({4, {1, 0}}), UsageError);
}

TEST(Anticanonical, Example1)
{
    auto [t, tw] = normalize_blowup({4, {1, 1, 2}}, 1);
    auto k = anticanonical(t, tw);
    EXPECT_EQ(k.ambient, (DivisorData{3, {3}}));
    EXPECT_EQ(k.zero_locus, (DivisorData{1, {2}}));
}

TEST(Anticanonical, Example2)
{
    auto [t, tw] = normalize_blowup({6, {1, 2, 2}}, 2);
    EXPECT_EQ(anticanonical(t, tw).zero_locus, (DivisorData{5, {2}}));
}

TEST(Anticanonical, EmptyTwist)
{
    auto k = anticanonical(ex1(), TwistSpec{});
    EXPECT_EQ(k.zero_locus, (DivisorData{3, {3}}));
    EXPECT_EQ(k.zero_locus, k.ambient);
}

TEST(Anticanonical, TwistChoiceDoesNotChangeZeroLocusClassDegrees)
{
    // Same geometry, different normalization: the grading changes but the
    // pairing with lines in the fibre (b) does not.
    auto [t1, tw1] = normalize_blowup({6, {1, 2, 2}}, 1);
    EXPECT_EQ(anticanonical(t1, tw1).zero_locus, (DivisorData{1, {2}}));
}

TEST(Anticanonical, NeedsGrassmannTarget)
{
    FlagTarget t{4, {0, 0, 0}, {1, 2}};
    EXPECT_THROW(anticanonical(t, TwistSpec{}), UsageError);
}

TEST(ClassEnumeration, Example1Degree3)
{
    auto [t, tw] = normalize_blowup({4, {1, 1, 2}}, 1);
    auto cl = class_enumeration(t, tw, 3);
    EXPECT_EQ(cl, (std::vector<CurveClass>{{1, {1}}, {3, {0}}}));
}

TEST(ClassEnumeration, Example2Degree1)
{
    auto [t, tw] = normalize_blowup({6, {1, 2, 2}}, 2);
    EXPECT_EQ(class_enumeration(t, tw, 1), (std::vector<CurveClass>{{1, {-2}}}));
}

TEST(ClassEnumeration, DegreeZero)
{
    for (auto spec : {BlowUpSpec{4, {1, 1, 2}}, BlowUpSpec{6, {1, 2, 2}}, BlowUpSpec{2, {1, 1}}}) {
        auto [t, tw] = normalize_blowup(spec);
        EXPECT_EQ(class_enumeration(t, tw, 0), (std::vector<CurveClass>{{0, {0}}}));
    }
    EXPECT_TRUE(class_enumeration(ex1(), DivisorData{1, {2}}, -1).empty());
}

TEST(ClassEnumeration, NonFanoGrading)
{
    EXPECT_THROW(class_enumeration(ex1(), DivisorData{1, {0}}, 3), NonFanoError);
    EXPECT_THROW(class_enumeration(ex2(), DivisorData{4, {2}}, 3), NonFanoError);
    EXPECT_THROW(class_enumeration(ex1(), DivisorData{-1, {2}}, 3), NonFanoError);
}

TEST(ClassEnumeration, MoriConeRange)
{
    FlagTarget t{6, {0, 0, 0, 2}, {3}};
    // q = x^3, Q = x^8, k >= -2D.
    auto cl = class_enumeration(t, DivisorData{8, {3}}, 8, ClassRange::MoriCone);
    // (4,-8) sits on the cone edge k = -2D.
    EXPECT_EQ(cl, (std::vector<CurveClass>{{1, {0}}, {4, {-8}}}));
    cl = class_enumeration(t, DivisorData{8, {3}}, 2, ClassRange::MoriCone);
    EXPECT_EQ(cl, (std::vector<CurveClass>{{1, {-2}}}));
    // The lattice range alone leaves this grading unbounded.
    EXPECT_THROW(class_enumeration(t, DivisorData{8, {3}}, 2), NonFanoError);
}

TEST(ClassEnumeration, CompleteAgainstBruteForce)
{
    auto [t, tw] = normalize_blowup({6, {1, 2, 2}}, 2);
    const DivisorData g = anticanonical(t, tw).zero_locus;
    for (long x = 0; x <= 12; ++x) {
        std::vector<CurveClass> brute;
        for (long D = 0; D <= 20; ++D)
            for (long k = -2 * D; k <= 20; ++k)
                if (g.a * D + g.b[0] * k == x)
                    brute.push_back({D, {k}});
        EXPECT_EQ(class_enumeration(t, g, x), brute) << "x^" << x;
    }
}

TEST(LatticeRange, Example1)
{
    EXPECT_EQ(points(ex1(), {1, {1}}), (std::set<LatticePoint>{{1, 0}, {0, 1}}));
}

TEST(LatticeRange, Example2)
{
    EXPECT_EQ(points(ex2(), {1, {-2}}), (std::set<LatticePoint>{{-1, -1}}));
}

TEST(LatticeRange, Example3Floor)
{
    FlagTarget t{6, {0, 0, 0, 2}, {3}};
    EXPECT_EQ(lattice_floor(t, 1), -2);
    auto pts = points(t, {1, {-6}});
    EXPECT_EQ(pts, (std::set<LatticePoint>{{-2, -2, -2}}));
}

TEST(LatticeRange, BelowFloorIsEmpty)
{
    EXPECT_TRUE(points(ex2(), {1, {-3}}).empty());
    EXPECT_TRUE(points(ex1(), {0, {-1}}).empty());
}

TEST(LatticeRange, CountsMatchCompositions)
{
    FlagTarget t{6, {0, 0, 0, 2}, {3}};
    for (long k = -6; k <= 3; ++k) {
        CurveClass c{1, {k}};
        auto pts = points(t, c);
        EXPECT_EQ(Integer(static_cast<long>(pts.size())), lattice_count_estimate(t, c));
        for (const auto& p : pts) {
            EXPECT_EQ(p[0] + p[1] + p[2], k);
            for (long v : p)
                EXPECT_GE(v, -2);
        }
    }
}

TEST(LatticeRange, FlagChainFloor)
{
    // Fl(1,2; O + O + O(1)): top block >= -D, first block >= min of the top block.
    FlagTarget t{3, {0, 0, 1}, {1, 2}};
    CurveClass c{1, {0, -1}};
    auto pts = points(t, c);
    std::set<LatticePoint> brute;
    for (long a = -5; a <= 5; ++a)
        for (long b = -1; b <= 5; ++b) {
            long d = -1 - b;
            if (d < -1)
                continue;
            if (a == 0 && a >= std::min(b, d))
                brute.insert({a, b, d});
        }
    EXPECT_EQ(pts, brute);
}

TEST(LatticeRange, RestartsOnBegin)
{
    auto r = lattice_range(ex1(), {2, {2}});
    auto first = r.collect();
    auto second = r.collect();
    EXPECT_EQ(first, second);
    EXPECT_EQ(first.size(), 3u);
}

TEST(FanoIndexClasses, Examples)
{
    auto [t1, tw1] = normalize_blowup({4, {1, 1, 2}}, 1);
    EXPECT_EQ(fano_index_classes(t1, tw1), (std::vector<CurveClass>{{1, {0}}}));
    auto [t2, tw2] = normalize_blowup({6, {1, 2, 2}}, 2);
    EXPECT_EQ(fano_index_classes(t2, tw2), (std::vector<CurveClass>{{1, {-2}}}));
    EXPECT_TRUE(fano_index_classes(ex1(), DivisorData{2, {2}}).empty());
}

TEST(Properties, EveryClassHasLatticePoints)
{
    for (auto [spec, k] : std::vector<std::pair<BlowUpSpec, int>>{
             {{4, {1, 1, 2}}, 1}, {{4, {1, 1, 2}}, 2}, {{6, {1, 2, 2}}, 1}, {{6, {1, 2, 2}}, 2}, {{6, {1, 1, 1, 2}}, 2}}) {
        auto [t, tw] = normalize_blowup(spec, k);
        for (long x = 0; x <= 12; ++x)
            for (const auto& c : class_enumeration(t, tw, x)) {
                auto pts = points(t, c);
                EXPECT_FALSE(pts.empty()) << c.to_string();
                for (const auto& p : pts) {
                    long s = 0;
                    for (long v : p)
                        s += v;
                    EXPECT_EQ(s, c.k[0]);
                }
            }
    }
}
