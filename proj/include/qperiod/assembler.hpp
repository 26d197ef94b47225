#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <map>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "qperiod/errors.hpp"
#include "qperiod/graded_poly.hpp"
#include "qperiod/hypergeom.hpp"
#include "qperiod/rational.hpp"
#include "qperiod/target.hpp"

// Unit extraction works in the free polynomial ring on h and the Chern roots.
// The cohomology relations are homogeneous of positive degree, so two
// representatives of one class differ by terms with zero constant term, and
// a numerator changed by omega times a relation changes the quotient by a
// relation. The constant term of the omega quotient is therefore well defined
// without modelling the quotient ring.

namespace qperiod {

/// Everything that fixes the series: the flag target, its twist, the
/// x-grading (default: -K of the zero locus) and the summation conventions.
struct Model {
    FlagTarget target;
    TwistSpec twist;
    std::optional<DivisorData> grading;
    ClassRange class_range = ClassRange::Lattice;
    TwistPolicy twist_policy = TwistPolicy::Strict;

    DivisorData effective_grading() const
    {
        return grading ? *grading : anticanonical(target, twist).zero_locus;
    }

    std::vector<CurveClass> classes(long x_deg) const
    {
        return class_enumeration(target, effective_grading(), x_deg, class_range);
    }
};

inline Model blowup_model(const BlowUpSpec& spec, std::optional<int> twist_k = std::nullopt)
{
    auto [t, tw] = normalize_blowup(spec, twist_k);
    return Model{std::move(t), std::move(tw), std::nullopt, ClassRange::Lattice, TwistPolicy::Strict};
}

/// Example 3 as displayed: E = O^3 + O(2) over P^6, r = 3, F = S^dual(1),
/// Q = x^8, q = x^3, summed over the Mori cone, negative twist points dropped.
inline Model example3_verbatim_model()
{
    FlagTarget t{6, {0, 0, 0, 2}, {3}};
    return Model{t, TwistSpec::standard(t, 1), DivisorData{8, {3}}, ClassRange::MoriCone,
                 TwistPolicy::SkipNegative};
}

/// P^6 blown up in the complete intersection of degrees (1,1,1,2).
inline Model example3_normalized_model(std::optional<int> twist_k = std::nullopt)
{
    return blowup_model(BlowUpSpec{6, {1, 1, 1, 2}}, twist_k);
}

struct EngineOptions {
    Rational z = 1;
    unsigned threads = 1;
    /// Upper bound on the number of lattice points one run may visit.
    Integer work_budget = 50'000'000;
};

struct AssemblyStats {
    std::size_t classes = 0;
    std::size_t lattice_points = 0;
    std::size_t dropped_points = 0;
    std::size_t divisions = 0;

    AssemblyStats& operator+=(const AssemblyStats& o)
    {
        classes += o.classes;
        lattice_points += o.lattice_points;
        dropped_points += o.dropped_points;
        divisions += o.divisions;
        return *this;
    }
};

inline SummandContext make_context(const Model& m, const Rational& z)
{
    return SummandContext(m.target, m.twist, z, std::nullopt, m.twist_policy);
}

/// Signed sum of summand numerators over the lattice points of one class.
inline GradedPoly class_numerator(const Model& m, const CurveClass& c, const SummandContext& ctx,
                                  AssemblyStats* stats = nullptr)
{
    GradedPoly total(ctx.nvars(), ctx.cap);
    for (const auto& d : lattice_range(m.target, c)) {
        auto s = oh_summand(d, c, ctx);
        if (!s) {
            if (stats)
                ++stats->dropped_points;
            continue;
        }
        if (stats)
            ++stats->lattice_points;
        total += s->sign > 0 ? s->poly : -s->poly;
    }
    if (stats)
        ++stats->classes;
    return total;
}

/// Signed numerator aggregated over every class of one x-degree.
inline GradedPoly degree_numerator(const Model& m, long x_deg, const Rational& z,
                                   AssemblyStats* stats = nullptr)
{
    const SummandContext ctx = make_context(m, z);
    GradedPoly total(ctx.nvars(), ctx.cap);
    for (const auto& c : m.classes(x_deg))
        total += class_numerator(m, c, ctx, stats);
    return total;
}

inline GradedPoly degree_numerator(const FlagTarget& t, const TwistSpec& tw, long x_deg,
                                   const Rational& z = 1)
{
    return degree_numerator(Model{t, tw}, x_deg, z);
}

/// z times the constant term of numerator / omega (the leading z of J).
inline Rational unit_from_numerator(const GradedPoly& numerator, const SummandContext& ctx,
                                    AssemblyStats* stats = nullptr)
{
    std::size_t divisions = 0;
    const GradedPoly q = vandermonde_divide(numerator, ctx.gens.blocks(), &divisions);
    if (stats)
        stats->divisions += divisions;
    return ctx.z * unit_part(q);
}

inline Rational unit_coefficient(const Model& m, long x_deg, const Rational& z = 1,
                                 AssemblyStats* stats = nullptr)
{
    const SummandContext ctx = make_context(m, z);
    return unit_from_numerator(degree_numerator(m, x_deg, z, stats), ctx, stats);
}

inline Rational unit_coefficient(const FlagTarget& t, const TwistSpec& tw, long x_deg,
                                 const Rational& z = 1)
{
    return unit_coefficient(Model{t, tw}, x_deg, z);
}

inline Rational class_unit_coefficient(const Model& m, const CurveClass& c, const Rational& z = 1,
                                       AssemblyStats* stats = nullptr)
{
    const SummandContext ctx = make_context(m, z);
    return unit_from_numerator(class_numerator(m, c, ctx, stats), ctx, stats);
}

/// n_beta for each class of x-degree 1.
struct Correction {
    std::map<CurveClass, Rational> entries;

    Rational total() const
    {
        Rational s = 0;
        for (const auto& [c, n] : entries)
            s += n;
        return s;
    }
};

/// Each n_beta is computed at z = 1 and z = 2; at x-degree 1 they must agree.
inline Correction correction_C(const Model& m, AssemblyStats* stats = nullptr)
{
    Correction out;
    for (const auto& c : m.classes(1)) {
        const Rational at1 = class_unit_coefficient(m, c, 1, stats);
        const Rational at2 = class_unit_coefficient(m, c, 2, nullptr);
        if (at1 != at2)
            throw HomogeneityError("n_beta of class " + c.to_string() + " depends on z: " +
                                   to_string(at1) + " vs " + to_string(at2));
        out.entries.emplace(c, at1);
    }
    return out;
}

inline Correction correction_C(const FlagTarget& t, const TwistSpec& tw)
{
    return correction_C(Model{t, tw});
}

struct PeriodSeries {
    /// Unit coefficients of the I-function at z = 1, before correction.
    std::vector<Rational> unit;
    /// G_d.
    std::vector<Rational> coefficients;
    /// d! G_d.
    std::vector<Rational> regularised;
    Correction correction;
};

inline Integer estimate_work(const Model& m, long dmax)
{
    Integer total = 0;
    for (long x = 0; x <= dmax; ++x)
        for (const auto& c : m.classes(x))
            total += lattice_count_estimate(m.target, c);
    return total;
}

/// Unit coefficients for x-degrees 0..dmax at z, computed over `threads`
/// workers. Each degree is independent and lands in its own slot, so the
/// output does not depend on the thread count.
inline std::vector<Rational> unit_coefficients(const Model& m, long dmax, const EngineOptions& opts,
                                               AssemblyStats* stats = nullptr)
{
    if (dmax < 0)
        throw UsageError("dmax must be non-negative");
    const Integer work = estimate_work(m, dmax);
    if (work > opts.work_budget)
        throw BudgetExceededError("about " + to_string(work) + " lattice points up to x^" +
                                  std::to_string(dmax) + " exceeds the work budget of " +
                                  to_string(opts.work_budget));

    const auto n = static_cast<std::size_t>(dmax) + 1;
    std::vector<Rational> values(n);
    std::vector<AssemblyStats> per_degree(n);
    std::vector<std::exception_ptr> errors(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(n)));

    auto run = [&](unsigned w) {
        for (std::size_t d = w; d < n; d += workers) {
            try {
                values[d] = unit_coefficient(m, static_cast<long>(d), opts.z, &per_degree[d]);
            } catch (...) {
                errors[d] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    if (stats)
        for (const auto& s : per_degree)
            *stats += s;
    return values;
}

/// G(x) = exp(-C(x)) * sum_d U_d x^d. At z = 1 every unit term of x-degree d
/// carries z^{1-d} and C carries z^0, so the products line up degree by degree.
inline PeriodSeries period_series(const Model& m, long dmax, const EngineOptions& opts = {},
                                  AssemblyStats* stats = nullptr)
{
    PeriodSeries out;
    const auto raw = unit_coefficients(m, dmax, opts, stats);
    out.unit.resize(raw.size());
    for (std::size_t d = 0; d < raw.size(); ++d)
        out.unit[d] = raw[d] * pow(opts.z, static_cast<long>(d) - 1);

    out.correction = dmax >= 1 ? correction_C(m) : Correction{};
    const Rational n1 = out.correction.total();

    const auto n = out.unit.size();
    std::vector<Rational> expo(n);
    Rational term = 1;
    for (std::size_t i = 0; i < n; ++i) {
        expo[i] = term;
        term *= -n1 / Rational(static_cast<long>(i) + 1);
    }
    out.coefficients.assign(n, Rational(0));
    for (std::size_t d = 0; d < n; ++d)
        for (std::size_t i = 0; i <= d; ++i)
            out.coefficients[d] += expo[i] * out.unit[d - i];
    out.regularised = regularise(out.coefficients);
    return out;
}

inline PeriodSeries period_series(const FlagTarget& t, const TwistSpec& tw, long dmax)
{
    return period_series(Model{t, tw}, dmax);
}

struct ZScaling {
    Rational at_one;
    Rational at_two;
    long exponent = 1;
};

/// Unit coefficient at z = 1 and z = 2; they must satisfy value(2) = value(1) 2^{1-d}.
inline ZScaling z_scaling_report(const Model& m, long x_deg, AssemblyStats* stats = nullptr)
{
    ZScaling out;
    out.exponent = 1 - x_deg;
    out.at_one = unit_coefficient(m, x_deg, 1, stats);
    out.at_two = unit_coefficient(m, x_deg, 2, stats);
    if (out.at_two != out.at_one * pow(Rational(2), out.exponent))
        throw HomogeneityError("x^" + std::to_string(x_deg) + ": value(2) = " + to_string(out.at_two) +
                               " but value(1) * 2^" + std::to_string(out.exponent) + " = " +
                               to_string(out.at_one * pow(Rational(2), out.exponent)));
    return out;
}

} // namespace qperiod
