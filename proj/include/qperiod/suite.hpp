#pragma once

#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qperiod/assembler.hpp"
#include "qperiod/validation.hpp"

namespace qperiod {

struct SuiteLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteOptions {
    bool flip_b1 = false;
    unsigned threads = 1;
    /// Extra model checked for divisibility and z-scaling up to `model_dmax`.
    std::optional<Model> model;
    long model_dmax = 6;
};

namespace detail {

inline SuiteLine run_check(const std::string& name, const std::function<CheckResult()>& body)
{
    try {
        auto r = body();
        return {name, r.pass, r.detail};
    } catch (const std::exception& e) {
        return {name, false, e.what()};
    }
}

inline CheckResult same_series(const PeriodSeries& a, const PeriodSeries& b, long dmax,
                               const std::string& what)
{
    for (long d = 0; d <= dmax; ++d) {
        const auto i = static_cast<std::size_t>(d);
        if (a.regularised.at(i) != b.regularised.at(i))
            return {false, what + " differ at x^" + std::to_string(d) + ": " + to_string(a.regularised[i]) +
                               " vs " + to_string(b.regularised[i])};
    }
    return {};
}

inline CheckResult divisibility(const Model& m, long dmax, unsigned threads)
{
    AssemblyStats stats;
    EngineOptions opts;
    opts.threads = threads;
    period_series(m, dmax, opts, &stats);
    return {true, std::to_string(stats.divisions) + " exact divisions"};
}

inline CheckResult z_scaling(const Model& m, long dmax)
{
    for (long d = 0; d <= dmax; ++d)
        z_scaling_report(m, d);
    return {true, "x^0..x^" + std::to_string(dmax)};
}

} // namespace detail

inline std::vector<SuiteLine> run_validation_suite(const SuiteOptions& opt = {})
{
    using detail::run_check;
    const Model ex1 = blowup_model(BlowUpSpec{4, {1, 1, 2}});
    const Model ex2 = blowup_model(BlowUpSpec{6, {1, 2, 2}}, 2);
    EngineOptions eo;
    eo.threads = opt.threads;

    std::vector<SuiteLine> out;
    out.push_back(run_check("omega divisibility, blow-up of P^4 in (1,1,2), x^0..x^12",
                            [&] { return detail::divisibility(ex1, 12, opt.threads); }));
    out.push_back(run_check("omega divisibility, blow-up of P^6 in (1,2,2), x^0..x^14",
                            [&] { return detail::divisibility(ex2, 14, opt.threads); }));
    out.push_back(run_check("z-homogeneity, blow-up of P^4 in (1,1,2), x^0..x^6",
                            [&] { return detail::z_scaling(ex1, 6); }));
    out.push_back(run_check("gamma identity, x<=4, s<=3",
                            [&] { return check_gamma_identity(4, 3, opt.flip_b1); }));
    for (long c = -2; c <= 2; ++c)
        out.push_back(run_check("delta-M identity, upper " + std::to_string(c) + ", s<=2",
                                [&] { return check_delta_m(c, 2, opt.flip_b1); }));
    out.push_back(run_check("closed-form oracle, blow-up of P^4 in (1,1,2), x^0..x^10", [&] {
        return detail::same_series(period_series(ex1, 10, eo), oracle_example1(10), 10, "engine and oracle");
    }));
    out.push_back(run_check("closed-form oracle, blow-up of P^6 in (1,2,2), x^0..x^10", [&] {
        return detail::same_series(period_series(ex2, 10, eo), oracle_example2(10), 10, "engine and oracle");
    }));
    out.push_back(run_check("twist invariance k=1 vs k=2, blow-up of P^4 in (1,1,2), x^0..x^8", [&] {
        return detail::same_series(period_series(blowup_model(BlowUpSpec{4, {1, 1, 2}}, 1), 8, eo),
                                   period_series(blowup_model(BlowUpSpec{4, {1, 1, 2}}, 2), 8, eo), 8,
                                   "twists");
    }));
    out.push_back(run_check("twist invariance k=1 vs k=2, blow-up of P^6 in (1,2,2), x^0..x^8", [&] {
        return detail::same_series(period_series(blowup_model(BlowUpSpec{6, {1, 2, 2}}, 1), 8, eo),
                                   period_series(blowup_model(BlowUpSpec{6, {1, 2, 2}}, 2), 8, eo), 8,
                                   "twists");
    }));
    out.push_back(run_check("projective-bundle cross-check, blow-up of P^2 in a point, x^0..x^8",
                            [&] { return r1_cross_check(blowup_model(BlowUpSpec{2, {1, 1}}), 8); }));
    if (opt.model) {
        const auto dm = std::to_string(opt.model_dmax);
        out.push_back(run_check("omega divisibility, configured model, x^0..x^" + dm,
                                [&] { return detail::divisibility(*opt.model, opt.model_dmax, opt.threads); }));
        out.push_back(run_check("z-homogeneity, configured model, x^0..x^" + dm,
                                [&] { return detail::z_scaling(*opt.model, opt.model_dmax); }));
    }
    return out;
}

} // namespace qperiod
