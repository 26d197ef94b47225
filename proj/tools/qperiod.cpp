// qperiod: regularised quantum periods of blow-ups of projective space.
//
//   qperiod period   --config run.cfg [--dmax N] [--twist-k K] [--z P/Q] [--out PATH] [--format F]
//   qperiod jreport  --config run.cfg [--dmax N] [--z P/Q]
//   qperiod validate [--config run.cfg]
//
// Exit status: 0 on success, 1 when a computation or check fails, 2 on bad usage.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qperiod/qperiod.hpp"

namespace {

using namespace qperiod;

struct Flags {
    std::string config;
    std::optional<long> dmax;
    std::optional<int> twist_k;
    std::string z;
    std::string out;
    std::string format;
    std::string plot;
    std::optional<unsigned> threads;
    bool flip_b1 = false;
};

RunConfig resolve(const Flags& f)
{
    RunConfig cfg;
    if (!f.config.empty())
        cfg = load_config(f.config);
    if (f.dmax) {
        if (*f.dmax < 0)
            throw UsageError("--dmax must be non-negative");
        cfg.dmax = *f.dmax;
    }
    if (f.twist_k) {
        if (cfg.mode != RunMode::Blowup)
            throw UsageError("--twist-k only applies to mode = blowup");
        cfg.twist_k = f.twist_k;
    }
    if (!f.z.empty()) {
        cfg.z = parse_rational(f.z);
        if (cfg.z == 0)
            throw UsageError("--z must be nonzero");
    }
    if (!f.out.empty())
        cfg.out = f.out;
    if (!f.format.empty())
        cfg.format = f.format;
    if (!f.plot.empty())
        cfg.plot = f.plot;
    if (f.threads)
        cfg.threads = *f.threads;
    return cfg;
}

EngineOptions engine_options(const RunConfig& cfg)
{
    EngineOptions opts;
    opts.z = cfg.z;
    opts.threads = cfg.threads;
    if (const char* budget = std::getenv("QPERIOD_WORK_BUDGET")) {
        try {
            opts.work_budget = Integer(budget, 10);
        } catch (const std::invalid_argument&) {
            throw UsageError(std::string("QPERIOD_WORK_BUDGET is not an integer: '") + budget + "'");
        }
    }
    return opts;
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot write '" + path + "'");
    out << text;
}

int cmd_period(const Flags& f)
{
    const RunConfig cfg = resolve(f);
    const Model model = build_model(cfg);
    const PeriodSeries p = period_series(model, cfg.dmax, engine_options(cfg));
    emit(format_series(p, cfg.format), cfg.out);
    if (!cfg.plot.empty())
        emit(format_csv(p), cfg.plot);

    if (cfg.mode == RunMode::Example3Verbatim) {
        // The displayed data do not match the geometry they describe; report
        // the normalized blow-up alongside.
        const PeriodSeries normal = period_series(example3_normalized_model(), cfg.dmax, engine_options(cfg));
        std::cerr << "cross-check: blow-up of P^6 in (1,1,1,2) through x^" << cfg.dmax << "\n";
        bool differs = false;
        for (std::size_t d = 0; d < p.regularised.size(); ++d) {
            if (p.regularised[d] != normal.regularised[d]) {
                differs = true;
                std::cerr << "  x^" << d << ": verbatim " << to_string(p.regularised[d]) << ", normalized "
                          << to_string(normal.regularised[d]) << "\n";
            }
        }
        if (!differs)
            std::cerr << "  verbatim and normalized series agree\n";
    }
    return 0;
}

int cmd_jreport(const Flags& f)
{
    const RunConfig cfg = resolve(f);
    const Model model = build_model(cfg);
    const EngineOptions opts = engine_options(cfg);
    const auto units = unit_coefficients(model, cfg.dmax, opts);
    const Correction corr = cfg.dmax >= 1 ? correction_C(model) : Correction{};

    std::ostringstream os;
    os << "grading " << model.effective_grading().to_string() << ", z = " << to_string(cfg.z) << "\n";
    for (std::size_t d = 0; d < units.size(); ++d) {
        os << "x^" << d << "  unit " << to_string(units[d]) << "  z^" << (1 - static_cast<long>(d)) << "\n";
        if (d == 1)
            for (const auto& [c, n] : corr.entries)
                os << "    n" << c.to_string() << " = " << to_string(n) << "\n";
    }
    if (cfg.dmax >= 1)
        os << "C = " << to_string(corr.total()) << " x\n";
    emit(os.str(), cfg.out);
    return 0;
}

int cmd_validate(const Flags& f)
{
    SuiteOptions opt;
    opt.flip_b1 = f.flip_b1;
    if (!f.config.empty()) {
        const RunConfig cfg = resolve(f);
        opt.threads = cfg.threads;
        opt.model = build_model(cfg);
        opt.model_dmax = std::min<long>(cfg.dmax, 6);
    } else if (f.threads) {
        opt.threads = *f.threads;
    }
    bool ok = true;
    for (const auto& line : run_validation_suite(opt)) {
        ok = ok && line.pass;
        std::cout << (line.pass ? "PASS  " : "FAIL  ") << line.name;
        if (!line.detail.empty())
            std::cout << "  (" << line.detail << ")";
        std::cout << "\n";
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Regularised quantum periods of blow-ups of projective space"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "key = value run description")->check(CLI::ExistingFile);
        sub->add_option("--dmax", f.dmax, "highest x-degree");
        sub->add_option("--z", f.z, "evaluation point P/Q for z");
        sub->add_option("--out", f.out, "output file (default stdout)");
        sub->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* period = app.add_subcommand("period", "print the regularised quantum period");
    add_common(period);
    period->add_option("--twist-k", f.twist_k, "twist normalization k for blow-up mode");
    period->add_option("--format", f.format, "table, records or csv")
        ->check(CLI::IsMember({"table", "records", "csv"}));
    period->add_option("--plot", f.plot, "also write degree,log|coefficient| CSV here");

    auto* jreport = app.add_subcommand("jreport", "unit coefficients of J and the degree-1 correction");
    add_common(jreport);
    jreport->add_option("--twist-k", f.twist_k, "twist normalization k for blow-up mode");

    auto* validate = app.add_subcommand("validate", "run the identity and oracle checks");
    validate->add_option("--config", f.config, "also check this model")->check(CLI::ExistingFile);
    validate->add_option("--dmax", f.dmax, "highest x-degree for the configured model");
    validate->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
    validate->add_flag("--flip-b1", f.flip_b1, "negate B_1 (sensitivity check)")->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (period->parsed())
            return cmd_period(f);
        if (jreport->parsed())
            return cmd_jreport(f);
        return cmd_validate(f);
    } catch (const UsageError& e) {
        std::cerr << "qperiod: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qperiod: " << e.what() << "\n";
        return 1;
    }
}
