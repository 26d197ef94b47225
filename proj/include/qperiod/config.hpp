#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qperiod/assembler.hpp"
#include "qperiod/errors.hpp"
#include "qperiod/rational.hpp"

namespace qperiod {

enum class RunMode { Blowup, Target, Example3Verbatim };

/// Flat key = value run description. Lines starting with '#' are comments.
struct RunConfig {
    RunMode mode = RunMode::Blowup;
    int base_dim = 0;
    std::vector<int> center_degrees;
    std::optional<int> twist_k;
    std::vector<int> e_degrees;
    std::vector<int> ranks;
    /// Empty optional: standard weights. Engaged and empty: no twist.
    std::optional<std::vector<std::vector<int>>> twist_weights;
    int rho = 0;
    std::optional<DivisorData> grading;
    ClassRange class_range = ClassRange::Lattice;
    TwistPolicy twist_policy = TwistPolicy::Strict;
    long dmax = 10;
    Rational z = 1;
    std::string out;
    std::string format = "table";
    std::string plot;
    unsigned threads = 1;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

inline long parse_long(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        long out = std::stol(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw UsageError("config key '" + key + "': expected an integer, got '" + v + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& v)
{
    return static_cast<int>(parse_long(key, v));
}

inline std::vector<int> parse_int_list(const std::string& key, const std::string& v, char sep = ',')
{
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (item.empty())
            throw UsageError("config key '" + key + "': empty list entry");
        out.push_back(parse_int(key, item));
    }
    if (out.empty())
        throw UsageError("config key '" + key + "': empty list");
    return out;
}

} // namespace detail

inline RunConfig parse_config(std::istream& in)
{
    RunConfig cfg;
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        auto key = detail::trim(line.substr(0, eq));
        auto value = detail::trim(line.substr(eq + 1));
        if (!kv.emplace(key, value).second)
            throw UsageError("config key '" + key + "' given twice");
    }

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        auto v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("mode")) {
        if (*v == "blowup")
            cfg.mode = RunMode::Blowup;
        else if (*v == "target")
            cfg.mode = RunMode::Target;
        else if (*v == "example3-verbatim")
            cfg.mode = RunMode::Example3Verbatim;
        else
            throw UsageError("unknown mode '" + *v + "'");
    }

    const std::set<std::string> blowup_keys{"center_degrees", "twist_k"};
    const std::set<std::string> target_keys{"e_degrees", "ranks", "twist_weights", "rho",
                                            "grading_a", "grading_b", "class_range", "twist_policy"};
    for (const auto& [k, v] : kv) {
        if (cfg.mode != RunMode::Blowup && blowup_keys.count(k))
            throw UsageError("config key '" + k + "' only applies to mode = blowup");
        if (cfg.mode != RunMode::Target && target_keys.count(k))
            throw UsageError("config key '" + k + "' only applies to mode = target");
    }

    if (auto v = take("base_dim"))
        cfg.base_dim = detail::parse_int("base_dim", *v);
    if (auto v = take("center_degrees"))
        cfg.center_degrees = detail::parse_int_list("center_degrees", *v);
    if (auto v = take("twist_k"))
        cfg.twist_k = detail::parse_int("twist_k", *v);
    if (auto v = take("e_degrees"))
        cfg.e_degrees = detail::parse_int_list("e_degrees", *v);
    if (auto v = take("ranks"))
        cfg.ranks = detail::parse_int_list("ranks", *v);
    if (auto v = take("twist_weights")) {
        if (*v == "none") {
            cfg.twist_weights = std::vector<std::vector<int>>{};
        } else if (*v != "standard") {
            std::vector<std::vector<int>> w;
            std::stringstream ss(*v);
            std::string item;
            while (std::getline(ss, item, ';'))
                w.push_back(detail::parse_int_list("twist_weights", detail::trim(item)));
            cfg.twist_weights = w;
        }
    }
    if (auto v = take("rho"))
        cfg.rho = detail::parse_int("rho", *v);
    auto ga = take("grading_a");
    auto gb = take("grading_b");
    if (ga.has_value() != gb.has_value())
        throw UsageError("grading_a and grading_b must be given together");
    if (ga) {
        DivisorData g;
        g.a = detail::parse_long("grading_a", *ga);
        for (int b : detail::parse_int_list("grading_b", *gb))
            g.b.push_back(b);
        cfg.grading = g;
    }
    if (auto v = take("class_range")) {
        if (*v == "lattice")
            cfg.class_range = ClassRange::Lattice;
        else if (*v == "mori")
            cfg.class_range = ClassRange::MoriCone;
        else
            throw UsageError("class_range must be lattice or mori");
    }
    if (auto v = take("twist_policy")) {
        if (*v == "strict")
            cfg.twist_policy = TwistPolicy::Strict;
        else if (*v == "skip-negative")
            cfg.twist_policy = TwistPolicy::SkipNegative;
        else
            throw UsageError("twist_policy must be strict or skip-negative");
    }
    if (auto v = take("dmax")) {
        cfg.dmax = detail::parse_long("dmax", *v);
        if (cfg.dmax < 0)
            throw UsageError("dmax must be non-negative");
    }
    if (auto v = take("z")) {
        cfg.z = parse_rational(*v);
        if (cfg.z == 0)
            throw UsageError("z must be nonzero");
    }
    if (auto v = take("out"))
        cfg.out = *v;
    if (auto v = take("format"))
        cfg.format = *v;
    if (auto v = take("plot"))
        cfg.plot = *v;
    if (auto v = take("threads")) {
        long t = detail::parse_long("threads", *v);
        if (t < 1)
            throw UsageError("threads must be at least 1");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (!kv.empty())
        throw UsageError("unknown config key '" + kv.begin()->first + "'");
    return cfg;
}

inline RunConfig parse_config_string(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file '" + path + "'");
    return parse_config(in);
}

inline Model build_model(const RunConfig& cfg)
{
    switch (cfg.mode) {
    case RunMode::Blowup:
        if (cfg.center_degrees.empty())
            throw UsageError("mode = blowup needs center_degrees");
        return blowup_model(BlowUpSpec{cfg.base_dim, cfg.center_degrees}, cfg.twist_k);
    case RunMode::Target: {
        if (cfg.e_degrees.empty() || cfg.ranks.empty())
            throw UsageError("mode = target needs e_degrees and ranks");
        FlagTarget t{cfg.base_dim, cfg.e_degrees, cfg.ranks};
        t.validate();
        TwistSpec tw = TwistSpec::standard(t, cfg.rho);
        if (cfg.twist_weights) {
            tw.weight_vectors = *cfg.twist_weights;
            for (const auto& f : tw.weight_vectors)
                if (f.size() != static_cast<std::size_t>(t.root_count()))
                    throw UsageError("twist weight vector needs " + std::to_string(t.root_count()) +
                                     " entries");
        }
        return Model{t, tw, cfg.grading, cfg.class_range, cfg.twist_policy};
    }
    case RunMode::Example3Verbatim:
        return example3_verbatim_model();
    }
    throw UsageError("unknown mode");
}

} // namespace qperiod
