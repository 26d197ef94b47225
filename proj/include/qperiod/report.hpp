#pragma once

#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "qperiod/assembler.hpp"
#include "qperiod/errors.hpp"
#include "qperiod/rational.hpp"

namespace qperiod {

/// One `d: Ghat_d` line per degree, degrees right-aligned.
inline std::string format_table(const PeriodSeries& p)
{
    const std::size_t width = std::to_string(p.regularised.empty() ? 0 : p.regularised.size() - 1).size();
    std::ostringstream os;
    for (std::size_t d = 0; d < p.regularised.size(); ++d) {
        auto deg = std::to_string(d);
        os << std::string(width - deg.size(), ' ') << deg << ": " << to_string(p.regularised[d]) << "\n";
    }
    return os.str();
}

/// `degree<TAB>num<TAB>den` of G_d, one line per degree.
inline std::string format_records(const PeriodSeries& p)
{
    std::ostringstream os;
    for (std::size_t d = 0; d < p.coefficients.size(); ++d) {
        const auto& c = p.coefficients[d];
        os << d << '\t' << to_string(Integer(c.get_num())) << '\t' << to_string(Integer(c.get_den())) << "\n";
    }
    return os.str();
}

/// Inverse of format_records. Degrees must run 0, 1, 2, ... without gaps.
inline PeriodSeries parse_records(std::istream& in)
{
    PeriodSeries p;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string deg, num, den, extra;
        if (!std::getline(fields, deg, '\t') || !std::getline(fields, num, '\t') ||
            !std::getline(fields, den, '\t') || std::getline(fields, extra, '\t'))
            throw UsageError("malformed record line: '" + line + "'");
        if (deg != std::to_string(p.coefficients.size()))
            throw UsageError("record degrees out of sequence at '" + line + "'");
        const Rational c = parse_rational(num + "/" + den);
        if (to_string(Integer(c.get_num())) != num || to_string(Integer(c.get_den())) != den)
            throw UsageError("record not in lowest terms: '" + line + "'");
        p.coefficients.push_back(c);
    }
    p.unit = p.coefficients;
    p.regularised = regularise(p.coefficients);
    return p;
}

inline PeriodSeries parse_records(const std::string& text)
{
    std::istringstream in(text);
    return parse_records(in);
}

/// log |q| in double precision, for plotting only.
inline double log_abs(const Rational& q)
{
    if (q == 0)
        throw UsageError("log of zero");
    long en = 0, ed = 0;
    const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    return std::log(std::fabs(mn)) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

/// `degree,log_abs_regularised` for every nonzero regularised coefficient.
inline std::string format_csv(const PeriodSeries& p)
{
    std::ostringstream os;
    os << "degree,log_abs_regularised\n";
    os.precision(12);
    for (std::size_t d = 0; d < p.regularised.size(); ++d)
        if (p.regularised[d] != 0)
            os << d << ',' << log_abs(p.regularised[d]) << "\n";
    return os.str();
}

inline std::string format_series(const PeriodSeries& p, const std::string& format)
{
    if (format == "table")
        return format_table(p);
    if (format == "records")
        return format_records(p);
    if (format == "csv")
        return format_csv(p);
    throw UsageError("unknown format '" + format + "' (table, records or csv)");
}

} // namespace qperiod
