#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperiod/errors.hpp"
#include "qperiod/graded_poly.hpp"
#include "qperiod/rational.hpp"
#include "qperiod/target.hpp"

namespace qperiod {

namespace univariate {

/// Truncated power series in one variable t, coefficient i of t^i.
using Series = std::vector<Rational>;

inline Series mul(const Series& a, const Series& b, int cap)
{
    Series out(static_cast<std::size_t>(cap) + 1, Rational(0));
    for (std::size_t i = 0; i < a.size() && i <= static_cast<std::size_t>(cap); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size() && i + j <= static_cast<std::size_t>(cap); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

inline Series one(int cap)
{
    Series out(static_cast<std::size_t>(cap) + 1, Rational(0));
    out[0] = 1;
    return out;
}

/// (t + c).
inline Series linear(const Rational& c, int cap)
{
    Series out = one(cap);
    out[0] = c;
    if (cap >= 1)
        out[1] = 1;
    return out;
}

inline Series inverse(const Series& a, int cap)
{
    if (a.empty() || a[0] == 0)
        throw NotUnitError();
    Series out(static_cast<std::size_t>(cap) + 1, Rational(0));
    out[0] = Rational(1) / a[0];
    for (std::size_t n = 1; n <= static_cast<std::size_t>(cap); ++n) {
        Rational acc = 0;
        for (std::size_t i = 1; i <= n && i < a.size(); ++i)
            acc += a[i] * out[n - i];
        out[n] = -acc * out[0];
    }
    return out;
}

inline Series power(const Series& a, int e, int cap)
{
    Series out = one(cap);
    for (int i = 0; i < e; ++i)
        out = mul(out, a, cap);
    return out;
}

/// sum_i s_i L^i by Horner's rule.
inline GradedPoly evaluate(const Series& s, const GradedPoly& L)
{
    GradedPoly out(L.nvars(), L.cap());
    for (std::size_t i = s.size(); i-- > 0;) {
        out = out * L;
        out += GradedPoly::constant(L.nvars(), L.cap(), s[i]);
    }
    return out;
}

} // namespace univariate

/// Splits a degree <= 1 polynomial into constant term and linear part.
inline std::pair<Rational, GradedPoly> split_constant(const GradedPoly& cls)
{
    const Rational c0 = cls.constant_term();
    return {c0, cls - GradedPoly::constant(cls.nvars(), cls.cap(), c0)};
}

/// prod_{m<=0}(cls + m z) / prod_{m<=c}(cls + m z): for c > 0 the inverse of
/// prod_{m=1}^{c}, for c < 0 the numerator prod_{m=c+1}^{0}.
inline GradedPoly factor_ratio(const GradedPoly& cls, long c, const Rational& z)
{
    const int cap = cls.cap();
    if (c == 0)
        return GradedPoly::one(cls.nvars(), cap);
    auto [c0, L] = split_constant(cls);
    univariate::Series s = univariate::one(cap);
    if (c > 0) {
        for (long m = 1; m <= c; ++m) {
            const Rational shift = c0 + m * z;
            if (shift == 0)
                throw SingularFactorError("denominator factor (" + cls.to_string() + " + " +
                                          std::to_string(m) + "z) is not invertible");
            s = univariate::mul(s, univariate::linear(shift, cap), cap);
        }
        s = univariate::inverse(s, cap);
    } else {
        for (long m = c + 1; m <= 0; ++m)
            s = univariate::mul(s, univariate::linear(c0 + m * z, cap), cap);
    }
    return univariate::evaluate(s, L);
}

/// prod_{m=1}^{c}(cls + m z), c >= 0.
inline GradedPoly rising_product(const GradedPoly& cls, long c, const Rational& z)
{
    const int cap = cls.cap();
    auto [c0, L] = split_constant(cls);
    univariate::Series s = univariate::one(cap);
    for (long m = 1; m <= c; ++m)
        s = univariate::mul(s, univariate::linear(c0 + m * z, cap), cap);
    return univariate::evaluate(s, L);
}

/// prod_{m=1}^{D}(h + m z)^{-(N+1)}, the degree-D term of J of P^N.
inline GradedPoly base_j_factor(long D, int N, const Rational& z, int cap, std::size_t nvars = 1)
{
    if (D < 0)
        throw UsageError("negative base degree");
    if (D == 0)
        return GradedPoly::one(nvars, cap);
    univariate::Series s = univariate::one(cap);
    for (long m = 1; m <= D; ++m) {
        if (z == 0)
            throw SingularFactorError("base J factor at z = 0");
        s = univariate::mul(s, univariate::linear(m * z, cap), cap);
    }
    s = univariate::power(univariate::inverse(s, cap), N + 1, cap);
    return univariate::evaluate(s, GradedPoly::variable(nvars, cap, GeneratorSet::base));
}

/// Degree-D term of the base J-function. Defaults to projective space.
using BaseJOracle = std::function<GradedPoly(long D, const Rational& z, int cap, std::size_t nvars)>;

inline BaseJOracle projective_space_j(int N)
{
    return [N](long D, const Rational& z, int cap, std::size_t nvars) {
        return base_j_factor(D, N, z, cap, nvars);
    };
}

/// What to do with a lattice point whose twist upper limit is negative.
enum class TwistPolicy { Strict, SkipNegative };

struct SummandContext {
    FlagTarget target;
    TwistSpec twist;
    Rational z = 1;
    int cap = 0;
    TwistPolicy twist_policy = TwistPolicy::Strict;
    BaseJOracle base_j;

    SummandContext(FlagTarget t, TwistSpec tw, Rational z_ = 1, std::optional<int> cap_ = std::nullopt,
                   TwistPolicy policy = TwistPolicy::Strict)
        : target(std::move(t)), twist(std::move(tw)), z(std::move(z_)), twist_policy(policy)
    {
        target.validate();
        gens = target.generators();
        cap = cap_.value_or(gens.omega_degree());
        if (cap < gens.omega_degree())
            throw UsageError("summand cap below deg omega");
        if (z == 0)
            throw UsageError("z must be nonzero");
        base_j = projective_space_j(target.base_dim);
    }

    GeneratorSet gens;

    std::size_t nvars() const { return gens.size(); }
    GradedPoly one() const { return GradedPoly::one(nvars(), cap); }
    GradedPoly var(std::size_t v) const { return GradedPoly::variable(nvars(), cap, v); }
    GradedPoly h() const { return var(GeneratorSet::base); }
};

/// Inter-block and top-block ratios, with H_{l+1,j} = -a_j h and
/// d_{l+1,j} = -a_j D.
inline GradedPoly flag_factor(const LatticePoint& d, const CurveClass& c, const SummandContext& ctx)
{
    const auto& t = ctx.target;
    if (d.size() != static_cast<std::size_t>(t.root_count()))
        throw UsageError("lattice point has wrong length");
    GradedPoly out = ctx.one();
    const std::size_t l = t.flag_length();
    for (std::size_t i = 0; i < l; ++i) {
        const auto off = t.block_offset(i);
        for (int j = 0; j < t.ranks[i]; ++j) {
            const auto slot = off + static_cast<std::size_t>(j);
            const GradedPoly hij = ctx.var(ctx.gens.root(i, static_cast<std::size_t>(j)));
            if (i + 1 < l) {
                const auto off2 = t.block_offset(i + 1);
                for (int jp = 0; jp < t.ranks[i + 1]; ++jp) {
                    const auto slot2 = off2 + static_cast<std::size_t>(jp);
                    const GradedPoly cls = hij - ctx.var(ctx.gens.root(i + 1, static_cast<std::size_t>(jp)));
                    out = out * factor_ratio(cls, d[slot] - d[slot2], ctx.z);
                }
            } else {
                for (int a : t.e_degrees) {
                    const GradedPoly cls = hij + ctx.h() * Rational(a);
                    out = out * factor_ratio(cls, d[slot] + a * c.D, ctx.z);
                }
            }
        }
    }
    return out;
}

struct SignedPoly {
    GradedPoly poly;
    int sign = 1;
};

/// Numerator prod_{i<j}(h_i - h_j + (d_i - d_j) z) of one block and the sign
/// (-1)^{sum_{i<j}(d_i - d_j)}. The division by h_i - h_j is left to the caller.
inline SignedPoly weyl_block(const LatticePoint& d, std::size_t block, const SummandContext& ctx)
{
    const auto& t = ctx.target;
    const auto off = t.block_offset(block);
    const auto r = static_cast<std::size_t>(t.ranks.at(block));
    GradedPoly num = ctx.one();
    long eps = 0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < r; ++j) {
            const long diff = d[off + i] - d[off + j];
            GradedPoly f = ctx.var(ctx.gens.root(block, i)) - ctx.var(ctx.gens.root(block, j));
            f += GradedPoly::constant(ctx.nvars(), ctx.cap, ctx.z * diff);
            num = num * f;
            eps += diff;
        }
    }
    return {std::move(num), (eps % 2 == 0) ? 1 : -1};
}

/// prod_s prod_{m=1}^{f_s.d + rho D}(f_s.H + rho h + m z). Empty optional when
/// the point is skipped under TwistPolicy::SkipNegative.
inline std::optional<GradedPoly> twist_factor(const LatticePoint& d, const CurveClass& c,
                                              const SummandContext& ctx)
{
    const auto R = static_cast<std::size_t>(ctx.target.root_count());
    GradedPoly out = ctx.one();
    for (const auto& f : ctx.twist.weight_vectors) {
        if (f.size() != R)
            throw UsageError("twist weight vector has wrong length");
        long upper = static_cast<long>(ctx.twist.rho) * c.D;
        std::vector<Rational> coeffs(ctx.nvars(), Rational(0));
        coeffs[GeneratorSet::base] = ctx.twist.rho;
        std::size_t slot = 0;
        for (std::size_t b = 0; b < ctx.target.flag_length(); ++b) {
            for (int j = 0; j < ctx.target.ranks[b]; ++j, ++slot) {
                upper += f[slot] * d[slot];
                coeffs[ctx.gens.root(b, static_cast<std::size_t>(j))] += f[slot];
            }
        }
        if (upper < 0) {
            if (ctx.twist_policy == TwistPolicy::SkipNegative)
                return std::nullopt;
            throw TwistRangeError("twist upper limit " + std::to_string(upper) + " is negative at class " +
                                  c.to_string());
        }
        out = out * rising_product(GradedPoly::linear(ctx.nvars(), ctx.cap, coeffs), upper, ctx.z);
    }
    return out;
}

/// Signed numerator of one summand of the twisted I-function: base J factor,
/// flag ratios, Weyl numerators and twist. Empty when the twist policy drops
/// the point.
inline std::optional<SignedPoly> oh_summand(const LatticePoint& d, const CurveClass& c,
                                            const SummandContext& ctx)
{
    auto tw = twist_factor(d, c, ctx);
    if (!tw)
        return std::nullopt;
    GradedPoly p = ctx.base_j(c.D, ctx.z, ctx.cap, ctx.nvars());
    p = p * flag_factor(d, c, ctx);
    int sign = 1;
    for (std::size_t b = 0; b < ctx.target.flag_length(); ++b) {
        auto w = weyl_block(d, b, ctx);
        p = p * w.poly;
        sign *= w.sign;
    }
    p = p * *tw;
    return SignedPoly{std::move(p), sign};
}

/// Summand of the abelian (toric bundle) I-function: no Weyl factors and no
/// division by omega.
inline GradedPoly brown_summand(const LatticePoint& d, const CurveClass& c, const SummandContext& ctx)
{
    GradedPoly p = ctx.base_j(c.D, ctx.z, ctx.cap, ctx.nvars());
    p = p * flag_factor(d, c, ctx);
    if (!ctx.twist.weight_vectors.empty()) {
        auto tw = twist_factor(d, c, ctx);
        if (!tw)
            return GradedPoly(ctx.nvars(), ctx.cap);
        p = p * *tw;
    }
    return p;
}

/// Laurent series in a formal parameter lambda with GradedPoly coefficients,
/// truncated below `min_exp`.
struct LambdaSeries {
    int min_exp = 0;
    std::map<int, GradedPoly> coeffs;

    GradedPoly coefficient(int e, std::size_t nvars, int cap) const
    {
        auto it = coeffs.find(e);
        return it == coeffs.end() ? GradedPoly(nvars, cap) : it->second;
    }

    void add(int e, const GradedPoly& p)
    {
        if (e < min_exp || p.is_zero())
            return;
        auto it = coeffs.find(e);
        if (it == coeffs.end()) {
            coeffs.emplace(e, p);
            return;
        }
        it->second += p;
        if (it->second.is_zero())
            coeffs.erase(it);
    }

    int top_exp() const { return coeffs.empty() ? min_exp : coeffs.rbegin()->first; }
};

inline LambdaSeries lambda_mul(const LambdaSeries& a, const LambdaSeries& b, int min_exp)
{
    LambdaSeries out;
    out.min_exp = min_exp;
    for (const auto& [ea, pa] : a.coeffs)
        for (const auto& [eb, pb] : b.coeffs)
            if (ea + eb >= min_exp)
                out.add(ea + eb, pa * pb);
    return out;
}

/// prod_s M for one class: prod_{m=1}^{c}(f + lambda + m z) when c > 0 and
/// 1 / prod_{m=c+1}^{0}(f + lambda + m z) when c < 0, expanded in 1/lambda.
/// Coefficients of lambda^e with e < min_exp are dropped.
inline LambdaSeries modification_factor(const std::vector<GradedPoly>& classes,
                                        const std::vector<long>& uppers, int min_exp,
                                        const Rational& z)
{
    if (classes.size() != uppers.size())
        throw UsageError("modification factor needs one upper limit per class");
    if (classes.empty())
        throw UsageError("modification factor needs at least one class");
    const std::size_t n = classes[0].nvars();
    const int cap = classes[0].cap();

    // Positive-degree factors raise the top exponent, so the inverses must be
    // carried that much further down before truncating.
    int extra = 0;
    for (long c : uppers)
        extra += c > 0 ? static_cast<int>(c) : 0;
    const int work_min = min_exp - extra;

    LambdaSeries out;
    out.min_exp = work_min;
    out.add(0, GradedPoly::one(n, cap));
    for (std::size_t s = 0; s < classes.size(); ++s) {
        const long c = uppers[s];
        if (c > 0) {
            for (long m = 1; m <= c; ++m) {
                LambdaSeries f;
                f.min_exp = work_min;
                f.add(1, GradedPoly::one(n, cap));
                f.add(0, classes[s] + GradedPoly::constant(n, cap, m * z));
                out = lambda_mul(out, f, work_min);
            }
        } else {
            for (long m = c + 1; m <= 0; ++m) {
                // 1/(lambda + u) = sum_k (-u)^k lambda^{-1-k}
                const GradedPoly u = classes[s] + GradedPoly::constant(n, cap, m * z);
                LambdaSeries f;
                f.min_exp = work_min;
                GradedPoly term = GradedPoly::one(n, cap);
                for (int e = -1; e >= work_min; --e) {
                    f.add(e, term);
                    term = term * (-u);
                }
                out = lambda_mul(out, f, work_min);
            }
        }
    }
    LambdaSeries trimmed;
    trimmed.min_exp = min_exp;
    for (const auto& [e, p] : out.coeffs)
        trimmed.add(e, p);
    return trimmed;
}

} // namespace qperiod
