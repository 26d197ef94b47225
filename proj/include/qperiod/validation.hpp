#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperiod/assembler.hpp"
#include "qperiod/errors.hpp"
#include "qperiod/rational.hpp"

namespace qperiod {

inline Rational harmonic(long n)
{
    if (n < 0)
        throw UsageError("harmonic number of negative index");
    Rational h = 0;
    for (long k = 1; k <= n; ++k)
        h += Rational(1, k);
    return h;
}

/// B_m with B_1 = -1/2. `flip_b1` negates B_1 (test hook).
inline Rational bernoulli(int m, bool flip_b1 = false)
{
    if (m < 0)
        throw UsageError("negative Bernoulli index");
    std::vector<Rational> B(static_cast<std::size_t>(m) + 1);
    B[0] = 1;
    for (int n = 1; n <= m; ++n) {
        Rational acc = 0;
        for (int j = 0; j < n; ++j)
            acc += Rational(binomial(static_cast<unsigned long>(n + 1), static_cast<unsigned long>(j))) *
                   B[static_cast<std::size_t>(j)];
        B[static_cast<std::size_t>(n)] = -acc / (n + 1);
    }
    Rational out = B[static_cast<std::size_t>(m)];
    if (m == 1 && flip_b1)
        out = -out;
    return out;
}

/// Series in x, z (z may carry negative powers) and formal s_0, s_1, ...,
/// truncated at s-weight `s_order` where s_k has weight k+1.
class FormalSeries {
public:
    struct Key {
        int x = 0;
        int z = 0;
        std::vector<std::uint16_t> s;

        friend auto operator<=>(const Key&, const Key&) = default;
        friend bool operator==(const Key&, const Key&) = default;

        int s_weight() const
        {
            int w = 0;
            for (std::size_t k = 0; k < s.size(); ++k)
                w += static_cast<int>(k + 1) * s[k];
            return w;
        }

        std::string to_string() const
        {
            std::string out;
            auto append = [&](const std::string& f) { out += (out.empty() ? "" : "*") + f; };
            if (x)
                append("x^" + std::to_string(x));
            if (z)
                append("z^" + std::to_string(z));
            for (std::size_t k = 0; k < s.size(); ++k)
                if (s[k])
                    append("s" + std::to_string(k) + (s[k] > 1 ? "^" + std::to_string(s[k]) : ""));
            return out.empty() ? "1" : out;
        }
    };
    using Terms = std::map<Key, Rational>;

    explicit FormalSeries(int s_order) : s_order_(s_order)
    {
        if (s_order < 0)
            throw UsageError("negative s-order");
    }

    static FormalSeries constant(int s_order, const Rational& c)
    {
        FormalSeries out(s_order);
        out.add(out.key(0, 0), c);
        return out;
    }

    /// x^a z^b s_k (k < 0 for no s factor).
    static FormalSeries monomial(int s_order, int a, int b, int k, const Rational& c = 1)
    {
        FormalSeries out(s_order);
        Key e = out.key(a, b);
        if (k >= 0) {
            if (k >= s_order)
                return out;
            e.s[static_cast<std::size_t>(k)] = 1;
        }
        out.add(std::move(e), c);
        return out;
    }

    int s_order() const { return s_order_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Key key(int x, int z) const { return Key{x, z, std::vector<std::uint16_t>(static_cast<std::size_t>(s_order_), 0)}; }

    Rational coefficient(const Key& k) const
    {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add(Key k, const Rational& c)
    {
        if (c == 0 || k.s_weight() > s_order_)
            return;
        auto [it, inserted] = terms_.try_emplace(std::move(k), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    /// Drops every term with x-exponent above x_order.
    FormalSeries truncate_x(int x_order) const
    {
        FormalSeries out(s_order_);
        for (const auto& [k, c] : terms_)
            if (k.x <= x_order)
                out.terms_.emplace(k, c);
        return out;
    }

    FormalSeries& operator+=(const FormalSeries& o)
    {
        check(o);
        for (const auto& [k, c] : o.terms_)
            add(k, c);
        return *this;
    }

    FormalSeries& operator-=(const FormalSeries& o)
    {
        check(o);
        for (const auto& [k, c] : o.terms_)
            add(k, -c);
        return *this;
    }

    friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
    friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }

    friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b)
    {
        a.check(b);
        FormalSeries out(a.s_order_);
        for (const auto& [ka, ca] : a.terms_) {
            const int wa = ka.s_weight();
            for (const auto& [kb, cb] : b.terms_) {
                if (wa + kb.s_weight() > a.s_order_)
                    continue;
                Key k{ka.x + kb.x, ka.z + kb.z, ka.s};
                for (std::size_t i = 0; i < k.s.size(); ++i)
                    k.s[i] = static_cast<std::uint16_t>(k.s[i] + kb.s[i]);
                out.add(std::move(k), ca * cb);
            }
        }
        return out;
    }

    friend FormalSeries operator*(FormalSeries a, const Rational& c)
    {
        for (auto& [k, v] : a.terms_)
            v *= c;
        if (c == 0)
            a.terms_.clear();
        return a;
    }

    friend bool operator==(const FormalSeries& a, const FormalSeries& b)
    {
        return a.s_order_ == b.s_order_ && a.terms_ == b.terms_;
    }

    /// Substitutes x := x + shift * z.
    FormalSeries shift_x(const Rational& shift) const
    {
        FormalSeries out(s_order_);
        for (const auto& [k, c] : terms_) {
            for (int i = 0; i <= k.x; ++i) {
                Key e{i, k.z + (k.x - i), k.s};
                out.add(std::move(e), c * Rational(binomial(static_cast<unsigned long>(k.x),
                                                            static_cast<unsigned long>(i))) *
                                          pow(shift, k.x - i));
            }
        }
        return out;
    }

    /// exp of a series whose every term carries some s_k.
    FormalSeries exp() const
    {
        for (const auto& [k, c] : terms_)
            if (k.s_weight() == 0)
                throw UsageError("formal exp needs every term to carry an s variable");
        FormalSeries out = constant(s_order_, 1);
        FormalSeries power = out;
        for (int n = 1; n <= s_order_; ++n) {
            power = power * *this * Rational(1, n);
            if (power.is_zero())
                break;
            out += power;
        }
        return out;
    }

private:
    void check(const FormalSeries& o) const
    {
        if (s_order_ != o.s_order_)
            throw UsageError("formal series with different s-orders");
    }

    int s_order_ = 0;
    Terms terms_;
};

/// Outcome of an identity check; `detail` names the first mismatch.
struct CheckResult {
    bool pass = true;
    std::string detail;
};

inline CheckResult compare_series(const FormalSeries& lhs, const FormalSeries& rhs)
{
    if (lhs == rhs)
        return {};
    const FormalSeries diff = lhs - rhs;
    const auto& [k, c] = *diff.terms().begin();
    return {false, "coefficient of " + k.to_string() + ": " + to_string(lhs.coefficient(k)) + " vs " +
                       to_string(rhs.coefficient(k))};
}

/// G(x,z) = sum_{l,m} s_{l+m-1} B_m/m! x^l/l! z^{m-1}, without the s_{-1} term.
inline FormalSeries g_series(int s_order, bool flip_b1 = false)
{
    FormalSeries out(s_order);
    for (int k = 0; k + 1 <= s_order; ++k) {
        for (int m = 0; m <= k + 1; ++m) {
            const int l = k + 1 - m;
            const Rational c = bernoulli(m, flip_b1) / Rational(factorial(static_cast<unsigned long>(m))) /
                               Rational(factorial(static_cast<unsigned long>(l)));
            out += FormalSeries::monomial(s_order, l, m - 1, k, c);
        }
    }
    return out;
}

inline FormalSeries g_series(int x_order, int s_order, bool flip_b1 = false)
{
    return g_series(s_order, flip_b1).truncate_x(x_order);
}

/// s(x + shift z) = sum_k s_k (x + shift z)^k / k!.
inline FormalSeries s_function(int s_order, const Rational& shift = 0)
{
    FormalSeries out(s_order);
    for (int k = 0; k + 1 <= s_order; ++k)
        out += FormalSeries::monomial(s_order, k, 0, k,
                                      Rational(1) / Rational(factorial(static_cast<unsigned long>(k))));
    return shift == 0 ? out : out.shift_x(shift);
}

/// G(x+z, z) == G(x, z) + s(x), compared for x-degree <= x_order.
inline CheckResult check_gamma_identity(int x_order, int s_order, bool flip_b1 = false)
{
    const FormalSeries G = g_series(s_order, flip_b1);
    const FormalSeries lhs = G.shift_x(1).truncate_x(x_order);
    const FormalSeries rhs = (G + s_function(s_order)).truncate_x(x_order);
    return compare_series(lhs, rhs);
}

/// M(z) for one line bundle with the multiplicative class exp(s(.)):
/// exp(sum_{m=1}^{c} s(f + m z)) for c > 0, exp(-sum_{m=c+1}^{0} s(f + m z))
/// for c < 0. `z_sign` = -1 gives M(-z).
inline FormalSeries formal_modification_factor(long upper, int s_order, int z_sign = 1)
{
    FormalSeries exponent(s_order);
    if (upper > 0)
        for (long m = 1; m <= upper; ++m)
            exponent += s_function(s_order, Rational(z_sign * m));
    else
        for (long m = upper + 1; m <= 0; ++m)
            exponent -= s_function(s_order, Rational(z_sign * m));
    return exponent.exp();
}

/// M(-z) == exp(G(f, z)) exp(-G(f - c z, z)) with f in the x slot.
inline CheckResult check_delta_m(long upper, int s_order, bool flip_b1 = false)
{
    const FormalSeries lhs = formal_modification_factor(upper, s_order, -1);
    const FormalSeries G = g_series(s_order, flip_b1);
    const FormalSeries rhs = G.exp() * (G.shift_x(Rational(-upper)) * Rational(-1)).exp();
    return compare_series(lhs, rhs);
}

namespace detail {

inline Rational fact(long n)
{
    return Rational(factorial(static_cast<unsigned long>(n)));
}

inline PeriodSeries finish_series(std::vector<Rational> G)
{
    PeriodSeries out;
    out.unit = G;
    out.coefficients = std::move(G);
    out.regularised = regularise(out.coefficients);
    return out;
}

} // namespace detail

/// Closed-form double triple sum for P^4 blown up in (1,1,2).
inline PeriodSeries oracle_example1(long dmax)
{
    using detail::fact;
    std::vector<Rational> G(static_cast<std::size_t>(dmax) + 1, Rational(0));
    for (long n = 0; 2 * n <= dmax; ++n) {
        for (long l = n + 1; l + 2 * n <= dmax; ++l) {
            for (long m = l; l + 2 * m + 2 * n <= dmax; ++m) {
                Rational t = fact(l + n) * fact(l + m) * fact(l - n - 1) /
                             (pow(fact(l), 5) * pow(fact(m), 2) * pow(fact(n), 2) * fact(m - l));
                t *= Rational(n - m);
                if ((l + m - 1) % 2)
                    t = -t;
                G[static_cast<std::size_t>(l + 2 * m + 2 * n)] += t;
            }
        }
    }
    for (long l = 0; l <= dmax; ++l) {
        for (long m = l; l + 2 * m <= dmax; ++m) {
            for (long n = l; l + 2 * m + 2 * n <= dmax; ++n) {
                Rational t = fact(l + n) * fact(l + m) /
                             (pow(fact(l), 5) * pow(fact(m), 2) * pow(fact(n), 2) * fact(n - l) * fact(m - l));
                t *= 1 + Rational(n - m) * (-2 * harmonic(n) + harmonic(l + n) - harmonic(n - l));
                if ((m + n) % 2)
                    t = -t;
                G[static_cast<std::size_t>(l + 2 * m + 2 * n)] += t;
            }
        }
    }
    return detail::finish_series(std::move(G));
}

/// Closed-form triple sum for P^6 blown up in (1,2,2).
inline PeriodSeries oracle_example2(long dmax)
{
    using detail::fact;
    std::vector<Rational> G(static_cast<std::size_t>(dmax) + 1, Rational(0));
    for (long D = 0; 5 * D <= dmax; ++D) {
        for (long d1 = 0; 5 * D + 2 * d1 <= dmax; ++d1) {
            for (long d2 = 0; 5 * D + 2 * d1 + 2 * d2 <= dmax; ++d2) {
                Rational t = fact(d1 + 2 * D) * fact(d2 + 2 * D) /
                             (pow(fact(D), 7) * pow(fact(d1), 2) * pow(fact(d2), 2) * fact(d1 + D) * fact(d2 + D));
                t *= 1 + Rational(d1 - d2) * (-2 * harmonic(d1) + harmonic(d1 + 2 * D) - harmonic(d1 + D));
                if ((d1 + d2) % 2)
                    t = -t;
                G[static_cast<std::size_t>(5 * D + 2 * d1 + 2 * d2)] += t;
            }
        }
    }
    return detail::finish_series(std::move(G));
}

/// Direct double sum for a projective-bundle target (one rank, r = 1) at
/// z = 1: sum_{D,d} (d + rho D)! / (D!^{N+1} prod_j (d + a_j D)!), with its
/// own degree-1 correction. No Weyl factors and no division by omega.
inline PeriodSeries projective_bundle_oracle(const Model& m, long dmax)
{
    const auto& t = m.target;
    if (t.ranks != std::vector<int>{1})
        throw UsageError("projective bundle oracle needs ranks (1)");
    if (m.twist.weight_vectors.size() > 1)
        throw UsageError("projective bundle oracle takes at most one twist line bundle");
    const bool twisted = !m.twist.weight_vectors.empty();
    const long f = twisted ? m.twist.weight_vectors[0].at(0) : 0;
    const long rho = m.twist.rho;
    const DivisorData g = m.effective_grading();
    if (g.b.size() != 1 || g.b[0] <= 0)
        throw UsageError("projective bundle oracle needs a positive fibre grading");
    const long min_a = *std::min_element(t.e_degrees.begin(), t.e_degrees.end());

    std::vector<Rational> U(static_cast<std::size_t>(dmax) + 1, Rational(0));
    for (long D = 0; D <= dmax; ++D) {
        for (long d = -D * min_a;; ++d) {
            const long x = g.a * D + g.b[0] * d;
            if (x > dmax)
                break;
            if (x < 0)
                continue;
            Rational term = Rational(1) / pow(detail::fact(D), t.base_dim + 1);
            for (int a : t.e_degrees)
                term /= detail::fact(d + a * D);
            if (twisted) {
                const long up = f * d + rho * D;
                if (up < 0)
                    throw TwistRangeError("projective bundle oracle: negative twist range");
                term *= detail::fact(up);
            }
            U[static_cast<std::size_t>(x)] += term;
        }
    }
    const Rational n1 = dmax >= 1 ? U[1] : Rational(0);
    std::vector<Rational> G(U.size(), Rational(0));
    for (std::size_t x = 0; x < U.size(); ++x) {
        Rational e = 1;
        for (std::size_t i = 0; i <= x; ++i) {
            G[x] += e * U[x - i];
            e *= -n1 / Rational(static_cast<long>(i) + 1);
        }
    }
    return detail::finish_series(std::move(G));
}

/// Engine period series against projective_bundle_oracle, degree by degree.
inline CheckResult r1_cross_check(const Model& m, long dmax)
{
    const PeriodSeries engine = period_series(m, dmax);
    const PeriodSeries oracle = projective_bundle_oracle(m, dmax);
    for (std::size_t d = 0; d < engine.regularised.size(); ++d)
        if (engine.regularised[d] != oracle.regularised[d])
            return {false, "x^" + std::to_string(d) + ": engine " + to_string(engine.regularised[d]) +
                               " vs oracle " + to_string(oracle.regularised[d])};
    return {};
}

} // namespace qperiod
