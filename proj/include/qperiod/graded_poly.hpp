#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qperiod/errors.hpp"
#include "qperiod/rational.hpp"

namespace qperiod {

/// Cohomology generators of a flag bundle over P^N: the hyperplane class h
/// (index 0) followed by the Chern roots of each block, block-major.
/// Every generator has degree 1.
class GeneratorSet {
public:
    GeneratorSet() = default;

    explicit GeneratorSet(std::vector<int> block_sizes) : block_sizes_(std::move(block_sizes))
    {
        std::size_t next = 1;
        for (int r : block_sizes_) {
            if (r < 0)
                throw UsageError("negative block size");
            offsets_.push_back(next);
            next += static_cast<std::size_t>(r);
        }
        size_ = next;
    }

    static constexpr std::size_t base = 0;

    std::size_t size() const { return size_; }
    std::size_t block_count() const { return block_sizes_.size(); }
    int block_size(std::size_t block) const { return block_sizes_.at(block); }

    /// Variable index of root j (0-based) in block `block` (0-based).
    std::size_t root(std::size_t block, std::size_t j) const
    {
        if (block >= block_sizes_.size() || j >= static_cast<std::size_t>(block_sizes_[block]))
            throw UsageError("root index out of range");
        return offsets_[block] + j;
    }

    std::vector<std::vector<std::size_t>> blocks() const
    {
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t b = 0; b < block_sizes_.size(); ++b) {
            std::vector<std::size_t> idx;
            for (int j = 0; j < block_sizes_[b]; ++j)
                idx.push_back(offsets_[b] + static_cast<std::size_t>(j));
            out.push_back(std::move(idx));
        }
        return out;
    }

    /// deg omega = sum_i r_i (r_i - 1) / 2.
    int omega_degree() const
    {
        int deg = 0;
        for (int r : block_sizes_)
            deg += r * (r - 1) / 2;
        return deg;
    }

    std::string name(std::size_t var) const
    {
        if (var == base)
            return "h";
        for (std::size_t b = 0; b < block_sizes_.size(); ++b) {
            auto lo = offsets_[b];
            auto hi = lo + static_cast<std::size_t>(block_sizes_[b]);
            if (var >= lo && var < hi) {
                auto j = std::to_string(var - lo + 1);
                return block_sizes_.size() == 1 ? "h" + j : "h" + std::to_string(b + 1) + "_" + j;
            }
        }
        throw UsageError("variable index out of range");
    }

private:
    std::vector<int> block_sizes_;
    std::vector<std::size_t> offsets_;
    std::size_t size_ = 1;
};

/// Truncated multivariate polynomial with exact coefficients. Monomials of
/// total degree above `cap` are discarded; zero coefficients are never stored.
class GradedPoly {
public:
    using Exponent = std::vector<std::uint16_t>;
    using Terms = std::map<Exponent, Rational>;

    GradedPoly() = default;

    GradedPoly(std::size_t nvars, int cap) : nvars_(nvars), cap_(cap)
    {
        if (cap < 0)
            throw UsageError("negative truncation cap");
    }

    static GradedPoly constant(std::size_t nvars, int cap, const Rational& c)
    {
        GradedPoly p(nvars, cap);
        p.add_term(Exponent(nvars, 0), c);
        return p;
    }

    static GradedPoly one(std::size_t nvars, int cap) { return constant(nvars, cap, Rational(1)); }

    static GradedPoly variable(std::size_t nvars, int cap, std::size_t var)
    {
        if (var >= nvars)
            throw UsageError("variable index out of range");
        GradedPoly p(nvars, cap);
        Exponent e(nvars, 0);
        e[var] = 1;
        p.add_term(std::move(e), Rational(1));
        return p;
    }

    /// c0 + sum_i coeffs[i] * x_i.
    static GradedPoly linear(std::size_t nvars, int cap, const std::vector<Rational>& coeffs,
                             const Rational& c0 = Rational(0))
    {
        if (coeffs.size() != nvars)
            throw UsageError("linear form has wrong number of coefficients");
        GradedPoly p = constant(nvars, cap, c0);
        for (std::size_t i = 0; i < nvars; ++i) {
            Exponent e(nvars, 0);
            e[i] = 1;
            p.add_term(std::move(e), coeffs[i]);
        }
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    int cap() const { return cap_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    static int total_degree(const Exponent& e)
    {
        return std::accumulate(e.begin(), e.end(), 0);
    }

    /// Highest total degree present, -1 for the zero polynomial.
    int degree() const
    {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, total_degree(e));
        return d;
    }

    Rational coefficient(const Exponent& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coefficient(Exponent(nvars_, 0)); }

    /// Adds c * x^e, dropping it when deg e exceeds the cap.
    void add_term(Exponent e, const Rational& c)
    {
        if (e.size() != nvars_)
            throw UsageError("exponent has wrong length");
        if (c == 0 || total_degree(e) > cap_)
            return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    /// Same terms under a different cap. Raising the cap never invents terms.
    GradedPoly with_cap(int cap) const
    {
        GradedPoly out(nvars_, cap);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) <= cap)
                out.terms_.emplace(e, c);
        return out;
    }

    GradedPoly homogeneous_part(int degree) const
    {
        GradedPoly out(nvars_, cap_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) == degree)
                out.terms_.emplace(e, c);
        return out;
    }

    /// Renames variable i to perm[i].
    GradedPoly permuted(const std::vector<std::size_t>& perm) const
    {
        if (perm.size() != nvars_)
            throw UsageError("permutation has wrong length");
        GradedPoly out(nvars_, cap_);
        for (const auto& [e, c] : terms_) {
            Exponent f(nvars_, 0);
            for (std::size_t i = 0; i < nvars_; ++i)
                f[perm[i]] = e[i];
            out.terms_.emplace(std::move(f), c);
        }
        return out;
    }

    /// Substitutes variable `var` := variable `with`.
    GradedPoly identify(std::size_t var, std::size_t with) const
    {
        GradedPoly out(nvars_, cap_);
        for (const auto& [e, c] : terms_) {
            Exponent f = e;
            f[with] = static_cast<std::uint16_t>(f[with] + f[var]);
            f[var] = 0;
            out.add_term(std::move(f), c);
        }
        return out;
    }

    GradedPoly& operator+=(const GradedPoly& other)
    {
        check_compatible(other);
        for (const auto& [e, c] : other.terms_)
            add_term(e, c);
        return *this;
    }

    GradedPoly& operator-=(const GradedPoly& other)
    {
        check_compatible(other);
        for (const auto& [e, c] : other.terms_)
            add_term(e, -c);
        return *this;
    }

    GradedPoly& operator*=(const Rational& s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_)
            c *= s;
        return *this;
    }

    GradedPoly operator-() const
    {
        GradedPoly out = *this;
        for (auto& [e, c] : out.terms_)
            c = -c;
        return out;
    }

    friend GradedPoly operator+(GradedPoly a, const GradedPoly& b) { return a += b; }
    friend GradedPoly operator-(GradedPoly a, const GradedPoly& b) { return a -= b; }
    friend GradedPoly operator*(GradedPoly a, const Rational& s) { return a *= s; }
    friend GradedPoly operator*(const Rational& s, GradedPoly a) { return a *= s; }

    friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b)
    {
        a.check_compatible(b);
        GradedPoly out(a.nvars_, a.cap_);
        std::vector<std::pair<const Exponent*, int>> rhs;
        rhs.reserve(b.terms_.size());
        for (const auto& [e, c] : b.terms_)
            rhs.emplace_back(&e, total_degree(e));
        Exponent prod(a.nvars_);
        for (const auto& [ea, ca] : a.terms_) {
            const int da = total_degree(ea);
            auto it = b.terms_.begin();
            for (std::size_t k = 0; k < rhs.size(); ++k, ++it) {
                if (da + rhs[k].second > a.cap_)
                    continue;
                const Exponent& eb = *rhs[k].first;
                for (std::size_t i = 0; i < a.nvars_; ++i)
                    prod[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
                out.add_term(prod, ca * it->second);
            }
        }
        return out;
    }

    GradedPoly& operator*=(const GradedPoly& other) { return *this = *this * other; }

    friend bool operator==(const GradedPoly& a, const GradedPoly& b)
    {
        return a.nvars_ == b.nvars_ && a.cap_ == b.cap_ && a.terms_ == b.terms_;
    }

    std::string to_string(const GeneratorSet* names = nullptr) const
    {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        // Graded order: constant first, then by increasing degree.
        std::vector<std::pair<const Exponent*, const Rational*>> order;
        for (const auto& [e, c] : terms_)
            order.emplace_back(&e, &c);
        std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
            return total_degree(*x.first) < total_degree(*y.first);
        });
        for (const auto& [e, c] : order) {
            Rational mag = abs(*c);
            const bool neg = *c < 0;
            if (first)
                os << (neg ? "-" : "");
            else
                os << (neg ? " - " : " + ");
            first = false;
            const bool unit_monomial = total_degree(*e) == 0;
            if (mag != 1 || unit_monomial)
                os << qperiod::to_string(mag) << (unit_monomial ? "" : "*");
            bool first_var = true;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if ((*e)[i] == 0)
                    continue;
                if (!first_var)
                    os << "*";
                first_var = false;
                os << (names ? names->name(i) : "x" + std::to_string(i));
                if ((*e)[i] > 1)
                    os << "^" << (*e)[i];
            }
        }
        return os.str();
    }

private:
    void check_compatible(const GradedPoly& other) const
    {
        if (nvars_ != other.nvars_)
            throw UsageError("polynomials over different generator sets");
        if (cap_ != other.cap_)
            throw UsageError("mismatched truncation caps: " + std::to_string(cap_) + " vs " +
                             std::to_string(other.cap_));
    }

    std::size_t nvars_ = 0;
    int cap_ = 0;
    Terms terms_;
};

inline GradedPoly poly_mul(const GradedPoly& a, const GradedPoly& b)
{
    return a * b;
}

/// Coefficient of the degree-0 monomial.
inline Rational unit_part(const GradedPoly& p)
{
    return p.constant_term();
}

/// Inverse of a polynomial with nonzero constant term, by geometric series
/// in its nilpotent part.
inline GradedPoly unit_inverse(const GradedPoly& a)
{
    const Rational c0 = a.constant_term();
    if (c0 == 0)
        throw NotUnitError();
    const Rational inv_c0 = Rational(1) / c0;
    GradedPoly nil = a - GradedPoly::constant(a.nvars(), a.cap(), c0);
    nil *= -inv_c0;
    GradedPoly result = GradedPoly::one(a.nvars(), a.cap());
    GradedPoly power = result;
    for (int k = 1; k <= a.cap() && !nil.is_zero(); ++k) {
        power = power * nil;
        if (power.is_zero())
            break;
        result += power;
    }
    return result * inv_c0;
}

/// exp(a) for a with zero constant term, truncated at a's cap.
inline GradedPoly exp_nilpotent(const GradedPoly& a)
{
    if (a.constant_term() != 0)
        throw UsageError("exp_nilpotent: constant term must be zero");
    GradedPoly result = GradedPoly::one(a.nvars(), a.cap());
    GradedPoly power = result;
    for (int m = 1; m <= a.cap(); ++m) {
        power = power * a;
        if (power.is_zero())
            break;
        power *= Rational(1, m);
        result += power;
    }
    return result;
}

/// Raised by divide_linear when (gi - gj) does not divide p.
class NotDivisibleError : public EngineError {
public:
    NotDivisibleError(std::size_t gi, std::size_t gj, GradedPoly remainder)
        : EngineError("not divisible by (x" + std::to_string(gi) + " - x" + std::to_string(gj) +
                      "): remainder " + remainder.to_string()),
          gi_(gi), gj_(gj), remainder_(std::move(remainder))
    {
    }

    std::size_t gi() const { return gi_; }
    std::size_t gj() const { return gj_; }
    const GradedPoly& remainder() const { return remainder_; }

private:
    std::size_t gi_, gj_;
    GradedPoly remainder_;
};

/// Exact quotient q = p / (gi - gj), returned at cap p.cap() - 1.
///
/// Synthetic division in gi: writing p = sum_k c_k gi^k with c_k free of gi,
/// Horner's scheme gives q_{k-1} = c_k + gj q_k and remainder c_0 + gj q_0,
/// which equals p with gi := gj.
inline GradedPoly divide_linear(const GradedPoly& p, std::size_t gi, std::size_t gj)
{
    if (gi >= p.nvars() || gj >= p.nvars() || gi == gj)
        throw UsageError("divide_linear: bad generator pair");
    if (p.cap() == 0)
        throw UsageError("divide_linear: cap 0 leaves no room for a quotient");

    const std::size_t n = p.nvars();
    const int cap = p.cap();
    int top = 0;
    for (const auto& [e, c] : p.terms())
        top = std::max<int>(top, e[gi]);

    std::vector<GradedPoly> coeff(static_cast<std::size_t>(top) + 1, GradedPoly(n, cap));
    for (const auto& [e, c] : p.terms()) {
        auto f = e;
        f[gi] = 0;
        coeff[e[gi]].add_term(std::move(f), c);
    }

    const GradedPoly xj = GradedPoly::variable(n, cap, gj);
    std::vector<GradedPoly> q(static_cast<std::size_t>(top), GradedPoly(n, cap));
    GradedPoly carry(n, cap);
    for (int k = top; k >= 1; --k) {
        carry = coeff[static_cast<std::size_t>(k)] + (k == top ? GradedPoly(n, cap) : xj * carry);
        q[static_cast<std::size_t>(k - 1)] = carry;
    }
    GradedPoly remainder = coeff[0] + (top == 0 ? GradedPoly(n, cap) : xj * carry);
    if (!remainder.is_zero())
        throw NotDivisibleError(gi, gj, std::move(remainder));

    GradedPoly quotient(n, cap - 1);
    for (std::size_t k = 0; k < q.size(); ++k) {
        for (const auto& [e, c] : q[k].terms()) {
            auto f = e;
            f[gi] = static_cast<std::uint16_t>(f[gi] + k);
            quotient.add_term(std::move(f), c);
        }
    }

    // The cap-1 quotient must reproduce p exactly at cap.
    GradedPoly factor = GradedPoly::variable(n, cap, gi) - GradedPoly::variable(n, cap, gj);
    if (factor * quotient.with_cap(cap) != p)
        throw NotDivisibleError(gi, gj, p - factor * quotient.with_cap(cap));
    return quotient;
}

/// Divides by prod over each block of (x_j - x_j') for j < j', one linear
/// factor at a time. The result's cap drops by deg omega.
inline GradedPoly vandermonde_divide(const GradedPoly& p,
                                     const std::vector<std::vector<std::size_t>>& blocks,
                                     std::size_t* divisions = nullptr)
{
    GradedPoly q = p;
    for (const auto& block : blocks) {
        for (std::size_t a = 0; a < block.size(); ++a) {
            for (std::size_t b = a + 1; b < block.size(); ++b) {
                q = divide_linear(q, block[a], block[b]);
                if (divisions)
                    ++*divisions;
            }
        }
    }
    return q;
}

} // namespace qperiod
