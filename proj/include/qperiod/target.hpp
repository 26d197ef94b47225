#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperiod/errors.hpp"
#include "qperiod/graded_poly.hpp"

namespace qperiod {

/// P^N blown up along the complete intersection of hypersurfaces of the
/// given degrees.
struct BlowUpSpec {
    int base_dim = 0;
    std::vector<int> center_degrees;
};

/// Flag bundle Fl(r_1 < ... < r_l; E) over P^N with E = sum_j O(a_j).
struct FlagTarget {
    int base_dim = 0;
    std::vector<int> e_degrees;
    std::vector<int> ranks;

    int rank() const { return static_cast<int>(e_degrees.size()); }
    std::size_t flag_length() const { return ranks.size(); }

    /// Total number of Chern-root slots R = sum_i r_i.
    int root_count() const
    {
        int R = 0;
        for (int r : ranks)
            R += r;
        return R;
    }

    GeneratorSet generators() const { return GeneratorSet(ranks); }

    /// First root slot of block i within a flat lattice point.
    std::size_t block_offset(std::size_t i) const
    {
        std::size_t off = 0;
        for (std::size_t b = 0; b < i; ++b)
            off += static_cast<std::size_t>(ranks[b]);
        return off;
    }

    void validate() const
    {
        if (base_dim < 1)
            throw UsageError("base dimension must be at least 1");
        if (ranks.empty())
            throw UsageError("flag target needs at least one rank");
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            if (ranks[i] < 1)
                throw UsageError("flag ranks must be positive");
            if (i > 0 && ranks[i] <= ranks[i - 1])
                throw UsageError("flag ranks must be strictly increasing");
        }
        if (ranks.back() >= rank())
            throw UsageError("largest flag rank must be below rank E");
    }

    friend bool operator==(const FlagTarget&, const FlagTarget&) = default;
};

/// F = sum_s L_{f_s} (x) pi^* O(rho), each f_s a weight over the R root slots.
struct TwistSpec {
    std::vector<std::vector<int>> weight_vectors;
    int rho = 0;

    /// S_top^dual (x) O(rho): one standard basis vector per root of the top block.
    static TwistSpec standard(const FlagTarget& t, int rho)
    {
        TwistSpec tw;
        tw.rho = rho;
        const auto R = static_cast<std::size_t>(t.root_count());
        const auto top = t.block_offset(t.flag_length() - 1);
        for (int s = 0; s < t.ranks.back(); ++s) {
            std::vector<int> f(R, 0);
            f[top + static_cast<std::size_t>(s)] = 1;
            tw.weight_vectors.push_back(std::move(f));
        }
        return tw;
    }

    friend bool operator==(const TwistSpec&, const TwistSpec&) = default;
};

/// (D; k_1..k_l): D pairs with H, k_i with c_1(S_i^dual).
struct CurveClass {
    long D = 0;
    std::vector<long> k;

    friend auto operator<=>(const CurveClass&, const CurveClass&) = default;
    friend bool operator==(const CurveClass&, const CurveClass&) = default;

    std::string to_string() const
    {
        std::string s = "(" + std::to_string(D);
        for (long ki : k)
            s += "," + std::to_string(ki);
        return s + ")";
    }
};

/// a*H + sum_i b_i det S_i^dual.
struct DivisorData {
    long a = 0;
    std::vector<long> b;

    friend bool operator==(const DivisorData&, const DivisorData&) = default;

    std::string to_string() const
    {
        std::string s = std::to_string(a) + "H";
        for (std::size_t i = 0; i < b.size(); ++i) {
            s += (b[i] < 0 ? " - " : " + ") + std::to_string(b[i] < 0 ? -b[i] : b[i]) + "det";
            if (b.size() > 1)
                s += std::to_string(i + 1);
        }
        return s;
    }
};

/// Flat integer vector d_{i,j}, block-major, one entry per root slot.
using LatticePoint = std::vector<long>;

/// Gr(r, E^dual (x) O(k)) with r = #degrees - 1: a_j = k - c_j, twist S^dual (x) O(k).
inline std::pair<FlagTarget, TwistSpec> normalize_blowup(const BlowUpSpec& spec,
                                                         std::optional<int> twist_k = std::nullopt)
{
    const auto& c = spec.center_degrees;
    if (c.size() < 2)
        throw UsageError("blow-up center needs at least two hypersurface degrees");
    for (int cj : c)
        if (cj < 1)
            throw UsageError("hypersurface degrees must be positive");
    if (static_cast<int>(c.size()) > spec.base_dim)
        throw UsageError("center codimension exceeds ambient dimension");

    const int k = twist_k.value_or(*std::min_element(c.begin(), c.end()));
    FlagTarget t;
    t.base_dim = spec.base_dim;
    for (int cj : c)
        t.e_degrees.push_back(k - cj);
    t.ranks = {static_cast<int>(c.size()) - 1};
    return {t, TwistSpec::standard(t, k)};
}

struct Anticanonical {
    DivisorData ambient;
    DivisorData zero_locus;
};

/// -K of Gr(r, E) and of the zero locus of F, by adjunction. Grassmann case only.
inline Anticanonical anticanonical(const FlagTarget& t, const TwistSpec& tw)
{
    t.validate();
    if (t.flag_length() != 1)
        throw UsageError("closed anticanonical formula needs a Grassmann bundle (one rank)");
    const long r = t.ranks[0];
    long sum_a = 0;
    for (int a : t.e_degrees)
        sum_a += a;

    Anticanonical out;
    out.ambient = DivisorData{t.base_dim + 1 + r * sum_a, {static_cast<long>(t.rank())}};

    const auto R = static_cast<std::size_t>(t.root_count());
    std::vector<long> total(R, 0);
    for (const auto& f : tw.weight_vectors) {
        if (f.size() != R)
            throw UsageError("twist weight vector has wrong length");
        for (std::size_t i = 0; i < R; ++i)
            total[i] += f[i];
    }
    for (std::size_t i = 1; i < R; ++i)
        if (total[i] != total[0])
            throw UsageError("c1(F) is not a multiple of det S^dual");
    const long det_coeff = R == 0 ? 0 : total[0];
    const long h_coeff = static_cast<long>(tw.weight_vectors.size()) * tw.rho;
    out.zero_locus = DivisorData{out.ambient.a - h_coeff, {out.ambient.b[0] - det_coeff}};
    return out;
}

/// Lower bound d_{l+1,*} >= -D * max_j a_j shared by every block.
inline long lattice_floor(const FlagTarget& t, long D)
{
    const int top = *std::max_element(t.e_degrees.begin(), t.e_degrees.end());
    return -D * top;
}

/// Which set of curve classes an x-degree sums over. Lattice admits every
/// class with a lattice point; MoriCone keeps only k >= -D * (sum of the r
/// largest a_j), the effective classes of a Grassmann bundle.
enum class ClassRange { Lattice, MoriCone };

/// Per-block slope kappa_i with k_i >= kappa_i * D.
inline std::vector<long> class_slopes(const FlagTarget& t, ClassRange range)
{
    std::vector<long> slopes;
    const long top = *std::max_element(t.e_degrees.begin(), t.e_degrees.end());
    if (range == ClassRange::MoriCone) {
        if (t.flag_length() != 1)
            throw UsageError("Mori-cone class range needs a Grassmann bundle");
        auto a = t.e_degrees;
        std::sort(a.begin(), a.end(), std::greater<>());
        long s = 0;
        for (int j = 0; j < t.ranks[0]; ++j)
            s += a[static_cast<std::size_t>(j)];
        slopes.push_back(-s);
        return slopes;
    }
    for (int r : t.ranks)
        slopes.push_back(-static_cast<long>(r) * top);
    return slopes;
}

namespace detail {

inline void enumerate_k(const std::vector<long>& b, const std::vector<long>& lows, std::size_t i,
                        long remaining, std::vector<long>& k, std::vector<std::vector<long>>& out)
{
    if (i == b.size()) {
        if (remaining == 0)
            out.push_back(k);
        return;
    }
    long rest_min = 0;
    for (std::size_t j = i + 1; j < b.size(); ++j)
        rest_min += b[j] * lows[j];
    for (long ki = lows[i]; b[i] * ki + rest_min <= remaining; ++ki) {
        k[i] = ki;
        enumerate_k(b, lows, i + 1, remaining - b[i] * ki, k, out);
    }
}

} // namespace detail

/// Every (D, k) with a*D + sum b_i k_i == x_deg, D >= 0 and k_i inside the
/// chosen class range. Sorted by (D, k).
inline std::vector<CurveClass> class_enumeration(const FlagTarget& t, const DivisorData& grading,
                                                 long x_deg,
                                                 ClassRange range = ClassRange::Lattice)
{
    t.validate();
    if (grading.b.size() != t.flag_length())
        throw UsageError("grading has wrong number of det coefficients");
    const auto slopes = class_slopes(t, range);
    long slope = grading.a;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (grading.b[i] <= 0)
            throw NonFanoError("grading " + grading.to_string() +
                               " leaves infinitely many classes per x-degree");
        slope += grading.b[i] * slopes[i];
    }
    if (slope <= 0)
        throw NonFanoError("grading " + grading.to_string() +
                           " is not positive on the class range");

    std::vector<CurveClass> out;
    if (x_deg < 0)
        return out;
    for (long D = 0; slope * D <= x_deg; ++D) {
        std::vector<long> lows;
        for (long s : slopes)
            lows.push_back(s * D);
        std::vector<long> k(lows.size());
        std::vector<std::vector<long>> ks;
        detail::enumerate_k(grading.b, lows, 0, x_deg - grading.a * D, k, ks);
        for (auto& kv : ks)
            out.push_back(CurveClass{D, std::move(kv)});
    }
    return out;
}

inline std::vector<CurveClass> class_enumeration(const FlagTarget& t, const TwistSpec& tw,
                                                 long x_deg)
{
    return class_enumeration(t, anticanonical(t, tw).zero_locus, x_deg);
}

/// Classes of x-degree 1, the support of the C(t) correction.
inline std::vector<CurveClass> fano_index_classes(const FlagTarget& t, const DivisorData& grading,
                                                  ClassRange range = ClassRange::Lattice)
{
    return class_enumeration(t, grading, 1, range);
}

inline std::vector<CurveClass> fano_index_classes(const FlagTarget& t, const TwistSpec& tw)
{
    return class_enumeration(t, tw, 1);
}

/// Lazy range over the lattice points refining a class: per block the
/// entries sum to k_i, and d_{i,j} >= min_j' d_{i+1,j'}, the top block
/// being bounded by lattice_floor.
class LatticeRange {
public:
    LatticeRange(const FlagTarget& t, const CurveClass& c)
    {
        t.validate();
        if (c.k.size() != t.flag_length())
            throw UsageError("curve class has wrong number of k entries");
        for (std::size_t i = 0; i < t.flag_length(); ++i) {
            offsets_.push_back(t.block_offset(i));
            sizes_.push_back(static_cast<std::size_t>(t.ranks[i]));
        }
        k_ = c.k;
        top_floor_ = lattice_floor(t, c.D);
        excess_.resize(sizes_.size());
        floors_.resize(sizes_.size());
        point_.assign(static_cast<std::size_t>(t.root_count()), 0);
    }

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = LatticePoint;
        using difference_type = std::ptrdiff_t;
        using pointer = const LatticePoint*;
        using reference = const LatticePoint&;

        iterator() = default;
        explicit iterator(LatticeRange* owner) : owner_(owner)
        {
            if (!owner_->first())
                owner_ = nullptr;
        }

        reference operator*() const { return owner_->point_; }
        pointer operator->() const { return &owner_->point_; }

        iterator& operator++()
        {
            if (!owner_->step())
                owner_ = nullptr;
            return *this;
        }
        void operator++(int) { ++*this; }

        friend bool operator==(const iterator& a, const iterator& b) { return a.owner_ == b.owner_; }

    private:
        LatticeRange* owner_ = nullptr;
    };

    /// Single pass: begin() restarts the enumeration.
    iterator begin() { return iterator(this); }
    iterator end() { return iterator(); }

    std::vector<LatticePoint> collect()
    {
        std::vector<LatticePoint> out;
        for (const auto& p : *this)
            out.push_back(p);
        return out;
    }

private:
    // Sets block b to its first composition; false if its floor leaves none.
    bool reset_block(std::size_t b)
    {
        long fl = top_floor_;
        if (b + 1 < sizes_.size()) {
            const auto off = offsets_[b + 1];
            fl = *std::min_element(point_.begin() + static_cast<std::ptrdiff_t>(off),
                                   point_.begin() + static_cast<std::ptrdiff_t>(off + sizes_[b + 1]));
        }
        const long total = k_[b] - static_cast<long>(sizes_[b]) * fl;
        if (total < 0)
            return false;
        floors_[b] = fl;
        auto& e = excess_[b];
        e.assign(sizes_[b], 0);
        e.back() = total;
        write_block(b);
        return true;
    }

    // Blocks below b, from b-1 down to 0.
    bool reset_below(std::size_t b)
    {
        for (std::size_t i = b; i-- > 0;)
            if (!reset_block(i))
                return false;
        return true;
    }

    // Next weak composition in lex order of the excess vector.
    bool next_composition(std::size_t b)
    {
        auto& e = excess_[b];
        const std::size_t r = e.size();
        if (r < 2)
            return false;
        long tail = 0;
        for (std::size_t i = r - 1; i-- > 0;) {
            tail += e[i + 1];
            if (tail > 0) {
                ++e[i];
                for (std::size_t j = i + 1; j + 1 < r; ++j)
                    e[j] = 0;
                e[r - 1] = tail - 1;
                write_block(b);
                return true;
            }
        }
        return false;
    }

    void write_block(std::size_t b)
    {
        for (std::size_t j = 0; j < sizes_[b]; ++j)
            point_[offsets_[b] + j] = floors_[b] + excess_[b][j];
    }

    bool advance_block(std::size_t b)
    {
        while (next_composition(b))
            if (reset_below(b))
                return true;
        return false;
    }

    bool first() { return reset_below(sizes_.size()) || step(); }

    bool step()
    {
        for (std::size_t b = 0; b < sizes_.size(); ++b)
            if (advance_block(b))
                return true;
        return false;
    }

    std::vector<std::size_t> offsets_, sizes_;
    std::vector<long> k_, floors_;
    long top_floor_ = 0;
    std::vector<std::vector<long>> excess_;
    LatticePoint point_;
};

inline LatticeRange lattice_range(const FlagTarget& t, const CurveClass& c)
{
    return LatticeRange(t, c);
}

/// Number of lattice points of a Grassmann-type class (chain floors ignored
/// for l > 1, where it is an upper bound).
inline Integer lattice_count_estimate(const FlagTarget& t, const CurveClass& c)
{
    const long fl = lattice_floor(t, c.D);
    Integer count = 1;
    for (std::size_t i = 0; i < t.flag_length(); ++i) {
        const long r = t.ranks[i];
        const long total = c.k[i] - r * fl;
        if (total < 0)
            return 0;
        count *= binomial(static_cast<unsigned long>(total + r - 1),
                          static_cast<unsigned long>(r - 1));
    }
    return count;
}

} // namespace qperiod
