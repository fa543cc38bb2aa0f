#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <vector>

namespace hermite {

inline constexpr int max_dimension = 3;

/// α ∈ N^d.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    MultiIndex(std::initializer_list<int> entries);

    int dim() const noexcept { return static_cast<int>(entries_.size()); }
    int order() const noexcept;
    int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& entries() const noexcept { return entries_; }

    auto operator<=>(const MultiIndex&) const = default;

private:
    std::vector<int> entries_;
};

/// All α ∈ N^d with |α| ≤ N, in graded lexicographic order: by total order,
/// then lexicographically descending ((1,0) before (0,1)). Immutable and
/// shared between expansions of the same shape.
class IndexSet {
public:
    static std::shared_ptr<const IndexSet> get(int dim, int degree);

    IndexSet(int dim, int degree);

    int dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return indices_.size(); }
    const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

    /// Flat position of α, or size() if |α| > degree.
    std::size_t position(const MultiIndex& alpha) const;

    /// [shell_begin(k), shell_end(k)) holds exactly the α with |α| = k.
    std::size_t shell_begin(int k) const { return shell_offsets_[static_cast<std::size_t>(k)]; }
    std::size_t shell_end(int k) const { return shell_offsets_[static_cast<std::size_t>(k) + 1]; }

    /// Row-major offset of α inside the (degree+1)^d box.
    std::size_t box_offset(std::size_t flat) const { return box_offsets_[flat]; }
    std::size_t box_size() const noexcept { return box_lookup_.size(); }

private:
    int dim_;
    int degree_;
    std::vector<MultiIndex> indices_;
    std::vector<std::size_t> shell_offsets_;
    std::vector<std::size_t> box_offsets_;
    std::vector<std::size_t> box_lookup_; // box offset -> flat position or size()
};

/// Number of α ∈ N^d with |α| = k, i.e. C(k+d-1, d-1).
std::size_t eigenspace_dimension(int k, int dim);

} // namespace hermite
