#include "hermite/multi_index.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "hermite/errors.hpp"

namespace hermite {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_)
        if (e < 0)
            throw ValidationError("multi-index entries must be non-negative");
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

int MultiIndex::order() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), 0);
}

namespace {

// Appends every α with |α| = total, first entry descending.
void enumerate_shell(int dim, int total, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
    if (static_cast<int>(prefix.size()) == dim - 1) {
        prefix.push_back(total);
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int first = total; first >= 0; --first) {
        prefix.push_back(first);
        enumerate_shell(dim, total - first, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

IndexSet::IndexSet(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1 || dim > max_dimension)
        throw ValidationError("dimension must be in [1, 3]");
    if (degree < 0)
        throw ValidationError("truncation degree must be non-negative");

    shell_offsets_.push_back(0);
    std::vector<int> prefix;
    for (int k = 0; k <= degree; ++k) {
        enumerate_shell(dim, k, prefix, indices_);
        shell_offsets_.push_back(indices_.size());
    }

    const std::size_t side = static_cast<std::size_t>(degree) + 1;
    std::size_t box = 1;
    for (int i = 0; i < dim; ++i)
        box *= side;
    box_lookup_.assign(box, indices_.size());
    box_offsets_.resize(indices_.size());
    for (std::size_t flat = 0; flat < indices_.size(); ++flat) {
        std::size_t offset = 0;
        for (int i = 0; i < dim; ++i)
            offset = offset * side + static_cast<std::size_t>(indices_[flat][i]);
        box_offsets_[flat] = offset;
        box_lookup_[offset] = flat;
    }
}

std::shared_ptr<const IndexSet> IndexSet::get(int dim, int degree) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const IndexSet>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, degree}];
    if (!slot)
        slot = std::make_shared<const IndexSet>(dim, degree);
    return slot;
}

std::size_t IndexSet::position(const MultiIndex& alpha) const {
    if (alpha.dim() != dim_)
        throw ValidationError("multi-index dimension does not match index set");
    if (alpha.order() > degree_)
        return indices_.size();
    const std::size_t side = static_cast<std::size_t>(degree_) + 1;
    std::size_t offset = 0;
    for (int i = 0; i < dim_; ++i)
        offset = offset * side + static_cast<std::size_t>(alpha[i]);
    return box_lookup_[offset];
}

std::size_t eigenspace_dimension(int k, int dim) {
    // C(k + dim - 1, dim - 1)
    std::size_t num = 1, den = 1;
    for (int i = 1; i < dim; ++i) {
        num *= static_cast<std::size_t>(k + i);
        den *= static_cast<std::size_t>(i);
    }
    return num / den;
}

} // namespace hermite
