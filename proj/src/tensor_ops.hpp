#pragma once

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

namespace hermite::detail {

/// Contracts axis `axis` of a row-major tensor with a dense row-major matrix
/// of shape rows × shape[axis]:
///   out[..., r, ...] = Σ_m matrix[r][m] · in[..., m, ...]
/// `shape` is updated in place (shape[axis] becomes rows).
template <typename T, typename M>
std::vector<T> contract_axis(std::span<const T> in, std::vector<std::size_t>& shape, std::size_t axis,
                             std::span<const M> matrix, std::size_t rows) {
    std::size_t pre = 1, post = 1;
    for (std::size_t i = 0; i < axis; ++i)
        pre *= shape[i];
    for (std::size_t i = axis + 1; i < shape.size(); ++i)
        post *= shape[i];
    const std::size_t mid = shape[axis];

    std::vector<T> out(pre * rows * post, T{});
    if constexpr (std::is_same_v<T, M>) {
        using RowMajor = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        const auto r_ = static_cast<Eigen::Index>(rows), m_ = static_cast<Eigen::Index>(mid),
                   q_ = static_cast<Eigen::Index>(post);
        const Eigen::Map<const RowMajor> a(matrix.data(), r_, m_);
        for (std::size_t p = 0; p < pre; ++p) {
            const Eigen::Map<const RowMajor> b(in.data() + p * mid * post, m_, q_);
            Eigen::Map<RowMajor> c(out.data() + p * rows * post, r_, q_);
            c.noalias() = a * b;
        }
        shape[axis] = rows;
        return out;
    }
    for (std::size_t p = 0; p < pre; ++p) {
        const T* src = in.data() + p * mid * post;
        T* dst = out.data() + p * rows * post;
        for (std::size_t r = 0; r < rows; ++r) {
            T* row = dst + r * post;
            const M* coeffs = matrix.data() + r * mid;
            for (std::size_t m = 0; m < mid; ++m) {
                const M c = coeffs[m];
                if (c == M{})
                    continue;
                const T* col = src + m * post;
                for (std::size_t q = 0; q < post; ++q)
                    row[q] += c * col[q];
            }
        }
    }
    shape[axis] = rows;
    return out;
}

/// Pairwise (cascade) summation: deterministic and with O(log n) error growth.
template <typename T>
T pairwise_sum(std::span<const T> values) {
    if (values.size() <= 16) {
        T acc{};
        for (const T& v : values)
            acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace hermite::detail
