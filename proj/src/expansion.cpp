#include "hermite/expansion.hpp"

#include <cmath>

#include "hermite/errors.hpp"
#include "hermite/hermite_functions.hpp"
#include "tensor_ops.hpp"

namespace hermite {

HermiteExpansion::HermiteExpansion(int dim, int degree)
    : indices_(IndexSet::get(dim, degree)), coeffs_(indices_->size(), cdouble{}) {}

HermiteExpansion::HermiteExpansion(int dim, int degree, std::vector<cdouble> coeffs)
    : indices_(IndexSet::get(dim, degree)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != indices_->size())
        throw ValidationError("coefficient count does not match (dim, degree)");
}

HermiteExpansion HermiteExpansion::basis(const MultiIndex& alpha, int degree) {
    if (alpha.order() > degree)
        throw ValidationError("basis function order exceeds truncation degree");
    HermiteExpansion e(alpha.dim(), degree);
    e.set_coefficient(alpha, 1.0);
    return e;
}

cdouble HermiteExpansion::coefficient(const MultiIndex& alpha) const {
    const std::size_t pos = indices_->position(alpha);
    return pos < coeffs_.size() ? coeffs_[pos] : cdouble{};
}

void HermiteExpansion::set_coefficient(const MultiIndex& alpha, cdouble value) {
    const std::size_t pos = indices_->position(alpha);
    if (pos >= coeffs_.size())
        throw ValidationError("multi-index outside the truncation");
    coeffs_[pos] = value;
}

double HermiteExpansion::l2_norm() const {
    std::vector<double> sq(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        sq[i] = std::norm(coeffs_[i]);
    return std::sqrt(detail::pairwise_sum<double>(sq));
}

HermiteExpansion HermiteExpansion::with_degree(int degree) const {
    HermiteExpansion out(dim(), degree);
    const std::size_t common = std::min(out.size(), size());
    // grlex puts lower shells first, so the shared prefix is exactly the common shells.
    std::copy_n(coeffs_.begin(), common, out.coeffs_.begin());
    return out;
}

void HermiteExpansion::require_same_shape(const HermiteExpansion& other) const {
    if (other.indices_ != indices_ && (other.dim() != dim() || other.degree() != degree()))
        throw ValidationError("expansions have different (dim, degree)");
}

HermiteExpansion& HermiteExpansion::operator+=(const HermiteExpansion& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += other.coeffs_[i];
    return *this;
}

HermiteExpansion& HermiteExpansion::operator-=(const HermiteExpansion& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= other.coeffs_[i];
    return *this;
}

HermiteExpansion& HermiteExpansion::operator*=(cdouble scalar) {
    for (auto& c : coeffs_)
        c *= scalar;
    return *this;
}

bool HermiteExpansion::operator==(const HermiteExpansion& other) const {
    return dim() == other.dim() && degree() == other.degree() && coeffs_ == other.coeffs_;
}

namespace {

// table[m * n + i] = h_m(x_i), m ≤ degree
std::vector<double> hermite_table(int degree, std::span<const double> x) {
    const std::size_t rows = static_cast<std::size_t>(degree) + 1;
    std::vector<double> table(rows * x.size());
    std::vector<double> column(rows);
    for (std::size_t i = 0; i < x.size(); ++i) {
        hermite_eval_all(degree, x[i], column);
        for (std::size_t m = 0; m < rows; ++m)
            table[m * x.size() + i] = column[m];
    }
    return table;
}

std::size_t power(std::size_t base, int exp) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i)
        out *= base;
    return out;
}

} // namespace

HermiteExpansion analyze(std::span<const cdouble> samples, int dim, int degree, const QuadratureRule& rule) {
    if (rule.order() < degree + 1)
        throw ValidationError("quadrature order must be at least degree + 1");
    const std::size_t n = static_cast<std::size_t>(rule.order());
    if (samples.size() != power(n, dim))
        throw ValidationError("sample count does not match the tensor quadrature grid");

    if (dim == 1) {
        // Streams over nodes so high degrees never need the full table.
        std::vector<cdouble> acc(static_cast<std::size_t>(degree) + 1);
        std::vector<double> column(acc.size());
        for (std::size_t i = 0; i < n; ++i) {
            hermite_eval_all(degree, rule.nodes[i], column);
            const cdouble ws = rule.flat_weights[i] * samples[i];
            for (std::size_t m = 0; m < acc.size(); ++m)
                acc[m] += ws * column[m];
        }
        return HermiteExpansion(1, degree, std::move(acc));
    }

    // Weighted 1-D analysis matrix: A[m][i] = w̃_i h_m(x_i).
    auto matrix = hermite_table(degree, rule.nodes);
    for (std::size_t m = 0; m <= static_cast<std::size_t>(degree); ++m)
        for (std::size_t i = 0; i < n; ++i)
            matrix[m * n + i] *= rule.flat_weights[i];

    std::vector<std::size_t> shape(static_cast<std::size_t>(dim), n);
    std::vector<cdouble> box(samples.begin(), samples.end());
    for (std::size_t axis = 0; axis < shape.size(); ++axis)
        box = detail::contract_axis<cdouble, double>(box, shape, axis, matrix, static_cast<std::size_t>(degree) + 1);

    HermiteExpansion e(dim, degree);
    const auto& idx = e.indices();
    auto coeffs = e.coeffs();
    for (std::size_t flat = 0; flat < idx.size(); ++flat)
        coeffs[flat] = box[idx.box_offset(flat)];
    return e;
}

HermiteExpansion analyze(const GridFunction& f, int dim, int degree, const QuadratureRule& rule) {
    const auto points = tensor_points(rule.nodes, dim);
    const std::size_t count = points.size() / static_cast<std::size_t>(dim);
    std::vector<cdouble> samples(count);
    for (std::size_t p = 0; p < count; ++p)
        samples[p] = f(std::span<const double>(points.data() + p * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)));
    return analyze(samples, dim, degree, rule);
}

std::vector<cdouble> synthesize(const HermiteExpansion& e, std::span<const double> points) {
    const auto d = static_cast<std::size_t>(e.dim());
    if (points.size() % d != 0)
        throw ValidationError("point buffer is not a multiple of the dimension");
    const std::size_t count = points.size() / d;
    const std::size_t rows = static_cast<std::size_t>(e.degree()) + 1;
    const auto& idx = e.indices();
    std::vector<cdouble> out(count);
    std::vector<double> tables(d * rows);
    for (std::size_t p = 0; p < count; ++p) {
        for (std::size_t i = 0; i < d; ++i)
            hermite_eval_all(e.degree(), points[p * d + i], std::span<double>(tables.data() + i * rows, rows));
        cdouble acc{};
        for (std::size_t flat = 0; flat < idx.size(); ++flat) {
            double phi = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                phi *= tables[i * rows + static_cast<std::size_t>(idx[flat][static_cast<int>(i)])];
            acc += e.coeffs()[flat] * phi;
        }
        out[p] = acc;
    }
    return out;
}

std::vector<cdouble> synthesize_on_tensor_grid(const HermiteExpansion& e, std::span<const double> axis) {
    const std::size_t rows = static_cast<std::size_t>(e.degree()) + 1;
    const std::size_t n = axis.size();
    if (e.dim() == 1) {
        std::vector<cdouble> out(n);
        std::vector<double> column(rows);
        for (std::size_t i = 0; i < n; ++i) {
            hermite_eval_all(e.degree(), axis[i], column);
            cdouble acc{};
            for (std::size_t m = 0; m < rows; ++m)
                acc += e.coeffs()[m] * column[m];
            out[i] = acc;
        }
        return out;
    }
    // S[i][m] = h_m(x_i)
    const auto table = hermite_table(e.degree(), axis);
    std::vector<double> matrix(n * rows);
    for (std::size_t m = 0; m < rows; ++m)
        for (std::size_t i = 0; i < n; ++i)
            matrix[i * rows + m] = table[m * n + i];

    const auto& idx = e.indices();
    std::vector<cdouble> box(idx.box_size(), cdouble{});
    for (std::size_t flat = 0; flat < idx.size(); ++flat)
        box[idx.box_offset(flat)] = e.coeffs()[flat];

    std::vector<std::size_t> shape(static_cast<std::size_t>(e.dim()), rows);
    for (std::size_t a = 0; a < shape.size(); ++a)
        box = detail::contract_axis<cdouble, double>(box, shape, a, matrix, n);
    return box;
}

HermiteExpansion project(const HermiteExpansion& e, int k) {
    if (k < 0 || k > e.degree())
        throw ValidationError("projection index outside [0, N]");
    HermiteExpansion out(e.dim(), e.degree());
    const auto& idx = e.indices();
    for (std::size_t i = idx.shell_begin(k); i < idx.shell_end(k); ++i)
        out.coeffs()[i] = e.coeffs()[i];
    return out;
}

double shubin_norm(const HermiteExpansion& e, double s) {
    const auto& idx = e.indices();
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(e.degree()) + 1);
    for (int k = 0; k <= e.degree(); ++k) {
        double shell = 0.0;
        for (std::size_t i = idx.shell_begin(k); i < idx.shell_end(k); ++i)
            shell += std::norm(e.coeffs()[i]);
        terms.push_back(shell * std::pow(2.0 * k + e.dim(), s));
    }
    return std::sqrt(detail::pairwise_sum<double>(terms));
}

} // namespace hermite
