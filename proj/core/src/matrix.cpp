#include "hinm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hinm/permutation.hpp"

namespace hinm {

std::string to_string(Shape shape) {
    return std::to_string(shape.rows) + "x" + std::to_string(shape.cols);
}

void require_finite(const DenseMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!std::isfinite(m(r, c))) {
                throw FormatError("non-finite value at (" + std::to_string(r) + ", " +
                                  std::to_string(c) + ")");
            }
        }
    }
}

SaliencyMatrix::SaliencyMatrix(Matrix<double> scores) : scores_(std::move(scores)) {
    for (double s : scores_.values()) {
        if (!std::isfinite(s)) throw NegativeScore("saliency score is not finite");
        if (s < 0.0) throw NegativeScore("saliency score is negative: " + std::to_string(s));
    }
}

double SaliencyMatrix::total() const noexcept {
    const auto v = scores_.values();
    return std::accumulate(v.begin(), v.end(), 0.0);
}

SaliencyMatrix SaliencyMatrix::scaled(double factor) const {
    if (!(factor > 0.0)) throw ValueError("saliency scale factor must be positive");
    Matrix<double> out = scores_;
    for (double& s : out.values()) s *= factor;
    return SaliencyMatrix(std::move(out));
}

DenseMatrix permute_rows(const DenseMatrix& w, std::span<const std::size_t> order) {
    require_permutation(order, w.rows(), "row order");
    DenseMatrix out(w.rows(), w.cols());
    for (std::size_t p = 0; p < order.size(); ++p) {
        std::ranges::copy(w.row(order[p]), out.row(p).begin());
    }
    return out;
}

DenseMatrix permute_columns(const DenseMatrix& w, std::span<const std::size_t> order) {
    require_permutation(order, w.cols(), "column order");
    DenseMatrix out(w.rows(), w.cols());
    for (std::size_t r = 0; r < w.rows(); ++r) {
        for (std::size_t q = 0; q < order.size(); ++q) out(r, q) = w(r, order[q]);
    }
    return out;
}

double max_relative_error(const DenseMatrix& value, const DenseMatrix& reference) {
    if (value.shape() != reference.shape()) {
        throw ShapeMismatch("cannot compare " + to_string(value.shape()) + " with " +
                            to_string(reference.shape()));
    }
    double diff = 0.0;
    double scale = 0.0;
    const auto a = value.values();
    const auto b = reference.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(static_cast<double>(a[i]) - b[i]));
        scale = std::max(scale, std::abs(static_cast<double>(b[i])));
    }
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace hinm
