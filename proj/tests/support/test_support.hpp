#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// library's search or selection code, so it can check it independently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hinm/matrix.hpp"
#include "hinm/rng.hpp"

namespace hinm::testing {

/// Nonzero values ±k/256 with 1 <= k <= 4096: exact in binary32, and sums of
/// their magnitudes are exact in double, so retention comparisons are exact.
inline DenseMatrix random_dyadic_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix m(rows, cols);
    for (float& v : m.values()) {
        const float k = static_cast<float>(rng.index(4096) + 1) / 256.0f;
        v = rng.index(2) == 0 ? k : -k;
    }
    return m;
}

/// General floats in [-1, 1).
inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix m(rows, cols);
    for (float& v : m.values()) v = static_cast<float>(2.0 * rng.unit() - 1.0);
    return m;
}

inline SaliencyMatrix saliency_from_rows(const std::vector<std::vector<double>>& rows) {
    return SaliencyMatrix(Matrix<double>::from_rows(rows));
}

inline SaliencyMatrix abs_scores(const DenseMatrix& w) {
    Matrix<double> s(w.rows(), w.cols());
    for (std::size_t r = 0; r < w.rows(); ++r)
        for (std::size_t c = 0; c < w.cols(); ++c) s(r, c) = std::fabs(static_cast<double>(w(r, c)));
    return SaliencyMatrix(std::move(s));
}

/// Minimum total over all n! assignments; `best` receives the
/// lexicographically smallest minimizer.
inline double brute_force_assignment(const Matrix<double>& c, std::vector<std::size_t>* best = nullptr) {
    std::vector<std::size_t> p(c.rows());
    std::iota(p.begin(), p.end(), std::size_t{0});
    double best_total = std::numeric_limits<double>::infinity();
    do {
        double t = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) t += c(i, p[i]);
        if (t < best_total - 1e-9) {
            best_total = t;
            if (best) *best = p;
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return best_total;
}

/// Best sum of `keep` values by enumerating every subset.
inline double brute_force_top(const std::vector<double>& values, std::size_t keep) {
    double best = -1.0;
    const std::size_t n = values.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != keep) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) s += values[i];
        best = std::max(best, s);
    }
    return best;
}

/// Column-vector pruning retention of one row group, by sorting.
inline double sort_vector_retention(const SaliencyMatrix& s, const std::vector<std::size_t>& rows,
                                    std::size_t keep) {
    std::vector<double> scores(s.cols(), 0.0);
    for (std::size_t c = 0; c < s.cols(); ++c)
        for (std::size_t r : rows) scores[c] += s(r, c);
    std::sort(scores.begin(), scores.end(), std::greater<>());
    return std::accumulate(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(keep), 0.0);
}

/// Best vector retention over all m! row orders chunked into groups of V.
inline double brute_force_ocp(const SaliencyMatrix& s, std::size_t V, std::size_t keep) {
    std::vector<std::size_t> p(s.rows());
    std::iota(p.begin(), p.end(), std::size_t{0});
    double best = -1.0;
    do {
        double total = 0.0;
        for (std::size_t t = 0; t < p.size(); t += V) {
            total += sort_vector_retention(s, {p.begin() + t, p.begin() + t + V}, keep);
        }
        best = std::max(best, total);
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

/// Best N:M retention over all orders of `cols` (chunked into groups of M).
inline double brute_force_icp(const SaliencyMatrix& s, const std::vector<std::size_t>& rows,
                              std::vector<std::size_t> cols, std::size_t N, std::size_t M) {
    std::sort(cols.begin(), cols.end());
    double best = -1.0;
    do {
        double total = 0.0;
        for (std::size_t r : rows) {
            for (std::size_t g = 0; g < cols.size(); g += M) {
                std::vector<double> v;
                for (std::size_t p = 0; p < M; ++p) v.push_back(s(r, cols[g + p]));
                total += brute_force_top(v, N);
            }
        }
        best = std::max(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

inline DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += static_cast<double>(a(i, k)) * b(k, j);
            out(i, j) = static_cast<float>(acc);
        }
    return out;
}

inline std::size_t count_zeros(const DenseMatrix& m) {
    return static_cast<std::size_t>(std::count(m.values().begin(), m.values().end(), 0.0f));
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("hinm_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace hinm::testing
