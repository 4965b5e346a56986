#include "hinm/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hinm {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Duals {
    std::vector<double> u;  // per row
    std::vector<double> v;  // per column
    std::vector<std::size_t> column_for_row;
};

// Classic potentials formulation; rows and columns are 1-based inside the loop
// with index 0 as the virtual source.
Duals solve(const CostMatrix& a) {
    const std::size_t n = a.rows();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    Duals d;
    d.u.assign(u.begin() + 1, u.end());
    d.v.assign(v.begin() + 1, v.end());
    d.column_for_row.assign(n, kNone);
    for (std::size_t j = 1; j <= n; ++j) d.column_for_row[p[j] - 1] = j - 1;
    return d;
}

// Rewrites an optimal matching into the lexicographically smallest one that
// uses only tight edges (zero reduced cost), which is exactly the set of
// optimal matchings for the given duals.
class LexMinimizer {
public:
    LexMinimizer(const CostMatrix& a, const Duals& d, double eps)
        : n_(a.rows()), tight_(n_, n_, 0), col_(d.column_for_row), row_(n_, kNone) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                tight_(i, j) = a(i, j) - d.u[i] - d.v[j] <= eps ? 1 : 0;
            }
            row_[col_[i]] = i;
        }
    }

    std::vector<std::size_t> run() {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < col_[i]; ++j) {
                if (!tight_(i, j) || row_[j] < i) continue;
                if (reroute(i, j)) break;
            }
        }
        return col_;
    }

private:
    // Moves row i onto column j; the displaced row must reach i's old column
    // through an alternating path over unfixed rows.
    bool reroute(std::size_t i, std::size_t j) {
        target_ = col_[i];
        fixed_below_ = i;
        visited_.assign(n_, 0);
        path_.clear();
        visited_[j] = 1;
        if (!search(row_[j])) return false;
        // path_ holds (row, new column) pairs from the displaced row onward.
        for (auto [r, c] : path_) {
            col_[r] = c;
            row_[c] = r;
        }
        col_[i] = j;
        row_[j] = i;
        return true;
    }

    bool search(std::size_t r) {
        for (std::size_t c = 0; c < n_; ++c) {
            if (!tight_(r, c) || visited_[c]) continue;
            visited_[c] = 1;
            if (c == target_) {
                path_.emplace_back(r, c);
                return true;
            }
            const std::size_t owner = row_[c];
            if (owner <= fixed_below_) continue;
            path_.emplace_back(r, c);
            if (search(owner)) return true;
            path_.pop_back();
        }
        return false;
    }

    std::size_t n_;
    BoolMatrix tight_;
    std::vector<std::size_t> col_;
    std::vector<std::size_t> row_;
    std::vector<char> visited_;
    std::vector<std::pair<std::size_t, std::size_t>> path_;
    std::size_t target_ = 0;
    std::size_t fixed_below_ = 0;
};

}  // namespace

double assignment_total(const CostMatrix& costs, const std::vector<std::size_t>& column_for_row) {
    double total = 0.0;
    for (std::size_t i = 0; i < column_for_row.size(); ++i) total += costs(i, column_for_row[i]);
    return total;
}

Assignment hungarian(const CostMatrix& costs) {
    if (costs.rows() != costs.cols()) {
        throw ShapeMismatch("cost matrix must be square, got " + to_string(costs.shape()));
    }
    double scale = 1.0;
    for (double c : costs.values()) {
        if (!std::isfinite(c)) throw ValueError("cost matrix entries must be finite");
        scale = std::max(scale, std::abs(c));
    }
    if (costs.rows() == 0) return {};
    const Duals duals = solve(costs);
    const double eps = 1e-9 * scale * static_cast<double>(costs.rows());
    Assignment out;
    out.column_for_row = LexMinimizer(costs, duals, eps).run();
    out.total_cost = assignment_total(costs, out.column_for_row);
    return out;
}

}  // namespace hinm
