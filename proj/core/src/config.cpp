#include "hinm/config.hpp"

#include <cmath>
#include <string>

#include "hinm/errors.hpp"

namespace hinm {
namespace {

BigInt factorial(std::size_t n) {
    BigInt f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt power(const BigInt& base, std::size_t exp) {
    BigInt r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::vector<std::size_t> default_ocp_schedule(std::size_t vector_size, std::size_t iters) {
    std::vector<std::size_t> schedule;
    schedule.reserve(iters);
    for (std::size_t it = 0; it < iters; ++it) {
        const double k = std::round(static_cast<double>(vector_size) / 2.0 *
                                    std::pow(0.8, static_cast<double>(it)));
        schedule.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(k)));
    }
    return schedule;
}

std::size_t vector_keep_budget(std::size_t cols, Rational vector_sparsity, std::size_t group) {
    const Rational kept = Rational(static_cast<std::int64_t>(cols)) * (Rational(1) - vector_sparsity);
    if (kept.den() != 1) {
        throw BudgetError("n*(1-s_v) = " + kept.str() + " is not an integer for n=" +
                          std::to_string(cols));
    }
    const auto k = static_cast<std::size_t>(kept.num());
    if (group == 0 || k % group != 0) {
        throw BudgetError("per-tile vector budget " + std::to_string(k) +
                          " is not a multiple of M=" + std::to_string(group));
    }
    return k;
}

ValidatedConfig validate_config(const HiNMConfig& cfg, Shape shape) {
    if (cfg.nm_group < 1 || cfg.nm_keep < 1) throw ValueError("N and M must be >= 1");
    const bool vector_only = cfg.nm_keep == 1 && cfg.nm_group == 1;
    if (cfg.nm_keep >= cfg.nm_group && !vector_only) {
        throw ValueError("N must be < M (got " + std::to_string(cfg.nm_keep) + ":" +
                         std::to_string(cfg.nm_group) + ")");
    }
    if (!(cfg.vector_sparsity >= 0.0 && cfg.vector_sparsity < 1.0)) {
        throw ValueError("vector_sparsity must lie in [0, 1)");
    }
    if (cfg.vector_size < 1) throw ValueError("vector_size must be >= 1");
    if (cfg.tile_rows != 0 && cfg.tile_rows != cfg.vector_size) {
        throw ValueError("tile_rows must equal vector_size");
    }
    for (std::size_t k : cfg.ocp_sample_schedule) {
        if (k < 1 || k > cfg.vector_size) {
            throw ValueError("ocp_sample_schedule entries must lie in [1, V]");
        }
    }
    if (shape.rows < 1 || shape.cols < 1) throw DimensionError("empty weight shape");
    if (shape.rows % cfg.vector_size != 0) {
        throw DimensionError("m=" + std::to_string(shape.rows) +
                             " is not divisible by V=" + std::to_string(cfg.vector_size));
    }

    ValidatedConfig v;
    v.config = cfg;
    v.config.tile_rows = cfg.vector_size;
    v.shape = shape;
    v.vector_sparsity = Rational::from_double(cfg.vector_sparsity);
    v.vectors_kept = vector_keep_budget(shape.cols, v.vector_sparsity, cfg.nm_group);
    v.groups_per_tile = v.vectors_kept / cfg.nm_group;
    v.output_partitions = shape.rows / cfg.vector_size;
    v.tiles = shape.rows / v.config.tile_rows;
    if (cfg.ocp_sample_schedule.empty()) {
        v.ocp_schedule = default_ocp_schedule(cfg.vector_size, cfg.ocp_max_iters);
    } else {
        v.ocp_schedule = cfg.ocp_sample_schedule;
        v.ocp_schedule.resize(cfg.ocp_max_iters, cfg.ocp_sample_schedule.back());
    }
    return v;
}

Rational composed_sparsity(Rational vector_sparsity, std::size_t keep, std::size_t group) {
    if (group < 1 || keep < 1 || keep > group) throw ValueError("need 1 <= N <= M");
    if (vector_sparsity < Rational(0) || vector_sparsity >= Rational(1)) {
        throw ValueError("vector_sparsity must lie in [0, 1)");
    }
    return Rational(1) - (Rational(1) - vector_sparsity) *
                             Rational(static_cast<std::int64_t>(keep),
                                      static_cast<std::int64_t>(group));
}

Rational composed_sparsity(double vector_sparsity, std::size_t keep, std::size_t group) {
    if (!(vector_sparsity >= 0.0 && vector_sparsity < 1.0)) {
        throw ValueError("vector_sparsity must lie in [0, 1)");
    }
    return composed_sparsity(Rational::from_double(vector_sparsity), keep, group);
}

BigInt count_balanced_groupings(std::size_t items, std::size_t group_size) {
    if (group_size == 0 || items % group_size != 0) {
        throw DimensionError(std::to_string(items) + " items cannot form groups of " +
                             std::to_string(group_size));
    }
    const std::size_t groups = items / group_size;
    return factorial(items) / (power(factorial(group_size), groups) * factorial(groups));
}

BigInt count_permutation_space(std::size_t rows, std::size_t cols, std::size_t vector_size,
                               std::size_t group) {
    const BigInt output_term = count_balanced_groupings(rows, vector_size);
    const BigInt input_term = count_balanced_groupings(cols, group);
    const std::size_t tiles = rows / vector_size;
    return output_term * tiles * input_term;
}

std::string with_thousands_separators(const BigInt& value) {
    const std::string digits = value.str();
    std::string out;
    std::size_t lead = digits.size() % 3;
    if (lead == 0) lead = 3;
    out.append(digits, 0, lead);
    for (std::size_t i = lead; i < digits.size(); i += 3) {
        out.push_back(',');
        out.append(digits, i, 3);
    }
    return out;
}

}  // namespace hinm
