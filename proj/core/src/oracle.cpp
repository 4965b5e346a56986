#include "hinm/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "hinm/selection.hpp"

namespace hinm {
namespace {

void guard(const BigInt& count, std::uint64_t limit, const char* what) {
    if (count > BigInt(limit)) {
        throw SizeGuard(std::string(what) + ": " + count.str() +
                        " groupings exceed the enumeration limit of " + std::to_string(limit));
    }
}

void enumerate(std::vector<std::size_t>& remaining, std::size_t group_size, Grouping& current,
               const std::function<void(const Grouping&)>& visit) {
    if (remaining.empty()) {
        visit(current);
        return;
    }
    // The first remaining item anchors the next group; choose its partners.
    const std::size_t anchor = remaining.front();
    const std::vector<std::size_t> rest(remaining.begin() + 1, remaining.end());
    std::vector<std::size_t> pick(group_size - 1);
    std::vector<std::size_t> idx(group_size - 1);
    for (std::size_t i = 0; i + 1 < group_size; ++i) idx[i] = i;

    while (true) {
        std::vector<std::size_t> group{anchor};
        std::vector<char> used(rest.size(), 0);
        for (std::size_t i : idx) {
            group.push_back(rest[i]);
            used[i] = 1;
        }
        std::vector<std::size_t> next_remaining;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            if (!used[i]) next_remaining.push_back(rest[i]);
        }
        current.push_back(std::move(group));
        enumerate(next_remaining, group_size, current, visit);
        current.pop_back();

        // next combination of group_size-1 indices out of rest.size()
        std::size_t i = idx.size();
        while (i > 0 && idx[i - 1] == rest.size() - idx.size() + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
    }
}

double best_icp_value(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                      std::span<const std::size_t> survivors, std::size_t N, std::size_t M,
                      Grouping* witness) {
    double best = -1.0;
    for_each_balanced_grouping(survivors, M, [&](const Grouping& g) {
        std::vector<std::size_t> order;
        for (const auto& group : g) order.insert(order.end(), group.begin(), group.end());
        const double v = tile_nm_retained(s, rows, order, N, M);
        if (v > best) {
            best = v;
            if (witness) *witness = g;
        }
    });
    return best;
}

}  // namespace

void for_each_balanced_grouping(std::span<const std::size_t> items, std::size_t group_size,
                                const std::function<void(const Grouping&)>& visit) {
    if (group_size == 0 || items.size() % group_size != 0) {
        throw GroupingError(std::to_string(items.size()) + " items cannot form groups of " +
                            std::to_string(group_size));
    }
    std::vector<std::size_t> remaining(items.begin(), items.end());
    Grouping current;
    enumerate(remaining, group_size, current, visit);
}

GroupingOptimum exhaustive_ocp(const SaliencyMatrix& s, const ValidatedConfig& cfg,
                               std::uint64_t limit) {
    guard(count_balanced_groupings(s.rows(), cfg.V()), limit, "output-channel groupings");
    const Permutation channels = identity_permutation(s.rows());
    GroupingOptimum best{-1.0, {}};
    for_each_balanced_grouping(channels, cfg.V(), [&](const Grouping& g) {
        double kept = 0.0;
        for (const auto& tile : g) kept += top_k_sum(column_vector_scores(s, tile), cfg.vectors_kept);
        if (kept > best.retained) best = {kept, g};
    });
    return best;
}

GroupingOptimum exhaustive_icp(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                               std::span<const std::size_t> survivors, const ValidatedConfig& cfg,
                               std::uint64_t limit) {
    if (survivors.size() % cfg.M() != 0) {
        throw GroupingError("survivor count is not a multiple of M");
    }
    guard(count_balanced_groupings(survivors.size(), cfg.M()), limit, "survivor groupings");
    GroupingOptimum best;
    best.retained = best_icp_value(s, rows, survivors, cfg.N(), cfg.M(), &best.grouping);
    return best;
}

OracleReport oracle_gap(const SaliencyMatrix& s, const ValidatedConfig& cfg, std::uint64_t limit) {
    const BigInt outer = count_balanced_groupings(s.rows(), cfg.V());
    const BigInt inner = count_balanced_groupings(cfg.vectors_kept, cfg.M());
    guard(outer * inner, limit, "pipeline search space");

    OracleReport report;
    const Permutation channels = identity_permutation(s.rows());
    std::map<std::vector<std::size_t>, double> tile_best;
    report.oracle = -1.0;
    for_each_balanced_grouping(channels, cfg.V(), [&](const Grouping& g) {
        double kept = 0.0;
        for (const auto& tile : g) {
            auto it = tile_best.find(tile);
            if (it == tile_best.end()) {
                const auto scores = column_vector_scores(s, tile);
                const auto survivors = top_k_positions(scores, cfg.vectors_kept);
                it = tile_best.emplace(tile, best_icp_value(s, tile, survivors, cfg.N(), cfg.M(), nullptr))
                         .first;
            }
            kept += it->second;
        }
        if (kept > report.oracle) {
            report.oracle = kept;
            report.oracle_output_grouping = g;
        }
    });

    const GyroResult gyro = gyro_permute(s, cfg);
    report.gyro = gyro.report.retained_saliency;
    report.no_perm = gyro.report.baseline_retained_saliency;
    report.gyro_report = gyro.report;
    const double span = report.oracle - report.no_perm;
    report.gap = span > 1e-12 * std::max(1.0, s.total()) ? (report.oracle - report.gyro) / span : 0.0;
    return report;
}

}  // namespace hinm
