#include "hinm/gyro.hpp"

#include <algorithm>
#include <numeric>

#include "hinm/hungarian.hpp"
#include "hinm/selection.hpp"

namespace hinm {
namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kOcpStream = 0;
constexpr std::uint64_t kIcpStream = 1'000'000;

double tolerance(const SaliencyMatrix& s) { return 1e-12 * s.total(); }

double pruned_from_scores(std::span<const double> scores, std::size_t keep) {
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    return std::max(0.0, total - top_k_sum(scores, keep));
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

std::vector<std::size_t> concat(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::vector<std::size_t> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<Partition> output_partitions(std::span<const std::size_t> sigma_o, std::size_t V) {
    std::vector<Partition> parts;
    for (std::size_t p = 0; p < sigma_o.size(); p += V) {
        parts.push_back({Axis::output, {sigma_o.begin() + p, sigma_o.begin() + p + V}, V});
    }
    return parts;
}

std::vector<std::size_t> tile_order(std::span<const std::size_t> order) {
    return {order.begin(), order.end()};
}

}  // namespace

std::vector<std::vector<std::size_t>> sample_channels(std::vector<Partition>& partitions,
                                                      std::size_t k, Rng& rng) {
    for (const Partition& p : partitions) {
        if (k > p.members.size() || k > p.capacity) {
            throw CapacityError("cannot sample " + std::to_string(k) + " members from a partition of " +
                                std::to_string(p.members.size()));
        }
    }
    std::vector<std::vector<std::size_t>> samples;
    samples.reserve(partitions.size());
    for (Partition& p : partitions) {
        std::vector<std::size_t> slots(p.members.size());
        std::iota(slots.begin(), slots.end(), std::size_t{0});
        // partial Fisher-Yates: first k slots are the sample
        for (std::size_t i = 0; i < k; ++i) std::swap(slots[i], slots[i + rng.index(slots.size() - i)]);
        std::vector<char> taken(p.members.size(), 0);
        for (std::size_t i = 0; i < k; ++i) taken[slots[i]] = 1;
        std::vector<std::size_t> picked, rest;
        for (std::size_t i = 0; i < p.members.size(); ++i) {
            (taken[i] ? picked : rest).push_back(p.members[i]);
        }
        std::ranges::sort(picked);
        p.members = std::move(rest);
        samples.push_back(std::move(picked));
    }
    return samples;
}

double output_assignment_cost(const SaliencyMatrix& s, std::span<const std::size_t> remainder,
                              std::span<const std::size_t> candidate, std::size_t capacity,
                              std::size_t vectors_kept) {
    if (remainder.size() + candidate.size() != capacity) {
        throw CapacityError("partition remainder plus candidate must hold exactly " +
                            std::to_string(capacity) + " channels");
    }
    const auto scores = column_vector_scores(s, concat(remainder, candidate));
    return pruned_from_scores(scores, vectors_kept);
}

double input_assignment_cost(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                             std::span<const std::size_t> remainder,
                             std::span<const std::size_t> candidate, std::size_t capacity,
                             std::size_t keep) {
    if (remainder.size() + candidate.size() != capacity) {
        throw CapacityError("group remainder plus candidate must hold exactly " +
                            std::to_string(capacity) + " vectors");
    }
    const auto group = concat(remainder, candidate);
    std::vector<double> scores(group.size());
    double pruned = 0.0;
    for (std::size_t r : rows) {
        for (std::size_t p = 0; p < group.size(); ++p) scores[p] = s(r, group[p]);
        pruned += pruned_from_scores(scores, keep);
    }
    return pruned;
}

double vector_retained(const SaliencyMatrix& s, std::span<const std::size_t> sigma_o,
                       const ValidatedConfig& cfg) {
    double kept = 0.0;
    for (std::size_t t = 0; t < cfg.tiles; ++t) {
        kept += top_k_sum(column_vector_scores(s, tile_rows(sigma_o, cfg.V(), t)), cfg.vectors_kept);
    }
    return kept;
}

double tile_nm_retained(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                        std::span<const std::size_t> order, std::size_t keep, std::size_t group) {
    double kept = 0.0;
    std::vector<double> scores(group);
    for (std::size_t r : rows) {
        for (std::size_t g = 0; g + group <= order.size(); g += group) {
            for (std::size_t p = 0; p < group; ++p) scores[p] = s(r, order[g + p]);
            kept += top_k_sum(scores, keep);
        }
    }
    return kept;
}

OcpLogEntry ocp_iterate(const SaliencyMatrix& s, Permutation& sigma_o, const ValidatedConfig& cfg,
                        ScheduleState& state, Rng& rng, const KMeansOptions& kmeans) {
    const std::size_t V = cfg.V();
    const std::size_t P = cfg.output_partitions;
    const std::size_t k = state.samples_per_partition;
    const double before = vector_retained(s, sigma_o, cfg);
    OcpLogEntry entry{state.iteration, k, false, before};
    ++state.iteration;
    state.best_retained = std::max(state.best_retained, before);
    if (P < 2) return entry;

    auto parts = output_partitions(sigma_o, V);
    const auto samples = sample_channels(parts, k, rng);

    // Pool every sample, then cluster the pool into P groups of k.
    std::vector<std::size_t> pool;
    for (const auto& smp : samples) pool.insert(pool.end(), smp.begin(), smp.end());
    std::vector<std::vector<std::size_t>> clusters;
    if (k == 1) {
        for (std::size_t id : pool) clusters.push_back({id});
    } else {
        Matrix<double> features(pool.size(), s.cols());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            std::ranges::copy(s.scores().row(pool[i]), features.row(i).begin());
        }
        for (auto& members : balanced_kmeans(features, P, k, rng, kmeans)) {
            std::vector<std::size_t> ids;
            for (std::size_t m : members) ids.push_back(pool[m]);
            clusters.push_back(std::move(ids));
        }
    }

    const auto colsum = [&](std::span<const std::size_t> rows) { return column_vector_scores(s, rows); };
    std::vector<std::vector<double>> remainder_sums, cluster_sums, sample_sums;
    for (std::size_t i = 0; i < P; ++i) {
        remainder_sums.push_back(colsum(parts[i].members));
        cluster_sums.push_back(colsum(clusters[i]));
        sample_sums.push_back(colsum(samples[i]));
    }
    CostMatrix costs(P, P);
    double current = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
        for (std::size_t j = 0; j < P; ++j) {
            costs(i, j) = pruned_from_scores(add(remainder_sums[i], cluster_sums[j]), cfg.vectors_kept);
        }
        current += pruned_from_scores(add(remainder_sums[i], sample_sums[i]), cfg.vectors_kept);
    }
    const Assignment match = hungarian(costs);
    if (!(match.total_cost < current - tolerance(s))) return entry;

    Permutation next;
    next.reserve(sigma_o.size());
    for (std::size_t i = 0; i < P; ++i) {
        next.insert(next.end(), parts[i].members.begin(), parts[i].members.end());
        const auto& cl = clusters[match.column_for_row[i]];
        next.insert(next.end(), cl.begin(), cl.end());
    }
    const double after = vector_retained(s, next, cfg);
    if (after > before) {
        sigma_o = std::move(next);
        entry.accepted = true;
        entry.retained = after;
        state.best_retained = std::max(state.best_retained, after);
    }
    return entry;
}

IcpResult icp_tile(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                   std::vector<std::size_t> survivors, const ValidatedConfig& cfg, Rng& rng) {
    const std::size_t M = cfg.M();
    const std::size_t N = cfg.N();
    if (survivors.size() % M != 0) {
        throw GroupingError(std::to_string(survivors.size()) +
                            " surviving vectors cannot form groups of " + std::to_string(M));
    }
    IcpResult result{std::move(survivors), {}};
    auto& order = result.order;
    double current = tile_nm_retained(s, rows, order, N, M);
    result.log.push_back(current);
    const std::size_t G = order.size() / M;
    if (G < 2) return result;

    const double eps = tolerance(s);
    std::size_t idle = 0;
    for (std::size_t it = 0; it < cfg.config.icp_max_iters; ++it) {
        std::vector<Partition> parts;
        for (std::size_t g = 0; g < G; ++g) {
            parts.push_back({Axis::input, {order.begin() + g * M, order.begin() + (g + 1) * M}, M});
        }
        const auto samples = sample_channels(parts, 1, rng);
        CostMatrix costs(G, G);
        double identity = 0.0;
        for (std::size_t i = 0; i < G; ++i) {
            for (std::size_t j = 0; j < G; ++j) {
                costs(i, j) = input_assignment_cost(s, rows, parts[i].members, samples[j], M, N);
            }
            identity += costs(i, i);
        }
        const Assignment match = hungarian(costs);
        bool improved = false;
        if (match.total_cost < identity - eps) {
            std::vector<std::size_t> next = order;
            for (std::size_t g = 0; g < G; ++g) {
                // the incoming vector takes the slot the sampled one left
                const std::size_t incoming = samples[match.column_for_row[g]].front();
                const std::size_t outgoing = samples[g].front();
                auto slot = std::find(next.begin() + g * M, next.begin() + (g + 1) * M, outgoing);
                *slot = incoming;
            }
            const double after = tile_nm_retained(s, rows, next, N, M);
            if (after > current) {
                order = std::move(next);
                current = after;
                improved = true;
            }
        }
        result.log.push_back(current);
        idle = improved ? 0 : idle + 1;
        if (idle >= std::max<std::size_t>(1, cfg.config.icp_patience)) break;
    }
    return result;
}

IcpResult icp_tile_swaps(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                         std::vector<std::size_t> survivors, const ValidatedConfig& cfg) {
    const std::size_t M = cfg.M();
    const std::size_t N = cfg.N();
    if (survivors.size() % M != 0) {
        throw GroupingError(std::to_string(survivors.size()) +
                            " surviving vectors cannot form groups of " + std::to_string(M));
    }
    IcpResult result{std::move(survivors), {}};
    auto& order = result.order;
    double current = tile_nm_retained(s, rows, order, N, M);
    result.log.push_back(current);
    const auto group_value = [&](std::size_t g) {
        return tile_nm_retained(s, rows, std::span(order).subspan(g * M, M), N, M);
    };
    for (std::size_t pass = 0; pass < cfg.config.icp_max_iters; ++pass) {
        bool changed = false;
        for (std::size_t a = 0; a < order.size(); ++a) {
            for (std::size_t b = a + 1; b < order.size(); ++b) {
                const std::size_t ga = a / M, gb = b / M;
                if (ga == gb) continue;
                const double before = group_value(ga) + group_value(gb);
                std::swap(order[a], order[b]);
                if (group_value(ga) + group_value(gb) > before) {
                    changed = true;
                } else {
                    std::swap(order[a], order[b]);
                }
            }
        }
        current = tile_nm_retained(s, rows, order, N, M);
        result.log.push_back(current);
        if (!changed) break;
    }
    return result;
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::v1_no_sampling_kmeans_all: return "v1_no_sampling_kmeans_all";
        case Variant::v2_channel_swap_icp: return "v2_channel_swap_icp";
    }
    return "full";
}

Variant variant_from_string(const std::string& name) {
    for (Variant v : {Variant::full, Variant::v1_no_sampling_kmeans_all, Variant::v2_channel_swap_icp}) {
        if (to_string(v) == name) return v;
    }
    throw ValueError("unknown variant '" + name + "'");
}

namespace {

Permutation run_ocp(const SaliencyMatrix& s, const ValidatedConfig& cfg, Variant variant,
                    PruneReport& report) {
    Permutation sigma_o = identity_permutation(s.rows());
    report.initial_vector_retained = vector_retained(s, sigma_o, cfg);
    Rng rng(derive_seed(cfg.config.seed, kOcpStream));

    if (variant == Variant::v1_no_sampling_kmeans_all) {
        if (cfg.config.ocp_max_iters == 0 || cfg.output_partitions < 2) return sigma_o;
        Permutation next;
        for (const auto& cluster : balanced_kmeans(s.scores(), cfg.output_partitions, cfg.V(), rng)) {
            next.insert(next.end(), cluster.begin(), cluster.end());
        }
        const double after = vector_retained(s, next, cfg);
        const bool accept = after > report.initial_vector_retained;
        report.ocp_log.push_back({0, cfg.V(), accept, accept ? after : report.initial_vector_retained});
        return accept ? next : sigma_o;
    }

    ScheduleState state{0, 0, report.initial_vector_retained};
    for (std::size_t it = 0; it < cfg.config.ocp_max_iters; ++it) {
        state.samples_per_partition = cfg.ocp_schedule[it];
        report.ocp_log.push_back(ocp_iterate(s, sigma_o, cfg, state, rng));
    }
    return sigma_o;
}

struct Candidate {
    GyroPermutation sigma;
    MaskPair masks;
    std::vector<std::vector<double>> icp_logs;
    double retained = 0.0;
};

Candidate finish_with_icp(const SaliencyMatrix& s, const ValidatedConfig& cfg, Permutation sigma_o,
                          Variant variant, std::uint64_t stream) {
    const BoolMatrix vmask = vector_prune(s, cfg, sigma_o);
    Candidate c;
    c.sigma = natural_input_order(vmask, std::move(sigma_o));
    for (std::size_t t = 0; t < cfg.tiles; ++t) {
        const auto rows = tile_rows(c.sigma.sigma_o, cfg.V(), t);
        IcpResult icp;
        if (variant == Variant::v2_channel_swap_icp) {
            icp = icp_tile_swaps(s, rows, tile_order(c.sigma.sigma_i[t]), cfg);
        } else {
            Rng rng(derive_seed(cfg.config.seed, stream + t));
            icp = icp_tile(s, rows, tile_order(c.sigma.sigma_i[t]), cfg, rng);
        }
        c.sigma.sigma_i[t] = std::move(icp.order);
        c.icp_logs.push_back(std::move(icp.log));
    }
    c.masks = prune(s, cfg, c.sigma);
    c.retained = retained_saliency(s, c.masks);
    return c;
}

}  // namespace

GyroResult prune_identity(const SaliencyMatrix& s, const ValidatedConfig& cfg) {
    PrunedLayer layer = prune_without_permutation(s, cfg);
    GyroResult out{std::move(layer.sigma), std::move(layer.masks), {}};
    out.report = summarize(s, out.masks);
    out.report.baseline_retained_saliency = out.report.retained_saliency;
    out.report.initial_vector_retained = vector_retained(s, out.sigma.sigma_o, cfg);
    return out;
}

GyroResult gyro_permute(const SaliencyMatrix& s, const ValidatedConfig& cfg, Variant variant) {
    if (s.shape() != cfg.shape) {
        throw ShapeMismatch("saliency is " + to_string(s.shape()) + ", config validated for " +
                            to_string(cfg.shape));
    }
    PruneReport log;
    Permutation sigma_o = run_ocp(s, cfg, variant, log);
    const bool moved = sigma_o != identity_permutation(s.rows());

    Candidate best = finish_with_icp(s, cfg, std::move(sigma_o), variant, kIcpStream);
    std::string chosen = moved ? "ocp" : "identity";
    if (moved) {
        Candidate fallback = finish_with_icp(s, cfg, identity_permutation(s.rows()), variant,
                                             2 * kIcpStream);
        if (fallback.retained > best.retained) {
            best = std::move(fallback);
            chosen = "identity";
        }
    }

    PruneReport report = summarize(s, best.masks);
    report.variant = to_string(variant);
    report.baseline_retained_saliency = retained_saliency(s, prune_without_permutation(s, cfg).masks);
    GyroResult out{std::move(best.sigma), std::move(best.masks), std::move(report)};
    out.report.initial_vector_retained = log.initial_vector_retained;
    out.report.ocp_log = std::move(log.ocp_log);
    out.report.icp_logs = std::move(best.icp_logs);
    out.report.output_order = chosen;
    return out;
}

}  // namespace hinm
