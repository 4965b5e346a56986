// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "hinm/hinm.hpp"
#include "test_support.hpp"

namespace {

using namespace hinm;

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << '\n';
    if (!ok) ++failures;
}

HiNMConfig pattern(std::size_t V, std::size_t N, std::size_t M, double sv, std::uint64_t seed = 0) {
    HiNMConfig c;
    c.vector_size = V;
    c.nm_keep = N;
    c.nm_group = M;
    c.vector_sparsity = sv;
    c.seed = seed;
    return c;
}

void composed_sparsity_exact() {
    std::size_t ok = 0;
    const std::size_t shapes[][2] = {{16, 16}, {32, 64}, {64, 32}, {8, 16}, {64, 64}};
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto [m, n] = std::pair{shapes[i % 5][0], shapes[i % 5][1]};
        const std::size_t V = i % 2 == 0 ? 4 : 8;
        const auto w = testing::random_dyadic_matrix(m, n, 1000 + i);
        const auto v = validate_config(pattern(V, 2, 4, 0.5, i), w.shape());
        const auto r = gyro_permute(magnitude_saliency(w), v);
        const auto masked = apply_masks(w, r.masks);
        if (testing::count_zeros(masked) * 4 == m * n * 3) ++ok;
    }
    verdict(1, ok == 50, std::to_string(ok) + "/50 instances at exactly 75% zeros");
}

void permutation_space() {
    const auto count = count_permutation_space(16, 16, 4, 4);
    const std::string text = with_thousands_separators(count);
    verdict(2, text == "27,617,652,562,500", "count_permutation_space(16,16,4,4) = " + text);
}

void constructed_optimality() {
    const auto ocp_s = testing::saliency_from_rows({{9, 1}, {1, 9}, {9, 1}, {1, 9}});
    const auto ocp_v = validate_config(pattern(2, 1, 1, 0.5), {4, 2});
    const auto ocp = gyro_permute(ocp_s, ocp_v);
    const double ocp_oracle = exhaustive_ocp(ocp_s, ocp_v).retained;

    const auto icp_s = SaliencyMatrix(Matrix<double>::from_rows(
        std::vector<std::vector<double>>(4, {9, 8, 7, 6, 1, 1, 1, 1})));
    const auto icp_v = validate_config(pattern(4, 2, 4, 0.0), {4, 8});
    const auto icp = gyro_permute(icp_s, icp_v);
    const std::vector<std::size_t> rows{0, 1, 2, 3}, cols{0, 1, 2, 3, 4, 5, 6, 7};
    const double icp_oracle = exhaustive_icp(icp_s, rows, cols, icp_v).retained;

    const bool ok = ocp.report.retained_saliency == 36.0 && ocp.report.baseline_retained_saliency == 20.0 &&
                    ocp_oracle == 36.0 && icp.report.retained_saliency == 4 * 30.0 &&
                    icp.report.baseline_retained_saliency == 4 * 19.0 && icp_oracle == 4 * 30.0;
    std::ostringstream d;
    d << "OCP gyro " << ocp.report.retained_saliency << " / oracle " << ocp_oracle << " / no-perm "
      << ocp.report.baseline_retained_saliency << "; ICP gyro " << icp.report.retained_saliency / 4
      << "/row / oracle " << icp_oracle / 4 << "/row / no-perm " << icp.report.baseline_retained_saliency / 4
      << "/row";
    verdict(3, ok, d.str());
}

void dominance() {
    std::size_t dominated = 0, monotone = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto w = testing::random_matrix(64, 64, 5000 + i);
        const auto v = validate_config(pattern(8, 2, 4, 0.5, i), w.shape());
        const auto r = gyro_permute(magnitude_saliency(w), v);
        if (r.report.retained_saliency >= r.report.baseline_retained_saliency) ++dominated;
        bool mono = true;
        double last = r.report.initial_vector_retained;
        for (const auto& e : r.report.ocp_log) {
            mono = mono && e.retained >= last;
            last = e.retained;
        }
        for (const auto& log : r.report.icp_logs) mono = mono && std::ranges::is_sorted(log);
        if (mono) ++monotone;
    }
    verdict(4, dominated == 100 && monotone == 100,
            std::to_string(dominated) + "/100 dominate no-perm, " + std::to_string(monotone) +
                "/100 non-decreasing logs");
}

void oracle_gap_report() {
    double sum = 0.0, worst = 0.0;
    bool bounded = true;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto w = testing::random_matrix(8, 8, 7000 + i);
        const auto v = validate_config(pattern(2, 1, 2, 0.5, i), w.shape());
        const auto r = oracle_gap(magnitude_saliency(w), v);
        bounded = bounded && r.gap >= 0.0 && r.gap <= 1.0;
        sum += r.gap;
        worst = std::max(worst, r.gap);
    }
    std::ostringstream d;
    d << "gap in [0,1] on 20/20: " << (bounded ? "yes" : "no") << ", mean gap " << round_sig9(sum / 20)
      << ", max gap " << round_sig9(worst);
    verdict(5, bounded, d.str());
}

void spmm_equivalence() {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const auto w = testing::random_matrix(32, 64, 9000 + i);
        const auto cfg = i % 2 == 0 ? pattern(4, 2, 4, 0.5, i) : pattern(8, 1, 2, 0.5, i);
        const auto r = gyro_permute(magnitude_saliency(w), validate_config(cfg, w.shape()));
        const auto enc = encode(w, r.masks, r.sigma);
        const auto x = testing::random_matrix(64, 8, 9100 + i);
        const auto reference = permute_rows(dense_matmul(apply_masks(w, r.masks), x), enc.sigma_o);
        worst = std::max(worst, max_relative_error(hinm_spmm(enc, x), reference));
    }
    std::size_t exact = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto w = testing::random_matrix(16, 32, 9500 + i);
        const auto cfg = pattern(4, 2, 4, 0.5, i);
        const auto r = gyro_permute(magnitude_saliency(w), validate_config(cfg, w.shape()));
        const auto enc = encode(w, r.masks, r.sigma);
        const auto back = encoding_from_json(encoding_to_json(enc, cfg));
        const bool same_matrix = decode(back) == permute_rows(apply_masks(w, r.masks), enc.sigma_o);
        if (back == enc && same_matrix) ++exact;
    }
    std::ostringstream d;
    d << "max relative error " << worst << " over 10 instances; " << exact << "/20 exact round trips";
    verdict(6, worst <= 1e-5 && exact == 20, d.str());
}

void shuffle_invariance() {
    const auto w = testing::random_matrix(32, 64, 11);
    const auto r = gyro_permute(magnitude_saliency(w), validate_config(pattern(8, 2, 4, 0.5, 3), w.shape()));
    const auto enc = encode(w, r.masks, r.sigma);
    const auto x = testing::random_matrix(64, 6, 12);
    Rng rng(77);
    const auto rep = tile_shuffle_check(enc, x, rng, 50);
    std::ostringstream d;
    d << rep.trials << " shuffles, kept sets identical: " << (rep.kept_sets_identical ? "yes" : "no")
      << ", max relative error " << rep.max_relative_error;
    verdict(7, rep.trials == 50 && rep.kept_sets_identical && rep.within_tolerance, d.str());
}

void layer_consistency() {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 5; ++i) {
        const std::vector<DenseMatrix> weights{testing::random_matrix(32, 16, 300 + i),
                                               testing::random_matrix(64, 32, 310 + i),
                                               testing::random_matrix(16, 64, 320 + i)};
        const auto layers = build_chain(weights, pattern(8, 2, 4, 0.5, i));
        LayerChain chain;
        chain.relu = true;
        for (const auto& l : layers) chain.layers.push_back(l.encoding);
        const auto x = testing::random_matrix(16, 4, 330 + i);

        DenseMatrix h = x;
        Permutation previous;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            DenseMatrix m = apply_masks(layers[l].prepermuted, layers[l].masks);
            if (l > 0) m = permute_columns(m, inverse_permutation(previous));
            h = dense_matmul(m, h);
            if (l + 1 < layers.size())
                for (float& v : h.values()) v = std::max(v, 0.0f);
            previous = layers[l].encoding.sigma_o;
        }
        worst = std::max(worst, max_relative_error(compose_layers(chain, x), h));
    }
    std::ostringstream d;
    d << "max relative error " << worst << " over 5 three-layer chains";
    verdict(8, worst <= 1e-5, d.str());
}

void ablation_ordering() {
    bool ok = true;
    std::ostringstream d;
    const auto ocp_s = testing::saliency_from_rows({{9, 1}, {1, 9}, {9, 1}, {1, 9}});
    const auto icp_s = SaliencyMatrix(Matrix<double>::from_rows(
        std::vector<std::vector<double>>(4, {9, 8, 7, 6, 1, 1, 1, 1})));
    const std::pair<const SaliencyMatrix*, ValidatedConfig> cases[] = {
        {&ocp_s, validate_config(pattern(2, 1, 1, 0.5), {4, 2})},
        {&icp_s, validate_config(pattern(4, 2, 4, 0.0), {4, 8})},
    };
    const char* names[] = {"OCP", "ICP"};
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& [s, v] = cases[c];
        const double full = gyro_permute(*s, v, Variant::full).report.retained_saliency;
        const double v1 = gyro_permute(*s, v, Variant::v1_no_sampling_kmeans_all).report.retained_saliency;
        const double v2 = gyro_permute(*s, v, Variant::v2_channel_swap_icp).report.retained_saliency;
        ok = ok && full >= v1 && full >= v2;
        d << names[c] << " full " << full << " v1 " << v1 << " v2 " << v2 << (c == 0 ? "; " : "");
    }
    verdict(9, ok, d.str());
}

}  // namespace

int main() {
    try {
        composed_sparsity_exact();
        permutation_space();
        constructed_optimality();
        dominance();
        oracle_gap_report();
        spmm_equivalence();
        shuffle_invariance();
        layer_consistency();
        ablation_ordering();
    } catch (const std::exception& e) {
        std::cout << "FAIL acceptance aborted: " << e.what() << '\n';
        return 1;
    }
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << '\n';
    return failures == 0 ? 0 : 1;
}
