// hinm: command-line front end for HiNM pruning, gyro-permutation, the
// compressed encoding and the sparse-matmul simulator.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hinm/hinm.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kShapeOrFile = 3, kSizeGuard = 4 };

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
};

hinm::HiNMConfig resolve_config(const Globals& g) {
    hinm::HiNMConfig cfg = g.config_path.empty() ? hinm::HiNMConfig{} : hinm::load_config(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    return cfg;
}

hinm::Shape parse_shape(const std::string& text) {
    const auto x = text.find_first_of("xX");
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        std::size_t used = 0;
        const auto rows = std::stoull(text.substr(0, x), &used);
        if (used != x) throw std::invalid_argument(text);
        const std::string tail = text.substr(x + 1);
        const auto cols = std::stoull(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(text);
        return {rows, cols};
    } catch (const std::exception&) {
        throw hinm::ValueError("shape must look like ROWSxCOLS, got '" + text + "'");
    }
}

hinm::SaliencyMatrix saliency_for(const hinm::DenseMatrix& w, const std::string& saliency_path) {
    return saliency_path.empty() ? hinm::magnitude_saliency(w)
                                 : hinm::load_saliency(saliency_path, w.shape());
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void note(const Globals& g, const std::string& msg) {
    if (g.verbose) std::cerr << "hinm: " << msg << '\n';
}

int exit_code_for(const hinm::Error& e) {
    if (dynamic_cast<const hinm::SizeGuard*>(&e)) return kSizeGuard;
    if (dynamic_cast<const hinm::ValueError*>(&e) || dynamic_cast<const hinm::DimensionError*>(&e)) {
        return kConfig;
    }
    if (dynamic_cast<const hinm::ShapeMismatch*>(&e) || dynamic_cast<const hinm::NegativeScore*>(&e) ||
        dynamic_cast<const hinm::FileError*>(&e) || dynamic_cast<const hinm::FormatError*>(&e) ||
        dynamic_cast<const hinm::IndexError*>(&e)) {
        return kShapeOrFile;
    }
    return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical N:M sparsity: pruning, gyro-permutation, encoding and SpMM simulation"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "HiNM config JSON (defaults: V=4, 2:4, s_v=0.5)");
    app.add_option("--seed", g.seed, "Override the config seed");
    app.add_flag("-v,--verbose", g.verbose, "Progress messages on stderr");

    // stats
    std::string shape_text;
    auto* stats = app.add_subcommand("stats", "Composed sparsity and permutation-space size");
    stats->add_option("--shape", shape_text, "Weight shape ROWSxCOLS")->required();

    // prune
    std::string weights, saliency, out, encoding_out, report_out, variant_name = "full";
    bool no_perm = false;
    auto* prune = app.add_subcommand("prune", "Prune weights; write masked HNMW, encoding and report");
    prune->add_option("--weights", weights)->required();
    prune->add_option("--saliency", saliency, "HNMW saliency scores (default: |W|)");
    prune->add_flag("--no-perm", no_perm, "Skip gyro-permutation (identity orders)");
    prune->add_option("--variant", variant_name, "full | v1_no_sampling_kmeans_all | v2_channel_swap_icp");
    prune->add_option("--out", out, "Masked-dense HNMW output")->required();
    prune->add_option("--encoding", encoding_out, "Encoding JSON (default: <out>.encoding.json)");
    prune->add_option("--report", report_out, "PruneReport JSON")->required();

    // permute
    std::string perm_out;
    auto* permute = app.add_subcommand("permute", "Run gyro-permutation and write the permutation JSON");
    permute->add_option("--weights", weights)->required();
    permute->add_option("--saliency", saliency);
    permute->add_option("--variant", variant_name);
    permute->add_option("--out", perm_out, "GyroPermutation JSON")->required();
    permute->add_option("--report", report_out);

    // encode
    std::string perm_in;
    auto* encode = app.add_subcommand("encode", "Prune under a given permutation and write the encoding");
    encode->add_option("--weights", weights)->required();
    encode->add_option("--saliency", saliency);
    encode->add_option("--permutation", perm_in, "GyroPermutation JSON (default: identity)");
    encode->add_option("--out", encoding_out)->required();

    // decode
    std::string encoding_in;
    auto* decode = app.add_subcommand("decode", "Expand an encoding to masked-dense HNMW (sigma_o row order)");
    decode->add_option("--encoding", encoding_in)->required();
    decode->add_option("--out", out)->required();

    // spmm
    std::string input;
    auto* spmm = app.add_subcommand("spmm", "Sparse product of an encoding with an HNMW input");
    spmm->add_option("--encoding", encoding_in)->required();
    spmm->add_option("--input", input)->required();
    spmm->add_option("--out", out)->required();

    // chain
    std::string manifest;
    bool keep_order = false;
    auto* chain = app.add_subcommand("chain", "Run a manifest of pre-permuted layers");
    chain->add_option("--manifest", manifest)->required();
    chain->add_option("--input", input)->required();
    chain->add_option("--out", out)->required();
    chain->add_flag("--keep-order", keep_order, "Leave output rows in the last layer's sigma_o order");

    // oracle
    bool force = false;
    auto* oracle = app.add_subcommand("oracle", "Compare gyro-permutation with the exhaustive optimum");
    oracle->add_option("--weights", weights)->required();
    oracle->add_option("--saliency", saliency);
    oracle->add_option("--report", report_out)->required();
    oracle->add_flag("--force", force, "Ignore the enumeration size guard");

    // shuffle-check
    std::size_t trials = 50;
    auto* shuffle = app.add_subcommand("shuffle-check", "Check within-tile vector order invariance");
    shuffle->add_option("--encoding", encoding_in)->required();
    shuffle->add_option("--input", input)->required();
    shuffle->add_option("--trials", trials);
    shuffle->add_option("--report", report_out);

    app.fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*stats) {
            const hinm::HiNMConfig cfg = resolve_config(g);
            const auto v = hinm::validate_config(cfg, parse_shape(shape_text));
            const auto sparsity = hinm::composed_sparsity(v.vector_sparsity, v.N(), v.M());
            const auto space = hinm::count_permutation_space(v.shape.rows, v.shape.cols, v.V(), v.M());
            std::cout << "shape: " << hinm::to_string(v.shape) << '\n'
                      << "pattern: V=" << v.V() << " N:M=" << v.N() << ':' << v.M()
                      << " vector_sparsity=" << fmt9(cfg.vector_sparsity) << '\n'
                      << "output_partitions: " << v.output_partitions << '\n'
                      << "tiles: " << v.tiles << '\n'
                      << "vectors_kept_per_tile: " << v.vectors_kept << '\n'
                      << "composed_sparsity: " << fmt9(sparsity.to_double()) << " (" << sparsity.str() << ")\n"
                      << "permutation_space: " << hinm::with_thousands_separators(space) << '\n';
            return kOk;
        }

        if (*prune || *permute) {
            const hinm::DenseMatrix w = hinm::read_hnmw(weights);
            const hinm::HiNMConfig cfg = resolve_config(g);
            const auto v = hinm::validate_config(cfg, w.shape());
            const auto s = saliency_for(w, saliency);
            note(g, "weights " + hinm::to_string(w.shape()) + ", " + std::to_string(v.tiles) + " tiles");
            const hinm::GyroResult r = no_perm ? hinm::prune_identity(s, v)
                                               : hinm::gyro_permute(s, v, hinm::variant_from_string(variant_name));
            note(g, "retained saliency " + fmt9(r.report.retained_saliency) + " (no-perm " +
                        fmt9(r.report.baseline_retained_saliency) + ")");
            if (!report_out.empty()) hinm::write_text_file(report_out, hinm::report_to_json(r.report));
            if (*permute) {
                hinm::write_text_file(perm_out, hinm::permutation_to_json(r.sigma));
                return kOk;
            }
            hinm::write_hnmw(out, hinm::apply_masks(w, r.masks));
            if (encoding_out.empty()) encoding_out = out + ".encoding.json";
            hinm::write_text_file(encoding_out, hinm::encoding_to_json(hinm::encode(w, r.masks, r.sigma), cfg));
            std::cout << "retained_saliency: " << fmt9(r.report.retained_saliency) << '\n'
                      << "baseline_retained_saliency: " << fmt9(r.report.baseline_retained_saliency) << '\n'
                      << "zeros: " << r.report.total_zeros << '/' << r.report.elements << '\n';
            return kOk;
        }

        if (*encode) {
            const hinm::DenseMatrix w = hinm::read_hnmw(weights);
            const hinm::HiNMConfig cfg = resolve_config(g);
            const auto v = hinm::validate_config(cfg, w.shape());
            const auto s = saliency_for(w, saliency);
            hinm::GyroPermutation sigma;
            if (perm_in.empty()) {
                sigma = hinm::prune_without_permutation(s, v).sigma;
            } else {
                sigma = hinm::permutation_from_json(hinm::read_text_file(perm_in));
            }
            const hinm::MaskPair masks = hinm::prune(s, v, sigma);
            hinm::write_text_file(encoding_out, hinm::encoding_to_json(hinm::encode(w, masks, sigma), cfg));
            return kOk;
        }

        if (*decode) {
            hinm::write_hnmw(out, hinm::decode(hinm::load_encoding(encoding_in)));
            return kOk;
        }

        if (*spmm) {
            const auto enc = hinm::load_encoding(encoding_in);
            hinm::write_hnmw(out, hinm::hinm_spmm(enc, hinm::read_hnmw(input)));
            return kOk;
        }

        if (*chain) {
            const auto layers = hinm::load_chain_manifest(manifest);
            hinm::write_hnmw(out, hinm::compose_layers(layers, hinm::read_hnmw(input), !keep_order));
            return kOk;
        }

        if (*oracle) {
            const hinm::DenseMatrix w = hinm::read_hnmw(weights);
            const hinm::HiNMConfig cfg = resolve_config(g);
            const auto v = hinm::validate_config(cfg, w.shape());
            const auto limit = force ? std::numeric_limits<std::uint64_t>::max() : hinm::kEnumerationLimit;
            const auto r = hinm::oracle_gap(saliency_for(w, saliency), v, limit);
            hinm::write_text_file(report_out, hinm::oracle_report_to_json(r));
            std::cout << "no_perm: " << fmt9(r.no_perm) << '\n'
                      << "gyro: " << fmt9(r.gyro) << '\n'
                      << "oracle: " << fmt9(r.oracle) << '\n'
                      << "gap: " << fmt9(r.gap) << '\n';
            return kOk;
        }

        if (*shuffle) {
            const hinm::HiNMConfig cfg = resolve_config(g);
            const auto enc = hinm::load_encoding(encoding_in);
            hinm::Rng rng(cfg.seed);
            const auto r = hinm::tile_shuffle_check(enc, hinm::read_hnmw(input), rng, trials);
            const std::string json = hinm::shuffle_report_to_json(r);
            if (!report_out.empty()) hinm::write_text_file(report_out, json);
            std::cout << json;
            return r.kept_sets_identical && r.within_tolerance ? kOk : kFailure;
        }
    } catch (const hinm::Error& e) {
        std::cerr << "hinm: error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "hinm: error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
