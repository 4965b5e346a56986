#include "hinm/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hinm {
namespace {

using nlohmann::json;

json number(double v) { return round_sig9(v); }

json report_object(const PruneReport& r) {
    json ocp = json::array();
    for (const auto& e : r.ocp_log) {
        ocp.push_back({{"iteration", e.iteration},
                       {"samples_per_partition", e.samples_per_partition},
                       {"accepted", e.accepted},
                       {"retained", number(e.retained)}});
    }
    json icp = json::array();
    for (const auto& log : r.icp_logs) {
        json row = json::array();
        for (double v : log) row.push_back(number(v));
        icp.push_back(std::move(row));
    }
    return {{"variant", r.variant},
            {"total_saliency", number(r.total_saliency)},
            {"retained_saliency", number(r.retained_saliency)},
            {"baseline_retained_saliency", number(r.baseline_retained_saliency)},
            {"elements", r.elements},
            {"vector_pruned_zeros", r.vector_pruned_zeros},
            {"nm_pruned_zeros", r.nm_pruned_zeros},
            {"total_zeros", r.total_zeros},
            {"tile_survivors", r.tile_survivors},
            {"initial_vector_retained", number(r.initial_vector_retained)},
            {"ocp_log", std::move(ocp)},
            {"icp_logs", std::move(icp)},
            {"output_order", r.output_order}};
}

json config_object(const HiNMConfig& c) {
    return {{"vector_size", c.vector_size},
            {"nm_keep", c.nm_keep},
            {"nm_group", c.nm_group},
            {"vector_sparsity", number(c.vector_sparsity)},
            {"tile_rows", c.tile_rows == 0 ? c.vector_size : c.tile_rows},
            {"ocp_sample_schedule", c.ocp_sample_schedule},
            {"ocp_max_iters", c.ocp_max_iters},
            {"icp_max_iters", c.icp_max_iters},
            {"icp_patience", c.icp_patience},
            {"seed", c.seed},
            {"tie_break", "lowest_index"}};
}

json parse(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

HiNMConfig config_from_object(const json& j) {
    if (!j.is_object()) throw ValueError("config must be a JSON object");
    HiNMConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "vector_size") c.vector_size = value.get<std::size_t>();
            else if (key == "nm_keep") c.nm_keep = value.get<std::size_t>();
            else if (key == "nm_group") c.nm_group = value.get<std::size_t>();
            else if (key == "vector_sparsity") c.vector_sparsity = value.get<double>();
            else if (key == "tile_rows") c.tile_rows = value.get<std::size_t>();
            else if (key == "ocp_sample_schedule") c.ocp_sample_schedule = value.get<std::vector<std::size_t>>();
            else if (key == "ocp_max_iters") c.ocp_max_iters = value.get<std::size_t>();
            else if (key == "icp_max_iters") c.icp_max_iters = value.get<std::size_t>();
            else if (key == "icp_patience") c.icp_patience = value.get<std::size_t>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "tie_break") {
                if (value.get<std::string>() != "lowest_index") {
                    throw ValueError("tie_break must be \"lowest_index\"");
                }
            } else {
                throw ValueError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ValueError(std::string("bad config value: ") + e.what());
    }
    return c;
}

}  // namespace

double round_sig9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return std::strtod(buf, nullptr);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path);
    if (!out) throw FileError("cannot write " + path.string());
    out << text;
    if (!out) throw FileError("write failed for " + path.string());
}

HiNMConfig config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValueError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_object(j);
}

std::string config_to_json(const HiNMConfig& cfg) { return config_object(cfg).dump(2) + "\n"; }

HiNMConfig load_config(const std::filesystem::path& path) { return config_from_json(read_text_file(path)); }

std::string encoding_to_json(const HiNMEncoding& enc, const HiNMConfig& cfg) {
    json tiles = json::array();
    for (const auto& t : enc.tiles) {
        json values = json::array();
        for (const auto& row : t.kept_values) {
            json r = json::array();
            for (float v : row) r.push_back(number(v));
            values.push_back(std::move(r));
        }
        tiles.push_back({{"vector_index", t.vector_index}, {"nm_index", t.nm_index}, {"kept_values", values}});
    }
    json j = {{"rows", enc.rows},
              {"cols", enc.cols},
              {"vector_size", enc.vector_size},
              {"nm_keep", enc.nm_keep},
              {"nm_group", enc.nm_group},
              {"sigma_o", enc.sigma_o},
              {"tiles", std::move(tiles)},
              {"config", config_object(cfg)}};
    return j.dump() + "\n";
}

HiNMEncoding encoding_from_json(std::string_view text) {
    const json j = parse(text, "encoding");
    HiNMEncoding enc;
    try {
        enc.rows = j.at("rows").get<std::size_t>();
        enc.cols = j.at("cols").get<std::size_t>();
        enc.vector_size = j.at("vector_size").get<std::size_t>();
        enc.nm_keep = j.at("nm_keep").get<std::size_t>();
        enc.nm_group = j.at("nm_group").get<std::size_t>();
        enc.sigma_o = j.at("sigma_o").get<Permutation>();
        for (const auto& t : j.at("tiles")) {
            TileEncoding tile;
            tile.vector_index = t.at("vector_index").get<std::vector<std::size_t>>();
            tile.nm_index = t.at("nm_index").get<std::vector<std::vector<std::uint32_t>>>();
            for (const auto& row : t.at("kept_values")) {
                std::vector<float> r;
                for (const auto& v : row) r.push_back(static_cast<float>(v.get<double>()));
                tile.kept_values.push_back(std::move(r));
            }
            enc.tiles.push_back(std::move(tile));
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed encoding: ") + e.what());
    }
    return enc;
}

HiNMEncoding load_encoding(const std::filesystem::path& path) {
    return encoding_from_json(read_text_file(path));
}

std::string permutation_to_json(const GyroPermutation& sigma) {
    return json{{"sigma_o", sigma.sigma_o}, {"sigma_i", sigma.sigma_i}}.dump() + "\n";
}

GyroPermutation permutation_from_json(std::string_view text) {
    const json j = parse(text, "permutation");
    try {
        return {j.at("sigma_o").get<Permutation>(),
                j.at("sigma_i").get<std::vector<std::vector<std::size_t>>>()};
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed permutation: ") + e.what());
    }
}

std::string report_to_json(const PruneReport& report) { return report_object(report).dump(2) + "\n"; }

std::string oracle_report_to_json(const OracleReport& r) {
    json j = report_object(r.gyro_report);
    j["no_perm"] = number(r.no_perm);
    j["gyro"] = number(r.gyro);
    j["oracle"] = number(r.oracle);
    j["gap"] = number(r.gap);
    j["oracle_output_grouping"] = r.oracle_output_grouping;
    return j.dump(2) + "\n";
}

std::string shuffle_report_to_json(const ShuffleReport& r) {
    return json{{"trials", r.trials},
                {"kept_sets_identical", r.kept_sets_identical},
                {"max_relative_error", number(r.max_relative_error)},
                {"tolerance", number(r.tolerance)},
                {"within_tolerance", r.within_tolerance}}
               .dump(2) + "\n";
}

LayerChain load_chain_manifest(const std::filesystem::path& path) {
    const json j = parse(read_text_file(path), "chain manifest");
    LayerChain chain;
    try {
        chain.relu = j.value("relu", false);
        for (const auto& entry : j.at("layers")) {
            std::filesystem::path p = entry.get<std::string>();
            if (p.is_relative()) p = path.parent_path() / p;
            chain.layers.push_back(load_encoding(p));
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed chain manifest: ") + e.what());
    }
    if (chain.layers.empty()) throw FormatError("chain manifest lists no layers");
    return chain;
}

}  // namespace hinm
