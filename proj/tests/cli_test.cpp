#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "hinm/hinm.hpp"
#include "test_support.hpp"

namespace hinm {
namespace {

namespace fs = std::filesystem;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HINM_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 512> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = testing::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    std::string config(const HiNMConfig& c, const std::string& name = "config.json") const {
        write_text_file(dir / name, config_to_json(c));
        return path(name);
    }
    fs::path dir;
};

HiNMConfig pattern(std::size_t V, std::size_t N, std::size_t M, double sv) {
    HiNMConfig c;
    c.vector_size = V;
    c.nm_keep = N;
    c.nm_group = M;
    c.vector_sparsity = sv;
    return c;
}

TEST_F(Cli, Stats) {
    const auto r = run("stats --shape 16x16");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("27,617,652,562,500"), std::string::npos);
    EXPECT_NE(r.out.find("0.75 (3/4)"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
    EXPECT_EQ(run("stats --shape 10x16").code, 2);
    EXPECT_EQ(run("stats --shape 16x16 --config " + config(pattern(4, 4, 4, 0.5))).code, 2);
    EXPECT_EQ(run("stats").code, 2);
    write_text_file(dir / "bad.json", R"({"vector_size": 4, "colour": 1})");
    EXPECT_EQ(run("stats --shape 16x16 --config " + path("bad.json")).code, 2);
}

TEST_F(Cli, PruneConstructionWithAndWithoutPermutation) {
    write_hnmw(dir / "w.hnmw", DenseMatrix::from_rows({{9, 1}, {1, 9}, {9, 1}, {1, 9}}));
    const std::string cfg = config(pattern(2, 1, 1, 0.5));
    const std::string base = "--config " + cfg + " prune --weights " + path("w.hnmw");
    const auto gyro = run(base + " --out " + path("g.hnmw") + " --report " + path("g.json"));
    ASSERT_EQ(gyro.code, 0);
    EXPECT_NE(gyro.out.find("retained_saliency: 36"), std::string::npos) << gyro.out;
    const auto plain = run(base + " --no-perm --out " + path("n.hnmw") + " --report " + path("n.json"));
    ASSERT_EQ(plain.code, 0);
    EXPECT_NE(plain.out.find("retained_saliency: 20"), std::string::npos) << plain.out;
    EXPECT_TRUE(fs::exists(path("g.hnmw.encoding.json")));
    EXPECT_EQ(testing::count_zeros(read_hnmw(dir / "g.hnmw")), 4u);
}

TEST_F(Cli, ShapeAndFileErrorsExitThree) {
    write_hnmw(dir / "w.hnmw", testing::random_matrix(16, 16, 1));
    write_hnmw(dir / "s.hnmw", DenseMatrix(8, 16, 1.0f));
    EXPECT_EQ(run("prune --weights " + path("w.hnmw") + " --saliency " + path("s.hnmw") + " --out " +
                  path("o.hnmw") + " --report " + path("r.json"))
                  .code,
              3);
    EXPECT_EQ(run("prune --weights " + path("missing.hnmw") + " --out " + path("o.hnmw") + " --report " +
                  path("r.json"))
                  .code,
              3);
    write_text_file(dir / "junk.hnmw", "not a matrix");
    EXPECT_EQ(run("decode --encoding " + path("junk.hnmw") + " --out " + path("o.hnmw")).code, 3);
}

TEST_F(Cli, EncodeDecodeSpmmRoundTrip) {
    const auto w = testing::random_matrix(16, 16, 2);
    write_hnmw(dir / "w.hnmw", w);
    ASSERT_EQ(run("--seed 3 permute --weights " + path("w.hnmw") + " --out " + path("perm.json")).code, 0);
    ASSERT_EQ(run("--seed 3 encode --weights " + path("w.hnmw") + " --permutation " + path("perm.json") +
                  " --out " + path("enc.json"))
                  .code,
              0);
    ASSERT_EQ(run("decode --encoding " + path("enc.json") + " --out " + path("dec.hnmw")).code, 0);
    const auto enc = load_encoding(dir / "enc.json");
    EXPECT_EQ(read_hnmw(dir / "dec.hnmw"), decode(enc));

    DenseMatrix eye(16, 16, 0.0f);
    for (std::size_t i = 0; i < 16; ++i) eye(i, i) = 1.0f;
    write_hnmw(dir / "eye.hnmw", eye);
    ASSERT_EQ(run("spmm --encoding " + path("enc.json") + " --input " + path("eye.hnmw") + " --out " +
                  path("y.hnmw"))
                  .code,
              0);
    EXPECT_EQ(read_hnmw(dir / "y.hnmw"), decode(enc));

    const auto check = run("shuffle-check --encoding " + path("enc.json") + " --input " + path("eye.hnmw") +
                           " --trials 10 --report " + path("shuffle.json"));
    EXPECT_EQ(check.code, 0);
    EXPECT_TRUE(fs::exists(path("shuffle.json")));
}

TEST_F(Cli, ChainManifest) {
    const std::vector<DenseMatrix> weights{testing::random_matrix(16, 8, 4), testing::random_matrix(8, 16, 5)};
    HiNMConfig cfg = pattern(4, 2, 4, 0.5);
    const auto layers = build_chain(weights, cfg);
    write_text_file(dir / "l0.json", encoding_to_json(layers[0].encoding, cfg));
    write_text_file(dir / "l1.json", encoding_to_json(layers[1].encoding, cfg));
    write_text_file(dir / "chain.json", R"({"layers": ["l0.json", "l1.json"], "relu": true})");
    const auto x = testing::random_matrix(8, 3, 6);
    write_hnmw(dir / "x.hnmw", x);
    ASSERT_EQ(run("chain --manifest " + path("chain.json") + " --input " + path("x.hnmw") + " --out " +
                  path("y.hnmw"))
                  .code,
              0);
    LayerChain chain{{layers[0].encoding, layers[1].encoding}, true};
    EXPECT_EQ(read_hnmw(dir / "y.hnmw"), compose_layers(chain, x));
}

TEST_F(Cli, OracleAndSizeGuard) {
    write_hnmw(dir / "small.hnmw", testing::random_matrix(8, 8, 7));
    const std::string cfg = config(pattern(2, 1, 2, 0.5));
    const auto r = run("--config " + cfg + " oracle --weights " + path("small.hnmw") + " --report " +
                       path("oracle.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("gap: "), std::string::npos);
    write_hnmw(dir / "big.hnmw", testing::random_matrix(64, 64, 8));
    EXPECT_EQ(run("--config " + config(pattern(8, 2, 4, 0.5), "big.json") + " oracle --weights " +
                  path("big.hnmw") + " --report " + path("big_oracle.json"))
                  .code,
              4);
}

TEST_F(Cli, ReportsAreDeterministic) {
    write_hnmw(dir / "w.hnmw", testing::random_matrix(32, 32, 9));
    for (const char* name : {"a", "b"}) {
        ASSERT_EQ(run("--seed 5 prune --weights " + path("w.hnmw") + " --out " + path(std::string(name) + ".hnmw") +
                      " --report " + path(std::string(name) + ".json"))
                      .code,
                  0);
    }
    EXPECT_EQ(read_text_file(dir / "a.json"), read_text_file(dir / "b.json"));
    EXPECT_EQ(read_text_file(dir / "a.hnmw.encoding.json"), read_text_file(dir / "b.hnmw.encoding.json"));
}

}  // namespace
}  // namespace hinm
