#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "isoextend/io.hpp"
#include "support.hpp"

using namespace isoextend;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("isoextend_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string save(const std::string& name, const PointConfig& p) const {
    write_json(path(name), points_to_json(p));
    return path(name);
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(ISOEXTEND_CLI) + " " + args + " > " + path("stdout") + " 2> " + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

PointConfig rotated(const PointConfig& y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return apply(EuclideanMotion(random_orthogonal(y.dimension(), rng), gaussian(y.dimension(), rng)), y);
}

}  // namespace

TEST_F(Cli, AlignExitCodes) {
  std::mt19937_64 rng(1);
  const auto y = random_config(4, 3, rng);
  const auto fy = save("y.json", y);
  EXPECT_EQ(run("align " + fy + " " + fy + " --out " + path("a.json")), 0);
  const Json report = read_json(path("a.json"));
  EXPECT_EQ(parse_number(report["delta"]), 0.0);
  EXPECT_LT(parse_number(report["maxResidual"]), 1e-9);

  EXPECT_EQ(run("align " + fy + " " + save("z.json", rotated(y, 2)) + " --proper"), 0);

  PointConfig other(3, y.points(), {"a", "b", "c", "d"});
  EXPECT_EQ(run("align " + fy + " " + save("o.json", other)), 2);

  write_text(path("bad.json"), "{\"dimension\": 3, \"points\": [");
  EXPECT_EQ(run("align " + fy + " " + path("bad.json")), 1);
  EXPECT_EQ(run("align " + fy + " " + path("missing.json")), 1);
  EXPECT_EQ(run("align " + fy), 1);
}

TEST_F(Cli, ExtendExitCodes) {
  std::mt19937_64 rng(3);
  const auto y = random_config(3, 3, rng);
  const auto fy = save("y.json", y);
  const auto fz = save("z.json", rotated(y, 4));
  EXPECT_EQ(run("extend " + fy + " " + fz + " --epsilon 0.5 --out " + path("m")), 0) << read("stderr");
  for (const char* suffix : {".map.json", ".certification.json", ".trace.json"})
    EXPECT_TRUE(fs::exists(path(std::string("m") + suffix))) << suffix;
  EXPECT_EQ(read_json(path("m.certification.json"))["verdict"], "pass");

  // Deterministic: a second run writes byte-identical documents.
  const std::string first = read("m.map.json") + read("m.certification.json");
  EXPECT_EQ(run("extend " + fy + " " + fz + " --epsilon 0.5 --out " + path("m")), 0);
  EXPECT_EQ(read("m.map.json") + read("m.certification.json"), first);

  EXPECT_EQ(run("certify " + path("m.map.json") + " " + fy + " " + fz + " --epsilon 0.5 --out " + path("c.json")), 0)
      << read("stderr");

  std::vector<Vec> pts = y.points();
  pts[1] = y[0] + (y[1] - y[0]) * (1.0 + 1e-10);
  const auto fd = save("d.json", PointConfig(3, pts));
  EXPECT_EQ(run("extend " + fy + " " + fd + " --epsilon 0.5"), 3);
  EXPECT_NE(read("stderr").find("deltaMax"), std::string::npos);

  EXPECT_EQ(run("extend " + fy + " " + fz + " --epsilon 0.9"), 3);
}

TEST_F(Cli, CounterexampleAndDimensionGuard) {
  EXPECT_EQ(run("counterexample --dim 2 --delta 0.01 --out " + path("ce")), 0) << read("stderr");
  const Json report = read_json(path("ce.report.json"));
  EXPECT_EQ(report["degrees"], Json::array({-1, 1}));
  EXPECT_EQ(report["obstruction"]["verdict"], "CONFLICT");
  EXPECT_EQ(run("extend " + path("ce.y.json") + " " + path("ce.z.json") + " --epsilon 0.5"), 4);
  EXPECT_NE(read("stderr").find("counterexample"), std::string::npos);

  EXPECT_EQ(run("counterexample --dim 3 --delta 0.01 --out " + path("ce3")), 0);
  EXPECT_EQ(run("counterexample --dim 2 --delta 0.1 --out " + path("ceb")), 0);
  EXPECT_TRUE(fs::exists(path("ceb.y.json")));
}

TEST_F(Cli, SweepWritesDocuments) {
  EXPECT_EQ(run("sweep -k 3 --dim 2 --epsilon 1e-4,1e-3,1e-2 --trials 10 --out " + path("s")), 0) << read("stderr");
  EXPECT_TRUE(fs::exists(path("s.tsv")));
  const Json doc = read_json(path("s.json"));
  EXPECT_EQ(doc["records"].size(), 30u);
  EXPECT_NE(run("sweep --trials 5"), 0);
}

TEST_F(Cli, SeedFromEnvironment) {
  std::mt19937_64 rng(5);
  const auto y = random_config(2, 2, rng);
  const auto fy = save("y.json", y);
  const auto fz = save("z.json", rotated(y, 6));
  EXPECT_EQ(run("extend " + fy + " " + fz + " --out " + path("a")), 0);
  EXPECT_EQ(run("extend " + fy + " " + fz + " --seed 77 --out " + path("b")), 0);
  EXPECT_EQ(std::system(("ISOEXTEND_SEED=77 " + std::string(ISOEXTEND_CLI) + " extend " + fy + " " + fz + " --out " +
                         path("c") + " 2>/dev/null")
                            .c_str()),
            0);
  EXPECT_EQ(read_json(path("a.certification.json"))["seed"], 1);
  EXPECT_EQ(read("b.certification.json"), read("c.certification.json"));
}

TEST_F(Cli, FuzzedInputsExitOne) {
  std::mt19937_64 rng(7);
  const auto fy = save("y.json", random_config(3, 3, rng));
  const std::string good = read("y.json");
  const std::size_t end = good.find_last_of('}');
  std::uniform_int_distribution<std::size_t> pos(1, end - 1);
  for (int t = 0; t < 20; ++t) {
    // Truncated documents and stray closing brackets are never valid.
    std::string broken = good.substr(0, pos(rng));
    if (t % 2) broken += "]]";
    write_text(path("f.json"), broken);
    EXPECT_EQ(run("align " + path("f.json") + " " + fy), 1) << broken;
  }
}
