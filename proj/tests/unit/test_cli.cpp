#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cimdse_cli/cli.hpp"
#include "cli_cases.hpp"

namespace cimdse {
namespace {

namespace fs = std::filesystem;
using testing::CliResult;
using testing::run_cli;

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) break;  // compare appends a summary block
    if (line[0] != '#') ++n;
  }
  return n - 1;  // header
}

std::string tmp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("cimdse_test_" + name)).string();
}

TEST(Cli, EvaluateRowsPerSuiteAndConfig) {
  const auto r = run_cli({"evaluate", "--suite", "bert-large-seq512", "--suite", "dlrm", "--config", "baseline",
                          "--config", "cim_rf", "--config", "cim_smem_configB", "--quiet"});
  ASSERT_EQ(r.code, cli::kOk) << r.log;
  EXPECT_EQ(data_rows(r.out), (5u + 7u) * 3u);
  EXPECT_EQ(r.out.rfind("# cimdse evaluate v1; seed=1; mapper=priority\n", 0), 0u);
  EXPECT_TRUE(r.log.empty());
}

TEST(Cli, SweepOverFourPrimitives) {
  const auto r = run_cli({"sweep", "--sweep", "16,8192,1000", "--seed", "7", "--primitive", "digital-6t-adder-tree",
                          "--primitive", "analog-6t", "--primitive", "analog-8t-reconfig-adc", "--primitive",
                          "digital-8t-bitwise", "--quiet"});
  ASSERT_EQ(r.code, cli::kOk) << r.log;
  EXPECT_EQ(data_rows(r.out), 4000u);
  const auto one = run_cli({"sweep", "--sweep", "16,16,1", "--config", "cim_rf", "--quiet"});
  ASSERT_EQ(one.code, cli::kOk);
  EXPECT_EQ(data_rows(one.out), 1u);
}

TEST(Cli, SweepFixedMatrixVector) {
  const auto r = run_cli({"sweep", "--sweep", "16,4096,30", "--fix-m", "1", "--config", "cim_rf", "--quiet",
                          "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.log;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "cimdse.sweep/1");
  ASSERT_EQ(j["rows"].size(), 30u);
  for (const auto& row : j["rows"]) {
    EXPECT_EQ(row["gemm_m"], 1);
    EXPECT_LT(row["tops_per_w"].get<double>(), 0.1);
    EXPECT_LE(row["gflops"].get<double>(), 64.0 + 1e-9);
  }
}

TEST(Cli, CompareAgainstItselfIsOne) {
  const auto r = run_cli({"compare", "--suite", "bert-large-seq512", "--config", "cim_rf", "--config",
                          std::string(CIMDSE_TEST_DATA_DIR) + "/configs/cim_rf.json", "--reference", "cim_rf", "--quiet", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.log;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 5u);
  for (const auto& s : j["summary"]) {
    EXPECT_DOUBLE_EQ(s["mean"].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(s["stddev"].get<double>(), 0.0);
  }
}

TEST(Cli, CompareMappersOnOneConfig) {
  const auto r = run_cli({"compare", "--sweep", "16,256,4", "--config", "cim_rf", "--mapper", "heuristic",
                          "--reference-mapper", "priority", "--max-samples", "300", "--quiet"});
  ASSERT_EQ(r.code, cli::kOk) << r.log;
  EXPECT_NE(r.out.find("reference_mapper=priority"), std::string::npos);
  EXPECT_EQ(data_rows(r.out), 4u);
  EXPECT_EQ(run_cli({"compare", "--sweep", "16,256,4", "--config", "cim_rf", "--quiet"}).code, cli::kParse);
}

TEST(Cli, RepeatRunsAndThreadCountsAreByteIdentical) {
  const std::vector<std::string> base{"sweep", "--sweep", "16,2048,40", "--seed", "3", "--config", "baseline",
                                      "--config", "cim_smem_configA", "--quiet"};
  auto with_jobs = [&](const char* j) {
    auto a = base;
    a.insert(a.end(), {"--jobs", j});
    return run_cli(a).out;
  };
  const auto one = with_jobs("1");
  EXPECT_EQ(one, with_jobs("1"));
  EXPECT_EQ(one, with_jobs("4"));
  const std::vector<std::string> h{"sweep", "--sweep", "16,512,6", "--seed", "9", "--config", "cim_rf",
                                   "--mapper", "heuristic", "--max-samples", "500", "--quiet"};
  auto h4 = h;
  h4.insert(h4.end(), {"--jobs", "4"});
  EXPECT_EQ(run_cli(h).out, run_cli(h4).out);
}

TEST(Cli, OutFileMatchesStdout) {
  const auto path = tmp_path("out.csv");
  const std::vector<std::string> a{"evaluate", "--suite", "dlrm", "--config", "cim_rf", "--quiet"};
  auto to_file = a;
  to_file.insert(to_file.end(), {"--out", path});
  ASSERT_EQ(run_cli(to_file).code, cli::kOk);
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  EXPECT_EQ(s.str(), run_cli(a).out);
  fs::remove(path);
}

TEST(Cli, LogsMapperTime) {
  const auto r = run_cli({"evaluate", "--suite", "dlrm", "--config", "cim_rf", "--jobs", "2"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.log.find("mapper priority: 7 mappings"), std::string::npos) << r.log;
  EXPECT_NE(r.log.find("threads=2"), std::string::npos) << r.log;
}

TEST(Cli, SuitesList) {
  const auto r = run_cli({"suites", "list"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out,
            "suite,entries,gemms\n"
            "bert-large-seq512,5,192\n"
            "dlrm,7,8\n"
            "gpt-j-decode,6,1065\n"
            "resnet50-imagenet,21,54\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, cli::kParse);
  EXPECT_EQ(run_cli({"evaluate", "--bogus"}).code, cli::kParse);
  EXPECT_EQ(run_cli({"evaluate", "--suite", "dlrm", "--config", "no-such-config"}).code, cli::kParse);
  EXPECT_EQ(run_cli({"evaluate", "--suite", "dlrm"}).code, cli::kParse);
  EXPECT_EQ(run_cli({"evaluate", "--config", "cim_rf"}).code, cli::kParse);
  EXPECT_EQ(run_cli({"evaluate", "--suite", "dlrm", "--config", "cim_rf", "--mapper", "magic"}).code, cli::kParse);

  const auto bad_json = tmp_path("bad.json");
  std::ofstream(bad_json) << "{\"levels\": [";
  EXPECT_EQ(run_cli({"evaluate", "--suite", "dlrm", "--config", bad_json}).code, cli::kParse);

  const auto bad_cfg = tmp_path("invariant.json");
  std::ofstream(bad_cfg) << R"({"levels":[{"name":"DRAM","capacity_bytes":"inf","bandwidth_Bpc":32,"access_energy_pJ":512}],"engine":{"type":"baseline"}})";
  EXPECT_EQ(run_cli({"evaluate", "--suite", "dlrm", "--config", bad_cfg}).code, cli::kInvariant);
  EXPECT_EQ(run_cli({"sweep", "--sweep", "17,31,4", "--config", "cim_rf"}).code, cli::kInvariant);

  EXPECT_EQ(run_cli({"evaluate", "--suite", "dlrm", "--config", "cim_rf", "--out", "/nonexistent/dir/x.csv"}).code,
            cli::kIo);
  fs::remove(bad_json);
  fs::remove(bad_cfg);
}

TEST(Cli, GoldenOutputs) {
  const bool update = std::getenv("CIMDSE_UPDATE_GOLDEN") != nullptr;
  for (const auto& c : testing::golden_cases()) {
    const auto r = run_cli(c.args);
    ASSERT_EQ(r.code, cli::kOk) << c.file << "\n" << r.log;
    const fs::path path = fs::path(CIMDSE_GOLDEN_DIR) / c.file;
    if (update) {
      std::ofstream(path, std::ios::binary) << r.out;
      continue;
    }
    std::ifstream f(path, std::ios::binary);
    ASSERT_TRUE(f) << "missing golden file " << path;
    std::stringstream s;
    s << f.rdbuf();
    EXPECT_EQ(r.out, s.str()) << c.file;
  }
}

}  // namespace
}  // namespace cimdse
