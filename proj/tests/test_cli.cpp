#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catchall/arma.hpp"
#include "catchall/cli.hpp"
#include "catchall/ingest.hpp"

using namespace catchall;
using nlohmann::json;

#ifndef CATCHALL_FIXTURES
#define CATCHALL_FIXTURES "tests/fixtures"
#endif
#ifndef CATCHALL_GOLDEN
#define CATCHALL_GOLDEN "tests/golden"
#endif

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "catchall");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("catchall_cli_" + name)).string();
}

const std::string fixtures = CATCHALL_FIXTURES;
const std::string golden = CATCHALL_GOLDEN;

std::vector<std::vector<double>> csv_numbers(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

bool same_at_6_digits(double csv, double exact) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", exact);
  return std::stod(buf) == csv;
}

}  // namespace

TEST(Cli, MissingFileIsInputError) {
  const auto r = run({"fit-garch", "--data", "missing.csv", "--method", "gaussian"});
  EXPECT_EQ(r.code, 2);
  const auto e = json::parse(r.err);
  EXPECT_EQ(e["error"], "FileNotFound");
  EXPECT_NE(e["message"].get<std::string>().find("file not found"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, FlagValidation) {
  EXPECT_EQ(run({"fit-arma", "--model", "arima111", "--m", "0", "--data", fixtures + "/temperature_sim.csv"}).code, 2);
  EXPECT_EQ(run({"simulate", "--model", "garch", "--params", "0.05,0.1,0.85", "--n", "0"}).code, 2);
  EXPECT_EQ(run({"sweep", "--model", "nope", "--data", fixtures + "/garch_sim.csv"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"simulate", "--model", "garch", "--params", "0.05,x,0.85", "--n", "10"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SimulateIsDeterministic) {
  const auto a = temp_path("sim_a.csv"), b = temp_path("sim_b.csv");
  for (const auto& path : {a, b})
    ASSERT_EQ(run({"simulate", "--model", "garch", "--params", "0.05,0.1,0.85", "--n", "200", "--seed", "17", "--out",
                   path})
                  .code,
              0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).rfind("t,value\n1,", 0), 0u);
}

TEST(Cli, SimulateThenFitRecoversGarch) {
  const auto path = temp_path("sim_fit.csv");
  ASSERT_EQ(run({"simulate", "--model", "garch", "--params", "0.05,0.1,0.85", "--n", "5000", "--seed", "11", "--out",
                 path})
                .code,
            0);
  const auto r = run({"fit-garch", "--data", path, "--method", "gaussian"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["command"], "fit-garch");
  EXPECT_NEAR(j["params"]["omega"].get<double>(), 0.05, 0.02);
  EXPECT_NEAR(j["params"]["alpha"].get<double>(), 0.10, 0.04);
  EXPECT_NEAR(j["params"]["beta"].get<double>(), 0.85, 0.06);
  EXPECT_EQ(j["series"].size(), 5000u);
  EXPECT_GT(j["series"][10]["variance"].get<double>(), 0.0);
}

TEST(Cli, FitArmaMatchesLibrary) {
  const auto path = fixtures + "/temperature_sim.csv";
  const auto r = run({"fit-arma", "--model", "trend-arma11", "--m", "1", "--data", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto series = ingest::load(path, ingest::GenericCsv{});
  const auto f = arma::fit(series, arma::ArmaKind::TrendArma11, 1);
  EXPECT_EQ(j["params"]["phi"].get<double>(), f.model.phi);
  EXPECT_EQ(j["params"]["c1"].get<double>(), f.model.c1);
  EXPECT_EQ(j["loss"].get<double>(), f.loss);
  EXPECT_EQ(j["psi_weights"].size(), 1u);
  EXPECT_EQ(j["horizon_weights"][0].get<double>(), 1.0);
}

TEST(Cli, FitArmaRecoversSimulatedTruth) {
  const auto path = temp_path("arima.csv");
  ASSERT_EQ(run({"simulate", "--model", "arima111", "--params", "0.5,0.3", "--n", "2000", "--seed", "3", "--out",
                 path})
                .code,
            0);
  const auto j = json::parse(run({"fit-arma", "--model", "arima111", "--data", path}).out);
  EXPECT_NEAR(j["params"]["phi"].get<double>(), 0.5, 0.1);
  EXPECT_NEAR(j["params"]["theta"].get<double>(), 0.3, 0.1);
}

TEST(Cli, SweepSingleRowHasZeroDeltas) {
  const auto r = run({"sweep", "--model", "garch", "--m-max", "1", "--data", fixtures + "/garch_sim.csv", "--format",
                      "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_numbers(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "m,omega,alpha,beta,loss,delta_omega,delta_alpha,delta_beta");
  for (std::size_t c = 5; c < 8; ++c) EXPECT_EQ(rows[0][c], 0.0);
}

// The golden documents pin the exact bytes of a GARCH sweep and an ARIMA
// sweep; the CSV and JSON renderings must carry the same numbers.
TEST(Cli, GoldenSweepDocuments) {
  struct Case {
    std::vector<std::string> args;
    std::string stem;
  };
  const std::vector<Case> cases = {
      {{"sweep", "--model", "garch", "--m-max", "3", "--data", fixtures + "/garch_sim.csv"}, "sweep_garch"},
      {{"sweep", "--model", "arima111", "--m-max", "4", "--data", fixtures + "/temperature_sim.csv"}, "sweep_arima"},
  };
  for (const auto& c : cases) {
    auto json_args = c.args;
    auto csv_args = c.args;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    const auto js = run(json_args), cs = run(csv_args);
    ASSERT_EQ(js.code, 0) << js.err;
    ASSERT_EQ(cs.code, 0) << cs.err;
    if (std::getenv("CATCHALL_UPDATE_GOLDEN")) {
      std::ofstream(golden + "/" + c.stem + ".json", std::ios::binary) << js.out;
      std::ofstream(golden + "/" + c.stem + ".csv", std::ios::binary) << cs.out;
    }
    EXPECT_EQ(js.out, slurp(golden + "/" + c.stem + ".json")) << c.stem;
    EXPECT_EQ(cs.out, slurp(golden + "/" + c.stem + ".csv")) << c.stem;

    const auto doc = nlohmann::ordered_json::parse(js.out);
    const auto rows = csv_numbers(cs.out);
    ASSERT_EQ(rows.size(), doc["trajectory"].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& entry = doc["trajectory"][i];
      std::size_t col = 0;
      EXPECT_EQ(rows[i][col++], entry["m"].get<double>());
      for (const auto& [name, value] : entry["params"].items()) EXPECT_TRUE(same_at_6_digits(rows[i][col++], value));
      EXPECT_TRUE(same_at_6_digits(rows[i][col++], entry["loss"]));
      for (const auto& [name, value] : entry["delta_from_m1"].items())
        EXPECT_TRUE(same_at_6_digits(rows[i][col++], value));
      EXPECT_EQ(col, rows[i].size());
    }
  }
}

TEST(Cli, EveryCommandIsDeterministic) {
  const std::vector<std::vector<std::string>> commands = {
      {"fit-garch", "--data", fixtures + "/garch_sim.csv", "--method", "catchall", "--m", "5"},
      {"fit-arma", "--model", "trend-arma11", "--m", "3", "--data", fixtures + "/temperature_sim.csv"},
      {"sweep", "--model", "trend-arma11", "--m-max", "3", "--data", fixtures + "/temperature_sim.csv", "--format",
       "csv"},
      {"simulate", "--model", "trend-arma11", "--params", "0,0.01,0.6,0.2", "--n", "50", "--seed", "5"},
  };
  for (const auto& c : commands) {
    const auto a = run(c), b = run(c);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(Cli, PricesAreConvertedToReturns) {
  const auto path = temp_path("prices.csv");
  {
    std::ofstream f(path);
    f << "date,price\n";
    double p = 100.0;
    const auto sim = run({"simulate", "--model", "garch", "--params", "0.05,0.1,0.85", "--n", "400", "--seed", "2"});
    const auto rows = csv_numbers(sim.out);
    f << "d0," << p << "\n";
    for (const auto& row : rows) {
      p *= std::exp(row[1] / 100.0);
      f << "d" << static_cast<int>(row[0]) << "," << p << "\n";
    }
  }
  const auto r = run({"fit-garch", "--data", path, "--prices", "--no-series"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["n"], 400);
  EXPECT_FALSE(j.contains("series"));
}

TEST(Cli, BinaryExitCodes) {
#ifdef CATCHALL_CLI_PATH
  const std::string exe = CATCHALL_CLI_PATH;
  EXPECT_EQ(WEXITSTATUS(std::system((exe + " fit-garch --data missing.csv 2>/dev/null").c_str())), 2);
  EXPECT_EQ(WEXITSTATUS(std::system((exe + " simulate --model garch --params 0.05,0.1,0.85 --n 20 >/dev/null").c_str())),
            0);
#else
  GTEST_SKIP() << "CLI binary path not configured";
#endif
}
