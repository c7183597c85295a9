// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "irscrb/harness.hpp"

using namespace irscrb;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "irscrb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string path = std::string(IRSCRB_TEST_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

TEST_CASE("allocate prints both solutions") {
  const Run r = run({"allocate", "--qtot", "600", "--wi", "1", "--ws", "1"});
  CHECK(r.code == 0);
  const auto opt_line = r.out.substr(0, r.out.find('\n'));
  const auto sub_line = r.out.substr(r.out.find('\n') + 1);
  CHECK(opt_line.rfind("optimal", 0) == 0);
  CHECK(sub_line.rfind("suboptimal", 0) == 0);
  CHECK(field(opt_line, "K") > field(opt_line, "N"));
  CHECK(field(sub_line, "K") > field(sub_line, "N"));

  const Run ex = run({"allocate", "--qtot", "600", "--wi", "1", "--ws", "1", "--exhaustive", "--step", "0.5"});
  CHECK(ex.code == 0);
  CHECK(ex.out.find("exhaustive") != std::string::npos);

  CHECK(run({"allocate", "--qtot", "2", "--wi", "1", "--ws", "1"}).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(run({"allocate", "--bogus"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"crb", "sideways", "--config", "x"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sweep writes one row per value and scheme") {
  const std::string cfg = write_file("defaults.ini", R"([system]
M = 4
N = 4
K = 4
[sweep]
vary = P0
values = 10, 20, 30
schemes = proposed_ao, random_phase, isotropic_tx
trials = 1
alpha_draws = 5
[solver]
ao_max_iter = 5
randomization_samples = 20
)");
  const std::string out = std::string(IRSCRB_TEST_TMP) + "/sweep.csv";
  const Run r = run({"sweep", "--config", cfg, "--out", out, "--no-timing"});
  CHECK(r.code == 0);
  std::ifstream f(out);
  const auto rows = read_csv(f);
  CHECK(rows.size() == 9);
  for (const auto& row : rows) {
    CHECK(row.status == RecordStatus::ok);
    CHECK(row.wall_ms == 0.0);
  }
  std::ifstream a(out);
  const std::string first((std::istreambuf_iterator<char>(a)), {});
  CHECK(run({"sweep", "--config", cfg, "--out", out, "--no-timing"}).code == 0);
  std::ifstream b(out);
  CHECK(std::string((std::istreambuf_iterator<char>(b)), {}) == first);

  const std::string bad = write_file("bad.ini", "[sweep]\nvalues = 3, 1\n");
  CHECK(run({"sweep", "--config", bad, "--out", out}).code == 1);
}

TEST_CASE("crb subcommand") {
  const std::string deficient = write_file("deficient.ini", "[system]\nM = 2\nN = 4\nK = 4\n");
  const Run r = run({"crb", "extended", "--config", deficient});
  CHECK(r.code == 0);
  CHECK(r.out.find("extended_opt inf") != std::string::npos);
  CHECK(r.out.find("rank_deficiency 2") != std::string::npos);

  const std::string ok = write_file("ok.ini", "[system]\nM = 1\nN = 4\nK = 4\n[solver]\nao_max_iter = 5\n");
  const Run p = run({"crb", "point", "--config", ok});
  CHECK(p.code == 0);
  CHECK(p.out.find("single_antenna_closed") != std::string::npos);
  CHECK(p.out.find("proposed_ao") != std::string::npos);
}

TEST_CASE("selftest subcommand") {
  const Run r = run({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
