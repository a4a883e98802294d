#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "support/helpers.hpp"

#ifndef CMAPSUM_CLI_PATH
#define CMAPSUM_CLI_PATH "cmapsum"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string out_file =
      (std::filesystem::temp_directory_path() / "cmapsum_cli_out.txt").string();
  const std::string command = std::string(CMAPSUM_CLI_PATH) + " " + args + " > " + out_file +
                              " 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = testsupport::read_file(out_file);
  return result;
}

std::string fixture(const std::string& name) {
  return (testsupport::data_dir() / name).string();
}

}  // namespace

TEST_CASE("help exits zero and lists subcommands") {
  const auto result = run_cli("--help");
  CHECK(result.exit_code == 0);
  for (const char* sub : {"fetch-corpus", "stats", "extract", "filter", "score", "build",
                          "evaluate", "crowd", "export-dot"}) {
    CAPTURE(sub);
    CHECK(result.output.find(sub) != std::string::npos);
  }
}

TEST_CASE("missing file exits 1, invalid input exits 2") {
  CHECK(run_cli("evaluate --gen /no/such/file.json --ref /no/such/ref.json").exit_code == 1);
  CHECK(run_cli("stats /no/such/dir").exit_code == 1);

  testsupport::TempDir tmp("cli_invalid");
  const auto bad_map = tmp.path() / "bad_map.json";
  std::ofstream(bad_map) << "{\"concepts\": [], \"relations\": []}";
  const auto invalid =
      run_cli("evaluate --gen " + bad_map.string() + " --ref " + bad_map.string());
  CHECK(invalid.exit_code == 2);

  CHECK(run_cli("definitely-not-a-subcommand").exit_code == 2);
}

TEST_CASE("build produces artifacts, deterministically") {
  testsupport::TempDir tmp("cli_build");
  const auto out_a = tmp.path() / "a";
  const auto out_b = tmp.path() / "b";
  const auto build_a =
      run_cli("build " + fixture("topic_plain") + " -o " + out_a.string());
  CHECK(build_a.exit_code == 0);
  const auto build_b =
      run_cli("build " + fixture("topic_plain") + " -o " + out_b.string());
  CHECK(build_b.exit_code == 0);

  for (const char* name :
       {"propositions.tsv", "filtered.tsv", "concepts.json", "map.json", "map.dot"}) {
    CAPTURE(name);
    const auto a = testsupport::read_file(out_a / name);
    CHECK(!a.empty());
    CHECK(a == testsupport::read_file(out_b / name));
  }

  // The built map evaluates against itself with strict F1 = 1.
  const auto map_path = (out_a / "map.json").string();
  const auto self_eval = run_cli("evaluate --gen " + map_path + " --ref " + map_path);
  CHECK(self_eval.exit_code == 0);
  CHECK(self_eval.output.find("\"f1\": 1.0") != std::string::npos);

  const auto dot = run_cli("export-dot -i " + map_path);
  CHECK(dot.exit_code == 0);
  CHECK(dot.output.find("digraph") != std::string::npos);
}

TEST_CASE("stats on the fixture topic") {
  const auto result = run_cli("stats " + fixture("topic_plain"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"documents\": 3") != std::string::npos);
  CHECK(result.output.find("heterogeneity") != std::string::npos);
  CHECK(result.output.find("\"reference_concepts\": 5") != std::string::npos);
}

TEST_CASE("crowd simulate then rank round trip is deterministic") {
  testsupport::TempDir tmp("cli_crowd");
  const auto sim_config = tmp.path() / "sim.json";
  std::ofstream(sim_config) << R"({"propositions": 30, "workers": 5, "noise_sigma": 0.3,
                                   "pair_fraction": 0.2, "seed": 7})";
  const auto sim_dir = tmp.path() / "sim";
  CHECK(run_cli("crowd simulate --config " + sim_config.string() + " --out " +
                sim_dir.string())
            .exit_code == 0);
  CHECK(std::filesystem::exists(sim_dir / "likert.csv"));
  CHECK(std::filesystem::exists(sim_dir / "comparisons.csv"));

  const auto rank_a = tmp.path() / "rank_a.csv";
  const auto rank_b = tmp.path() / "rank_b.csv";
  const std::string rank_args = "crowd rank --likert " + (sim_dir / "likert.csv").string() +
                                " --comparisons " + (sim_dir / "comparisons.csv").string();
  CHECK(run_cli(rank_args + " -o " + rank_a.string()).exit_code == 0);
  CHECK(run_cli(rank_args + " -o " + rank_b.string()).exit_code == 0);
  const auto a = testsupport::read_file(rank_a);
  CHECK(!a.empty());
  CHECK(a == testsupport::read_file(rank_b));

  // aggregate writes means; agreement reports a value in range.
  const auto agg = run_cli("crowd aggregate --likert " + (sim_dir / "likert.csv").string() +
                           " --no-filter");
  CHECK(agg.exit_code == 0);
  CHECK(agg.output.find("proposition,mean") != std::string::npos);

  const auto agreement =
      run_cli("crowd agreement --likert " + fixture("likert_fixture.csv"));
  CHECK(agreement.exit_code == 0);
  CHECK(agreement.output.find("\"likert_agreement\": 1.0") != std::string::npos);
}

TEST_CASE("malformed csv exits 2 with a line number") {
  testsupport::TempDir tmp("cli_badcsv");
  const auto bad = tmp.path() / "likert.csv";
  std::ofstream(bad) << "worker,proposition,value\nw1,p1,99\n";
  const auto result = run_cli("crowd aggregate --likert " + bad.string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("likert.csv:2") != std::string::npos);
}
