#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "support/test_support.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  std::string command = std::string(TG_CLI_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string model(const std::string& name) {
  return std::string(TG_MODELS_DIR) + "/" + name;
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "turtleglyph_cli_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("query prints the exact fraction and decimal") {
  RunResult result = run_cli("query " + model("lung.tb") + " \"P(L/S | */S)\"");
  CHECK(result.exit_code == 0);
  CHECK(result.output == "23/117 ≈ 0.196581\n");

  RunResult joint = run_cli("query " + model("lung.tb") + " \"P(L/S)\"");
  CHECK(joint.output == "69/1250 ≈ 0.0552\n");
}

TEST_CASE("exit codes: 1 validation, 2 syntax, 3 runtime") {
  fs::path dir = scratch_dir();

  fs::path invalid = dir / "invalid.tb";
  std::ofstream(invalid) << "model \"bad\"\nA: 0.5\nB: 0.6\n";
  CHECK(run_cli("check " + invalid.string()).exit_code == 1);
  CHECK(run_cli("query " + invalid.string() + " \"P(A)\"").exit_code == 1);

  fs::path broken = dir / "broken.tb";
  std::ofstream(broken) << "model notquoted\nA: 1\n";
  CHECK(run_cli("check " + broken.string()).exit_code == 2);

  CHECK(run_cli("query " + model("lung.tb") + " \"P(\"").exit_code == 2);
  CHECK(run_cli("query " + model("lung.tb") + " \"P(L/S | ~S/*/*)\"").exit_code == 3);
  CHECK(run_cli("query " + model("lung.tb")).exit_code == 2);  // missing argument
  CHECK(run_cli("bogus").exit_code == 2);
  CHECK(run_cli("query missing-file.tb \"P(A)\"").exit_code == 3);
}

TEST_CASE("check summarizes a clean corpus model") {
  RunResult result = run_cli("check " + model("urn.tb"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("validation: ok") != std::string::npos);
  CHECK(result.output.find("refinement chain: ok") != std::string::npos);
  CHECK(result.output.find("24 nodes checked, 0 violations") != std::string::npos);
}

TEST_CASE("query --json emits only the fixed envelope on stdout") {
  RunResult result = run_cli("query " + model("urn.tb") + " \"P(*/*/G)\" --json");
  CHECK(result.exit_code == 0);
  nlohmann::json doc = nlohmann::json::parse(result.output);
  CHECK(doc["model"] == "Urn: 2 green and 3 red");
  CHECK(doc["query"] == "P(*/*/G)");
  CHECK(doc["value"]["num"] == "2");
  CHECK(doc["value"]["den"] == "5");
  CHECK(doc["value"]["decimal"] == "0.4");
  CHECK(doc["matched"] ==
        nlohmann::json::array({"GRG", "RGG", "RRGG", "RRGRG"}));
  CHECK(doc["warnings"].size() == 1);

  // fixed field order
  std::string head = "{\"model\":";
  CHECK(result.output.substr(0, head.size()) == head);
  CHECK(result.output.find("\"query\":") < result.output.find("\"value\":"));
  CHECK(result.output.find("\"value\":") < result.output.find("\"matched\":"));
  CHECK(result.output.find("\"matched\":") < result.output.find("\"condition_matched\":"));
  CHECK(result.output.find("\"condition_matched\":") < result.output.find("\"warnings\":"));
}

TEST_CASE("query --explain walks through the worked solution") {
  RunResult result = run_cli("query " + model("lung.tb") + " \"P(*/S)\" --explain");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("LS: 3/50·23/25") != std::string::npos);
  CHECK(result.output.find("~LS: 47/50·6/25") != std::string::npos);
  CHECK(result.output.find("351/1250") != std::string::npos);
}

TEST_CASE("render writes byte-identical files on re-run") {
  fs::path dir = scratch_dir();
  for (std::string kind : {"turtleback", "tree"}) {
    fs::path first = dir / ("first_" + kind + ".svg");
    fs::path second = dir / ("second_" + kind + ".svg");
    CHECK(run_cli("render " + model("luckydraw.tb") + " --kind " + kind + " --out " +
                  first.string())
              .exit_code == 0);
    CHECK(run_cli("render " + model("luckydraw.tb") + " --kind " + kind + " --out " +
                  second.string())
              .exit_code == 0);
    std::string a = tgtest::read_file(first.string());
    std::string b = tgtest::read_file(second.string());
    CHECK(a == b);
    CHECK(!a.empty());
  }

  fs::path chord = dir / "chord.svg";
  CHECK(run_cli("render " + model("lung.tb") +
                " --kind turtleback --chord-root --out " + chord.string())
            .exit_code == 0);
  CHECK(tgtest::read_file(chord.string()).find("<svg") != std::string::npos);

  // chord mode rejects roots without exactly two children
  fs::path three = dir / "three.tb";
  std::ofstream(three) << "model \"three\"\nA: 1/3\nB: 1/3\nC: 1/3\n";
  CHECK(run_cli("render " + three.string() + " --kind turtleback --chord-root --out " +
                (dir / "no.svg").string())
            .exit_code == 3);

  fs::path sized = dir / "sized.svg";
  CHECK(run_cli("render " + model("lung.tb") + " --kind tree --size 400 --out " +
                sized.string())
            .exit_code == 0);
  CHECK(tgtest::read_file(sized.string()).find("viewBox=\"0 0 400 400\"") !=
        std::string::npos);
}

TEST_CASE("TURTLEGLYPH_PALETTE overrides the fill colors") {
  fs::path dir = scratch_dir();
  fs::path out = dir / "palette.svg";
  std::string command = "TURTLEGLYPH_PALETTE='#102030,#405060' " + std::string(TG_CLI_BIN) +
                        " render " + model("lung.tb") + " --kind turtleback --out " +
                        out.string() + " 2>/dev/null";
  REQUIRE(std::system(command.c_str()) == 0);
  std::string svg = tgtest::read_file(out.string());
  CHECK(svg.find("#102030") != std::string::npos);
  CHECK(svg.find("#405060") != std::string::npos);
}

TEST_CASE("sample reports the estimate against the exact value") {
  RunResult result =
      run_cli("sample " + model("urn.tb") + " \"P(*/*/G)\" --n 100000 --seed 42");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("estimate:") != std::string::npos);
  CHECK(result.output.find("exact:    2/5 ≈ 0.4") != std::string::npos);

  RunResult serial = run_cli("sample " + model("urn.tb") +
                             " \"P(*/*/G)\" --n 100000 --seed 42 --serial");
  CHECK(serial.output == result.output);

  RunResult json = run_cli("sample " + model("urn.tb") +
                           " \"P(*/*/G)\" --n 10000 --seed 1 --json");
  nlohmann::json doc = nlohmann::json::parse(json.output);
  CHECK(doc["n"] == 10000);
  CHECK(doc.contains("stderr"));
}

TEST_CASE("report writes one markdown file per query with inline SVG") {
  fs::path dir = scratch_dir() / "report";
  fs::remove_all(dir);
  fs::path queries = scratch_dir() / "queries.txt";
  std::ofstream(queries) << "# the lung model's three questions\n"
                         << "P(L/S)\n"
                         << "P(*/S)\n"
                         << "P(L/S | */S)\n";
  RunResult result = run_cli("report " + model("lung.tb") + " --queries " +
                             queries.string() + " --out " + dir.string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(dir / "index.md"));
  for (const char* name : {"query_01.md", "query_02.md", "query_03.md"})
    CHECK(fs::exists(dir / name));

  std::string page = tgtest::read_file((dir / "query_03.md").string());
  CHECK(page.find("23/117") != std::string::npos);
  CHECK(page.find("<svg") != std::string::npos);          // embedded, not linked
  CHECK(page.find("(69/1250)/(351/1250)") != std::string::npos);
}
