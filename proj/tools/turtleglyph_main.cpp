#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "turtleglyph/engine.hpp"
#include "turtleglyph/errors.hpp"
#include "turtleglyph/layout.hpp"
#include "turtleglyph/render.hpp"
#include "turtleglyph/textio.hpp"
#include "turtleglyph/verify.hpp"

namespace tg = turtleglyph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSyntax = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

bool valid_hex_color(const std::string& token) {
  if (token.size() != 7 || token[0] != '#') return false;
  for (std::size_t i = 1; i < token.size(); ++i) {
    char c = token[i];
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    if (!hex) return false;
  }
  return true;
}

// TURTLEGLYPH_PALETTE="#rrggbb,#rrggbb,..." overrides the default colors.
void apply_palette_env(tg::Style& style) {
  const char* env = std::getenv("TURTLEGLYPH_PALETTE");
  if (!env || !*env) return;
  std::vector<std::string> colors;
  std::string token;
  std::istringstream stream(env);
  while (std::getline(stream, token, ',')) {
    if (!valid_hex_color(token)) {
      std::cerr << "warning: ignoring TURTLEGLYPH_PALETTE entry '" << token
                << "' (expected #rrggbb)\n";
      continue;
    }
    colors.push_back(token);
  }
  if (!colors.empty()) style.palette = std::move(colors);
}

struct Command {
  std::string model_path;
  std::string query_text;
  std::string kind = "turtleback";
  std::string out_path;
  std::string queries_path;
  bool json = false;
  bool explain = false;
  bool chord_root = false;
  bool serial = false;
  int canvas = 600;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
};

tg::EventTree load_model(const std::string& path) {
  return tg::parse_model(read_file(path));
}

int run_check(const Command& cmd) {
  std::string source = read_file(cmd.model_path);

  tg::EventTree tree;
  try {
    tree = tg::parse_model(source);
  } catch (const tg::ValidationError& error) {
    for (const tg::Diagnostic& diagnostic : error.diagnostics())
      std::cerr << "validation: " << diagnostic.format() << "\n";
    return kExitValidation;
  }

  bool refinement = tg::check_refinement(tree);
  tg::TurtlebackLayout layout = tg::layout_turtleback(tree);
  tg::EquivalenceReport report = tg::check_equivalence(tree, layout);
  bool clean = refinement && report.violations.empty();

  if (cmd.json) {
    std::cout << tg::to_json_envelope(tree.title, report, tg::all_names_short(tree)) << "\n";
  } else {
    std::cout << "model: " << tree.title << "\n";
    std::cout << "validation: ok (" << tg::leaf_count(tree) << " leaves, depth "
              << tg::max_depth(tree) << ")\n";
    std::cout << "refinement chain: " << (refinement ? "ok" : "BROKEN") << "\n";
    std::cout << "tree↔turtleback equivalence: " << report.checked_nodes
              << " nodes checked, " << report.violations.size() << " violations\n";
  }
  return clean ? kExitOk : kExitValidation;
}

int run_query(const Command& cmd) {
  tg::EventTree tree = load_model(cmd.model_path);
  tg::Query query = tg::parse_query(cmd.query_text);

  if (cmd.explain && !cmd.json) {
    tg::ExplanationSteps steps = tg::explain(tree, query);
    for (const std::string& step : steps.steps) std::cout << step << "\n";
    std::cout << steps.result.value.fraction_str() << " ≈ "
              << steps.result.value.decimal_str(6) << "\n";
    return kExitOk;
  }

  tg::QueryResult result = tg::evaluate(tree, query);
  if (cmd.json) {
    std::cout << tg::to_json_envelope(tree.title, query.text, result,
                                      tg::all_names_short(tree))
              << "\n";
  } else {
    for (const std::string& warning : result.warnings)
      std::cerr << "warning: " << warning << "\n";
    std::cout << result.value.fraction_str() << " ≈ " << result.value.decimal_str(6)
              << "\n";
  }
  return kExitOk;
}

int run_render(const Command& cmd) {
  tg::EventTree tree = load_model(cmd.model_path);
  tg::Style style;
  style.canvas_size = cmd.canvas;
  apply_palette_env(style);

  std::vector<std::string> warnings;
  std::string svg;
  if (cmd.kind == "tree") {
    svg = tg::render_tree(tg::layout_tree(tree), style);
  } else if (cmd.kind == "turtleback") {
    tg::TurtlebackLayout layout = tg::layout_turtleback(tree);
    svg = cmd.chord_root ? tg::render_turtleback_chord(layout, style, &warnings)
                         : tg::render_turtleback(layout, style, &warnings);
  } else {
    std::cerr << "error: unknown --kind '" << cmd.kind << "' (turtleback|tree)\n";
    return kExitSyntax;
  }
  for (const std::string& warning : warnings) std::cerr << "warning: " << warning << "\n";
  write_file(cmd.out_path, svg);
  return kExitOk;
}

int run_sample(const Command& cmd) {
  tg::EventTree tree = load_model(cmd.model_path);
  tg::Query query = tg::parse_query(cmd.query_text);

  tg::SampleEstimate estimate = cmd.serial
                                    ? tg::estimate_query_serial(tree, query, cmd.samples, cmd.seed)
                                    : tg::estimate_query(tree, query, cmd.samples, cmd.seed);
  tg::QueryResult exact = tg::evaluate(tree, query);

  if (cmd.json) {
    std::cout << tg::to_json_envelope(tree.title, query.text, estimate) << "\n";
  } else {
    double exact_value = exact.value.to_double();
    double gap = std::fabs(estimate.estimate - exact_value);
    std::cout << "estimate: " << tg::format_double(estimate.estimate) << " (" << estimate.hits
              << "/" << estimate.n << ", stderr " << tg::format_double(estimate.standard_error)
              << ")\n";
    std::cout << "exact:    " << exact.value.fraction_str() << " ≈ "
              << exact.value.decimal_str(6) << "\n";
    std::cout << "|estimate - exact| = " << tg::format_double(gap);
    if (estimate.standard_error > 0.0)
      std::cout << " = " << tg::format_double(gap / estimate.standard_error) << "·stderr";
    std::cout << "\n";
  }
  return kExitOk;
}

int run_report(const Command& cmd) {
  tg::EventTree tree = load_model(cmd.model_path);
  std::string queries_text = read_file(cmd.queries_path);

  std::vector<tg::Query> queries;
  std::istringstream lines(queries_text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      queries.push_back(tg::parse_query(line.substr(start)));
    } catch (const tg::SyntaxError& error) {
      throw tg::SyntaxError(std::string(error.what()) + " (queries file line " +
                                std::to_string(line_no) + ")",
                            line_no, error.column());
    }
  }

  std::filesystem::create_directories(cmd.out_path);
  tg::Style style;
  apply_palette_env(style);

  tg::TurtlebackLayout turtleback = tg::layout_turtleback(tree);
  std::string turtleback_svg = tg::render_turtleback(turtleback, style);
  std::string tree_svg = tg::render_tree(tg::layout_tree(tree), style);

  std::string index = "# " + tree.title + "\n\n";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const tg::Query& query = queries[i];
    tg::ExplanationSteps steps = tg::explain(tree, query);

    char name[32];
    std::snprintf(name, sizeof name, "query_%02zu.md", i + 1);
    std::string body = "# " + tree.title + " — " + query.to_string() + "\n\n";
    body += "Result: **" + steps.result.value.fraction_str() + " ≈ " +
            steps.result.value.decimal_str(6) + "**\n\n";
    for (const std::string& warning : steps.result.warnings)
      body += "> warning: " + warning + "\n\n";
    body += "## Worked solution\n\n```\n";
    for (const std::string& step : steps.steps) body += step + "\n";
    body += "```\n\n## Turtleback diagram\n\n" + turtleback_svg + "\n";
    body += "\n## Tree diagram\n\n" + tree_svg + "\n";
    write_file((std::filesystem::path(cmd.out_path) / name).string(), body);
    index += "- [" + query.to_string() + "](" + name + ") = " +
             steps.result.value.fraction_str() + "\n";
  }
  write_file((std::filesystem::path(cmd.out_path) / "index.md").string(), index);
  std::cout << "wrote " << queries.size() << " report(s) to " << cmd.out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"turtleglyph: exact conditional-probability models, queries, and diagrams"};
  app.require_subcommand(1);

  Command cmd;

  CLI::App* check = app.add_subcommand("check", "validate a model and its diagram semantics");
  check->add_option("model", cmd.model_path, "model file (.tb)")->required();
  check->add_flag("--json", cmd.json, "emit the JSON envelope");

  CLI::App* query = app.add_subcommand("query", "evaluate P(...) exactly");
  query->add_option("model", cmd.model_path, "model file (.tb)")->required();
  query->add_option("query", cmd.query_text, "query, e.g. \"P(L/S | */S)\"")->required();
  query->add_flag("--json", cmd.json, "emit the JSON envelope");
  query->add_flag("--explain", cmd.explain, "show the worked solution steps");

  CLI::App* render = app.add_subcommand("render", "write an SVG diagram");
  render->add_option("model", cmd.model_path, "model file (.tb)")->required();
  render->add_option("--kind", cmd.kind, "turtleback|tree")->required();
  render->add_option("--out", cmd.out_path, "output .svg path")->required();
  render->add_flag("--chord-root", cmd.chord_root,
                   "straight-line chord construction (two-child roots)");
  render->add_option("--size", cmd.canvas, "canvas size in pixels");

  CLI::App* sample = app.add_subcommand("sample", "Monte Carlo check of a query");
  sample->add_option("model", cmd.model_path, "model file (.tb)")->required();
  sample->add_option("query", cmd.query_text, "query to estimate")->required();
  sample->add_option("--n", cmd.samples, "sample count")->required();
  sample->add_option("--seed", cmd.seed, "generator seed")->required();
  sample->add_flag("--serial", cmd.serial, "use the single-threaded reference kernel");
  sample->add_flag("--json", cmd.json, "emit the JSON envelope");

  CLI::App* report = app.add_subcommand("report", "markdown worked solutions with diagrams");
  report->add_option("model", cmd.model_path, "model file (.tb)")->required();
  report->add_option("--queries", cmd.queries_path, "file with one P(...) per line")
      ->required();
  report->add_option("--out", cmd.out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return kExitSyntax;
  }

  try {
    if (check->parsed()) return run_check(cmd);
    if (query->parsed()) return run_query(cmd);
    if (render->parsed()) return run_render(cmd);
    if (sample->parsed()) return run_sample(cmd);
    if (report->parsed()) return run_report(cmd);
  } catch (const tg::SyntaxError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitSyntax;
  } catch (const tg::ValidationError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
