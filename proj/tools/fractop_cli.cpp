// fractop command line: thin driver over the C API.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fractop/fractop.h"

namespace {

struct Options {
  std::string preset;
  std::string ifs_file;
  std::size_t depth = 3;
  std::uint64_t budget = FRACTOP_DEFAULT_BUDGET;
  std::string out;
  std::string format = "text";
  std::vector<std::string> arc;
  std::string y_cylinder = "1";
  std::string q_word;
  std::size_t iterations = 1;
};

int exit_code(fractop_status s) {
  switch (s) {
    case FRACTOP_OK: return 0;
    case FRACTOP_ERR_INVALID_INPUT:
    case FRACTOP_ERR_UNSUPPORTED: return 2;
    case FRACTOP_ERR_RESOURCE_LIMIT: return 3;
    case FRACTOP_ERR_REFUSED: return 4;
    default: return 1;
  }
}

struct Failure {
  int code;
};

void check(fractop_status s) {
  if (s != FRACTOP_OK) {
    std::cerr << "fractop: " << fractop_last_error() << '\n';
    throw Failure{exit_code(s)};
  }
}

using IfsHandle = std::unique_ptr<fractop_ifs, decltype(&fractop_ifs_free)>;
using CellsHandle = std::unique_ptr<fractop_cellset, decltype(&fractop_cellset_free)>;
using Text = std::unique_ptr<char, decltype(&fractop_string_free)>;

Text text(char* s) { return Text(s, &fractop_string_free); }

IfsHandle load_ifs(const Options& o, const char* fallback) {
  fractop_ifs* raw = nullptr;
  if (!o.ifs_file.empty()) {
    if (!o.preset.empty()) {
      std::cerr << "fractop: use either --preset or --ifs-file\n";
      throw Failure{2};
    }
    std::ifstream in(o.ifs_file);
    if (!in) {
      std::cerr << "fractop: cannot read " << o.ifs_file << '\n';
      throw Failure{2};
    }
    std::stringstream buf;
    buf << in.rdbuf();
    check(fractop_ifs_parse(buf.str().c_str(), &raw));
  } else {
    std::string name = o.preset.empty() ? fallback : o.preset;
    if (name.empty()) {
      std::cerr << "fractop: --preset or --ifs-file is required\n";
      throw Failure{2};
    }
    check(fractop_ifs_preset(name.c_str(), &raw));
  }
  return IfsHandle(raw, &fractop_ifs_free);
}

CellsHandle build(const fractop_ifs* ifs, const Options& o) {
  fractop_cellset* raw = nullptr;
  check(fractop_attractor(ifs, o.depth, o.budget, &raw));
  return CellsHandle(raw, &fractop_cellset_free);
}

void emit(const Options& o, const char* content) {
  if (o.out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  f << content;
  if (!f) {
    std::cerr << "fractop: cannot write " << o.out << '\n';
    throw Failure{2};
  }
}

fractop_format format_of(const Options& o) { return o.format == "json" ? FRACTOP_FORMAT_JSON : FRACTOP_FORMAT_TEXT; }

int run_attractor(const Options& o) {
  auto ifs = load_ifs(o, "");
  auto cells = build(ifs.get(), o);
  if (!o.out.empty()) {
    char* raw = nullptr;
    check(fractop_cellset_export(cells.get(), &raw));
    emit(o, text(raw).get());
  }
  char* summary = nullptr;
  check(fractop_cellset_summary(cells.get(), &summary));
  std::cout << text(summary).get();
  return 0;
}

int run_analyze(const Options& o) {
  auto ifs = load_ifs(o, "");
  char* raw = nullptr;
  check(fractop_analyze(ifs.get(), o.depth, o.budget, format_of(o), &raw));
  emit(o, text(raw).get());
  return 0;
}

int run_quotient(const Options& o) {
  auto ifs = load_ifs(o, "cmts");
  char* raw = nullptr;
  int passed = 0;
  check(fractop_quotient(ifs.get(), o.depth, o.y_cylinder.c_str(), o.q_word.empty() ? nullptr : o.q_word.c_str(),
                         o.iterations, format_of(o), &raw, &passed));
  emit(o, text(raw).get());
  if (!passed) {
    std::cerr << "fractop: quotient checks failed\n";
    return 1;
  }
  return 0;
}

int run_render(const Options& o) {
  auto ifs = load_ifs(o, "");
  auto cells = build(ifs.get(), o);
  const char* p = o.arc.size() == 2 ? o.arc[0].c_str() : nullptr;
  const char* q = o.arc.size() == 2 ? o.arc[1].c_str() : nullptr;
  char* raw = nullptr;
  check(fractop_render_svg(cells.get(), p, q, &raw));
  emit(o, text(raw).get());
  return 0;
}

int run_report(const Options& o) {
  auto ifs = load_ifs(o, "");
  char* raw = nullptr;
  check(fractop_summary(ifs.get(), o.depth, o.budget, &raw));
  emit(o, text(raw).get());
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  auto* preset = cmd->add_option("--preset", o.preset, "cmts | sierpinski-carpet | sierpinski-gasket");
  cmd->add_option("--ifs-file", o.ifs_file, "IFS definition file")->excludes(preset);
  cmd->add_option("--depth", o.depth, "construction level k")->capture_default_str();
  cmd->add_option("--budget", o.budget, "maximum number of cells m^k (env FRACTOP_BUDGET)")->capture_default_str();
  cmd->add_option("--out", o.out, "output file (stdout when omitted)");
}

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("FRACTOP_BUDGET")) {
    try {
      o.budget = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "fractop: FRACTOP_BUDGET must be a positive integer\n";
      return 2;
    }
  }

  CLI::App app{"Finite approximations of IFS attractors and their topology, in exact arithmetic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fractop_version());

  auto* attractor = app.add_subcommand("attractor", "build X_k; write the cell set and print a summary");
  add_common(attractor, o);

  auto* analyze = app.add_subcommand("analyze", "topological property report for X_k");
  add_common(analyze, o);
  add_format(analyze, o);

  auto* quotient = app.add_subcommand("quotient", "collapse-quotient pipeline on the Cantor code space");
  add_common(quotient, o);
  add_format(quotient, o);
  quotient->add_option("--y-cylinder", o.y_cylinder, "code prefix selecting the clopen set Y")->capture_default_str();
  quotient->add_option("--q-word", o.q_word, "code word of the collapse point q (default 11...1)");
  quotient->add_option("--iterations", o.iterations, "number of successive quotients")->capture_default_str();

  auto* render = app.add_subcommand("render", "SVG drawing of X_k, optionally with an arc from p to q");
  add_common(render, o);
  render->add_option("--arc", o.arc, "arc end points p q, e.g. 1/18,1/18 17/18,17/18")->expected(2);

  auto* report = app.add_subcommand("report", "human-readable summary");
  add_common(report, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (attractor->parsed()) return run_attractor(o);
    if (analyze->parsed()) return run_analyze(o);
    if (quotient->parsed()) {
      if (quotient->count("--depth") == 0) o.depth = 5;
      return run_quotient(o);
    }
    if (render->parsed()) {
      if (render->count("--depth") == 0) o.depth = 2;
      return run_render(o);
    }
    if (report->parsed()) return run_report(o);
  } catch (const Failure& f) {
    return f.code;
  }
  return 2;
}
