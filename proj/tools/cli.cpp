#include "cli.hpp"

#include "lcg/module_json.hpp"
#include "lcg/suite.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lcg::cli {

namespace {

using nlohmann::json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw UsageError(what + ": '" + std::string(text) + "' is not an integer");
  return v;
}

std::vector<int> parse_int_list(std::string_view text, const std::string& what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_int(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::pair<int, int> parse_window(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw UsageError("--window: expected lo:hi, got '" + std::string(text) + "'");
  const int lo = parse_int(text.substr(0, colon), "--window");
  const int hi = parse_int(text.substr(colon + 1), "--window");
  if (lo > hi) throw UsageError("--window: lower bound " + std::to_string(lo) + " exceeds upper bound " + std::to_string(hi));
  return {lo, hi};
}

MonomialIdeal read_ideal(const std::string& text, std::size_t m) {
  if (trim(text).empty()) throw UsageError("--ideal: the ideal needs at least one generator");
  try {
    return parse_ideal(text, m);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--ideal: ") + e.what());
  }
}

void check_index(const MonomialIdeal& ideal, std::size_t i) {
  const std::size_t top = std::max(ideal.size(), ideal.variables());
  if (i > top) throw UsageError("--i: cohomological index must be at most " + std::to_string(top));
}

Box read_box(const MonomialIdeal& ideal, std::optional<int> bound, int lo, int hi) {
  if (!bound) return default_box(ideal, lo, hi);
  if (*bound < 1) throw UsageError("--box must be at least 1");
  Box box = uniform_box(ideal.variables(), *bound);
  try {
    validate_box(ideal, box, lo, hi);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--box: ") + e.what());
  }
  return box;
}

std::string multidegree_text(const Multidegree& a) {
  std::string s = "(";
  for (std::size_t k = 0; k < a.size(); ++k) s += (k ? "," : "") + std::to_string(a[k]);
  return s + ")";
}

struct IdealArgs {
  std::string ideal;
  std::size_t i = 0;
  std::size_t m = 0;
  std::string window;
  std::optional<int> box;
};

void add_ideal_options(CLI::App* cmd, IdealArgs& args) {
  cmd->add_option("--ideal", args.ideal, "generators, e.g. \"x1*x2, x3\"")->required();
  cmd->add_option("--i", args.i, "cohomological index")->required();
  cmd->add_option("--m", args.m, "number of variables (default: largest index in the ideal)");
}

int cmd_component(const IdealArgs& args, const std::string& a_text, std::ostream& out) {
  const MonomialIdeal ideal = read_ideal(args.ideal, args.m);
  check_index(ideal, args.i);
  const std::vector<int> a = parse_int_list(a_text, "--a");
  if (a.size() != ideal.variables())
    throw UsageError("--a: expected " + std::to_string(ideal.variables()) + " entries, got " + std::to_string(a.size()));
  out << component_dim(ideal, args.i, a) << '\n';
  return 0;
}

int cmd_table(const IdealArgs& args, const std::string& format, std::ostream& out) {
  const MonomialIdeal ideal = read_ideal(args.ideal, args.m);
  check_index(ideal, args.i);
  const auto [lo, hi] = parse_window(args.window);
  const Box box = read_box(ideal, args.box, lo, hi);
  const auto statuses = zdegree_statuses(ideal, args.i, lo, hi, box);
  const WindowModule module = assemble_window_module(ideal, args.i, lo, hi, box);

  if (format == "json") {
    json rows = json::array();
    for (const auto& s : statuses) {
      json row = {{"degree", s.degree}, {"status", to_string(s.status)}, {"exact", module.exact(s.degree)}};
      row["witness"] = s.witness ? json(*s.witness) : json(nullptr);
      row["witness_dim"] = s.witness_dim;
      row["dim"] = module.exact(s.degree) ? json(module.dim(s.degree)) : json(nullptr);
      rows.push_back(row);
    }
    json doc = {{"ideal", to_string(ideal)}, {"m", ideal.variables()}, {"i", args.i},     {"window", {lo, hi}},
                {"box", box.bound},          {"box_complete", module.box_complete()},  {"rows", rows}};
    out << doc.dump(2) << '\n';
    return 0;
  }
  if (format == "csv") {
    out << "degree,status,witness,witness_dim,dim\n";
    for (const auto& s : statuses) {
      out << s.degree << ',' << to_string(s.status) << ',';
      if (s.witness) out << '"' << multidegree_text(*s.witness) << '"';
      out << ',' << s.witness_dim << ',';
      if (module.exact(s.degree)) out << module.dim(s.degree);
      out << '\n';
    }
    return 0;
  }
  out << "H^" << args.i << " for I = (" << to_string(ideal) << "), m = " << ideal.variables() << '\n';
  out << std::left << std::setw(8) << "degree" << std::setw(16) << "status" << std::setw(20) << "witness"
      << std::setw(13) << "witness_dim" << "dim" << '\n';
  for (const auto& s : statuses) {
    out << std::setw(8) << s.degree << std::setw(16) << to_string(s.status) << std::setw(20)
        << (s.witness ? multidegree_text(*s.witness) : "-") << std::setw(13)
        << (s.witness ? std::to_string(s.witness_dim) : "-")
        << (module.exact(s.degree) ? std::to_string(module.dim(s.degree)) : "?") << '\n';
  }
  return 0;
}

int cmd_module(const IdealArgs& args, std::ostream& out) {
  const MonomialIdeal ideal = read_ideal(args.ideal, args.m);
  check_index(ideal, args.i);
  const auto [lo, hi] = parse_window(args.window);
  const Box box = read_box(ideal, args.box, lo, hi);
  out << to_json(assemble_window_module(ideal, args.i, lo, hi, box)).dump(2) << '\n';
  return 0;
}

int cmd_verify(const std::string& path, const std::string& format, bool timings, unsigned threads, bool verbose,
               std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read suite '" + path + "'");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("suite '" + path + "' is not valid JSON: " + e.what());
  }
  SuiteReport report;
  try {
    report = run_suite(config, std::filesystem::path(path).parent_path(), {threads, timings});
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("suite '") + path + "': " + e.what());
  }
  if (format == "json") {
    out << report.to_json(timings).dump(2) << '\n';
    err << report.summary_line() << '\n';
  } else {
    for (const auto& s : report.subjects) {
      for (const auto& c : s.checks) {
        out << std::left << std::setw(14) << to_string(c.verdict) << std::setw(22) << c.name << s.subject;
        if (timings) out << "  [" << std::fixed << std::setprecision(3) << c.seconds << " s]";
        out << '\n';
        if (!c.reason.empty() && (verbose || c.verdict == Verdict::Fail)) out << "    " << c.reason << '\n';
        if (verbose && !c.evidence.empty()) out << "    " << c.evidence.dump() << '\n';
      }
      for (const auto& k : s.skipped) out << std::setw(14) << "SKIPPED" << std::setw(22) << k.name << s.subject << '\n';
    }
    out << report.summary_line() << '\n';
  }
  return report.failed > 0 ? 1 : 0;
}

int cmd_weyl(const std::string& expr, bool apply_fourier, bool inverse, std::size_t m, std::ostream& out) {
  WeylElement a;
  try {
    a = parse_weyl(expr, m);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("expression: ") + e.what());
  }
  if (apply_fourier) a = fourier(a);
  if (inverse) a = inverse_fourier(a);
  out << to_string(a) << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graded local cohomology of monomial ideals with exact Weyl-algebra actions", "lcg"};
  app.require_subcommand(1);

  IdealArgs comp_args, table_args, module_args;
  std::string a_text, table_format = "table", verify_format = "table", suite_path, expr;
  bool timings = false, verbose = false, apply_fourier = false, inverse = false;
  unsigned threads = 0;
  std::size_t weyl_m = 0;

  CLI::App* component = app.add_subcommand("component", "dimension of H^i_I(R) at one multidegree");
  add_ideal_options(component, comp_args);
  component->add_option("--a", a_text, "multidegree, e.g. \" -1,-1\"")->required();

  CLI::App* table = app.add_subcommand("table", "per-degree status over a window of total degrees");
  add_ideal_options(table, table_args);
  table->add_option("--window", table_args.window, "lo:hi, e.g. \" -6:3\"")->required();
  table->add_option("--box", table_args.box, "uniform multidegree box bound");
  table->add_option("--format", table_format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));

  CLI::App* module = app.add_subcommand("module", "the assembled window module as JSON");
  add_ideal_options(module, module_args);
  module->add_option("--window", module_args.window, "lo:hi")->required();
  module->add_option("--box", module_args.box, "uniform multidegree box bound");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite_path, "suite file (JSON)")->required();
  verify->add_option("--format", verify_format, "table or json")->check(CLI::IsMember({"table", "json"}));
  verify->add_flag("--timings", timings, "include wall time per check");
  verify->add_option("--threads", threads, "worker threads (default: LCG_THREADS, else all cores)");
  verify->add_flag("-v,--verbose", verbose, "print reasons and evidence for every check");

  CLI::App* weyl = app.add_subcommand("weyl", "normal form of a Weyl-algebra expression");
  weyl->add_option("expression", expr, "e.g. \"d1*x1\"")->required();
  weyl->add_flag("--fourier", apply_fourier, "apply the Fourier transform X -> d, d -> -X first");
  weyl->add_flag("--inverse-fourier", inverse, "apply the inverse Fourier transform first");
  weyl->add_option("--m", weyl_m, "number of variables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*component) return cmd_component(comp_args, a_text, out);
    if (*table) return cmd_table(table_args, table_format, out);
    if (*module) return cmd_module(module_args, out);
    if (*verify) return cmd_verify(suite_path, verify_format, timings, threads, verbose, out, err);
    if (*weyl) return cmd_weyl(expr, apply_fourier, inverse, weyl_m, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace lcg::cli
