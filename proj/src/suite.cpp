#include "lcg/suite.hpp"

#include "lcg/module_json.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <thread>

namespace lcg {

using nlohmann::json;

std::vector<MonomialIdeal> squarefree_ideals(std::size_t m) {
  // Antichains of nonempty subsets of the variables, enumerated by the bitmask
  // of chosen subsets.
  std::vector<MonomialIdeal> out;
  const std::uint32_t faces = (1u << m) - 1;
  for (std::uint64_t choice = 1; choice < (1ull << faces); ++choice) {
    std::vector<std::uint32_t> sets;
    for (std::uint32_t f = 0; f < faces; ++f)
      if (choice >> f & 1) sets.push_back(f + 1);
    bool antichain = true;
    for (auto a : sets)
      for (auto b : sets)
        if (a != b && (a & b) == a) antichain = false;
    if (!antichain) continue;
    std::vector<std::vector<unsigned>> gens;
    for (auto s : sets) {
      std::vector<unsigned> g(m);
      for (std::size_t i = 0; i < m; ++i) g[i] = s >> i & 1;
      gens.push_back(std::move(g));
    }
    out.emplace_back(m, std::move(gens));
  }
  return out;
}

namespace {

std::string pattern_text(const DegreePattern& p) {
  std::string s;
  for (auto st : p.states) s += st == DegreeState::Nonzero ? 'N' : st == DegreeState::Zero ? 'Z' : 'B';
  return s;
}

void module_checks(SubjectChecks& out, const WindowModule& m, const DegreePattern& pattern) {
  out.checks.push_back(check_generalized_eulerian_theorem(m));
  out.checks.push_back(check_vanishing(pattern));
  out.checks.push_back(check_tameness(pattern));
  out.checks.push_back(check_rigidity(pattern));
  out.checks.push_back(check_pattern_shape(pattern));
  if (m.variables() == 1) {
    out.checks.push_back(check_koszul_concentration(m));
  } else if (m.box_complete()) {
    out.checks.push_back(check_koszul_eulerian(m));
  } else {
    out.skipped.push_back({out.subject, "koszul_eulerian", "some components are truncations"});
  }
  if (m.box_complete())
    out.checks.push_back(check_gtam(m));
  else
    out.skipped.push_back({out.subject, "gtam", "some components are truncations"});
  out.checks.push_back(search_injective_form(m, candidate_ladder(m.variables())));
}

CheckResult setup_failure(const std::string& what) {
  CheckResult r;
  r.name = "setup";
  r.statement = "the subject can be built";
  r.verdict = Verdict::Fail;
  r.reason = what;
  return r;
}

}  // namespace

SubjectChecks check_ideal_module(const MonomialIdeal& ideal, std::size_t i, int lo, int hi, const Box& box) {
  SubjectChecks out;
  out.subject = "H^" + std::to_string(i) + " for I = (" + to_string(ideal) + "), m = " +
                std::to_string(ideal.variables()) + ", window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  out.description = {{"kind", "ideal"}, {"ideal", to_string(ideal)}, {"m", ideal.variables()}, {"i", i},
                     {"window", {lo, hi}},  {"box", box.bound}};
  try {
    const auto statuses = zdegree_statuses(ideal, i, lo, hi, box);
    WindowModule m = assemble_window_module(ideal, i, lo, hi, box);
    DegreePattern scan = pattern_from_statuses(ideal.variables(), statuses);
    scan.complete_below = m.complete_below();
    scan.complete_above = m.complete_above();
    const DegreePattern mod = pattern_from_module(m);
    out.description["pattern"] = pattern_text(scan);
    out.description["box_complete"] = m.box_complete();
    module_checks(out, m, scan);
    out.checks.push_back(check_pattern_agreement(scan, mod));
  } catch (const std::exception& e) {
    out.checks.push_back(setup_failure(e.what()));
  }
  return out;
}

SubjectChecks check_module(const std::string& subject, const WindowModule& m) {
  SubjectChecks out;
  out.subject = subject;
  const DegreePattern p = pattern_from_module(m);
  out.description = {{"kind", "module"}, {"m", m.variables()}, {"window", {m.lo(), m.hi()}},
                     {"pattern", pattern_text(p)}, {"box_complete", m.box_complete()}};
  try {
    module_checks(out, m, p);
  } catch (const std::exception& e) {
    out.checks.push_back(setup_failure(e.what()));
  }
  return out;
}

namespace {

std::pair<int, int> read_window(const json& entry) {
  if (!entry.contains("window")) throw std::invalid_argument("suite entry needs a window");
  const json& w = entry.at("window");
  if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer())
    throw std::invalid_argument("window must be [lo, hi]");
  const int lo = w[0].get<int>(), hi = w[1].get<int>();
  if (lo > hi) throw std::invalid_argument("window lower bound exceeds upper bound");
  return {lo, hi};
}

unsigned thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LCG_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

SuiteReport run_suite(const json& config, const std::filesystem::path& base_dir, SuiteOptions options) {
  if (!config.is_object()) throw std::invalid_argument("a suite must be a JSON object");
  std::vector<std::function<SubjectChecks()>> tasks;
  if (!config.contains("entries")) throw std::invalid_argument("a suite needs an \"entries\" list");
  const json& entries = config.at("entries");
  if (!entries.is_array()) throw std::invalid_argument("\"entries\" must be a list");
  try {
    for (const json& entry : entries) {
      const std::string kind = entry.value("kind", "");
      if (kind == "squarefree") {
        const int max_m = entry.value("max_m", 0);
        if (max_m < 1 || max_m > 4) throw std::invalid_argument("max_m must be between 1 and 4");
        const auto [lo, hi] = read_window(entry);
        for (std::size_t m = 1; m <= static_cast<std::size_t>(max_m); ++m)
          for (const auto& ideal : squarefree_ideals(m))
            for (std::size_t i = 0; i <= std::max(ideal.size(), m); ++i)
              tasks.push_back([ideal, i, lo, hi] {
                return check_ideal_module(ideal, i, lo, hi, default_box(ideal, lo, hi));
              });
      } else if (kind == "ideal") {
        const MonomialIdeal ideal = parse_ideal(entry.at("ideal").get<std::string>(), entry.value("m", 0u));
        const auto [lo, hi] = read_window(entry);
        std::optional<Box> box;
        if (entry.contains("box")) {
          box = uniform_box(ideal.variables(), entry.at("box").get<int>());
          validate_box(ideal, *box, lo, hi);
        }
        std::vector<std::size_t> indices;
        if (entry.contains("indices")) {
          indices = entry.at("indices").get<std::vector<std::size_t>>();
        } else {
          for (std::size_t i = 0; i <= std::max(ideal.size(), ideal.variables()); ++i) indices.push_back(i);
        }
        for (std::size_t i : indices) {
          if (i > std::max(ideal.size(), ideal.variables()))
            throw std::invalid_argument("cohomological index " + std::to_string(i) + " out of range");
          tasks.push_back([ideal, i, lo, hi, box] {
            return check_ideal_module(ideal, i, lo, hi, box ? *box : default_box(ideal, lo, hi));
          });
        }
      } else if (kind == "module") {
        const std::string file = entry.at("file").get<std::string>();
        const std::filesystem::path path = base_dir / file;
        tasks.push_back([file, path] {
          std::ifstream in(path);
          if (!in) {
            SubjectChecks out;
            out.subject = "module " + file;
            out.description = {{"kind", "module"}, {"file", file}};
            out.checks.push_back(setup_failure("cannot read " + file));
            return out;
          }
          try {
            SubjectChecks out = check_module("module " + file, module_from_json(json::parse(in)));
            out.description["file"] = file;
            return out;
          } catch (const std::exception& e) {
            SubjectChecks out;
            out.subject = "module " + file;
            out.description = {{"kind", "module"}, {"file", file}};
            out.checks.push_back(setup_failure(e.what()));
            return out;
          }
        });
      } else {
        throw std::invalid_argument("unknown suite entry kind '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed suite entry: ") + e.what());
  } catch (const ParseError& e) {
    throw std::invalid_argument(std::string("bad ideal in suite: ") + e.what());
  }

  SuiteReport report;
  report.subjects.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) report.subjects[k] = tasks[k]();
  };
  const unsigned n = std::min<unsigned>(thread_count(options.threads), static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& s : report.subjects) {
    for (const auto& c : s.checks) {
      if (c.verdict == Verdict::Pass) ++report.passed;
      if (c.verdict == Verdict::Fail) ++report.failed;
      if (c.verdict == Verdict::Inconclusive) ++report.inconclusive;
    }
    report.skipped += s.skipped.size();
  }
  return report;
}

std::string SuiteReport::summary_line() const {
  const std::size_t total = passed + failed + inconclusive;
  std::string head;
  if (failed > 0)
    head = std::to_string(failed) + " of " + std::to_string(total) + " checks failed";
  else if (inconclusive > 0)
    head = "no failures, " + std::to_string(inconclusive) + " of " + std::to_string(total) + " checks inconclusive";
  else
    head = "all checks passed";
  return head + " (" + std::to_string(passed) + " passed, " + std::to_string(failed) + " failed, " +
         std::to_string(inconclusive) + " inconclusive, " + std::to_string(skipped) + " skipped)";
}

json SuiteReport::to_json(bool with_timing) const {
  json checks = json::array(), skipped_list = json::array(), subject_list = json::array();
  for (const auto& s : subjects) {
    json d = s.description;
    d["subject"] = s.subject;
    subject_list.push_back(d);
    for (const auto& c : s.checks) {
      json j = lcg::to_json(c, with_timing);
      j["subject"] = s.subject;
      checks.push_back(j);
    }
    for (const auto& k : s.skipped) skipped_list.push_back({{"subject", k.subject}, {"name", k.name}, {"reason", k.reason}});
  }
  json summary = {{"passed", passed},       {"failed", failed},   {"inconclusive", inconclusive},
                  {"skipped", skipped},     {"total", passed + failed + inconclusive},
                  {"message", summary_line()}};
  return {{"format", "lcg-verification-report"}, {"version", 1},        {"subjects", subject_list},
          {"checks", checks},                    {"skipped", skipped_list}, {"summary", summary}};
}

}  // namespace lcg
