#include "lcg/module_json.hpp"

namespace lcg {

namespace {

const char* kSchema = "lcg.window-module/1";

nlohmann::json matrix_json(const Matrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(to_string(a(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const nlohmann::json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw std::invalid_argument("matrix has the wrong number of rows");
  Matrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols) throw std::invalid_argument("matrix row has the wrong length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (row[c].is_string())
        a(r, c) = parse_rational(row[c].get<std::string>());
      else if (row[c].is_number_integer())
        a(r, c) = Rational(row[c].get<long>());
      else
        throw std::invalid_argument("matrix entries must be rational strings or integers");
    }
  }
  return a;
}

void add_action(nlohmann::json& out, const char* op, std::size_t axis, int from, int to, const Action& a) {
  nlohmann::json e{{"op", op}, {"axis", axis}, {"from", from}, {"to", to}, {"matrix", matrix_json(a.map)}};
  if (!a.reliable()) e["escapes"] = a.escapes;
  out.push_back(std::move(e));
}

}  // namespace

nlohmann::json to_json(const WindowModule& m) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["m"] = m.variables();
  j["lo"] = m.lo();
  j["hi"] = m.hi();
  j["complete_below"] = m.complete_below();
  j["complete_above"] = m.complete_above();
  nlohmann::json comps = nlohmann::json::array();
  for (int n = m.lo(); n <= m.hi(); ++n) {
    nlohmann::json c{{"degree", n}, {"dim", m.dim(n)}, {"exact", m.exact(n)}};
    if (m.has_labels()) c["labels"] = m.labels(n);
    comps.push_back(std::move(c));
  }
  j["components"] = std::move(comps);
  nlohmann::json actions = nlohmann::json::array();
  for (std::size_t i = 1; i <= m.variables(); ++i)
    for (int n = m.lo(); n < m.hi(); ++n) add_action(actions, "x", i, n, n + 1, *m.x_action(i, n));
  for (std::size_t i = 1; i <= m.variables(); ++i)
    for (int n = m.lo() + 1; n <= m.hi(); ++n) add_action(actions, "d", i, n, n - 1, *m.d_action(i, n));
  j["actions"] = std::move(actions);
  return j;
}

WindowModule module_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw std::invalid_argument("module must be a JSON object");
    if (j.contains("schema") && j.at("schema") != kSchema)
      throw std::invalid_argument("unsupported schema " + j.at("schema").dump());
    ModuleData d;
    d.m = j.at("m").get<std::size_t>();
    d.lo = j.at("lo").get<int>();
    d.hi = j.at("hi").get<int>();
    if (d.lo > d.hi) throw std::invalid_argument("window lower bound exceeds upper bound");
    d.complete_below = j.value("complete_below", false);
    d.complete_above = j.value("complete_above", false);
    const std::size_t len = static_cast<std::size_t>(d.hi - d.lo) + 1;
    d.dims.assign(len, 0);
    d.exact.assign(len, true);
    std::vector<bool> seen(len, false);
    bool any_labels = false;
    std::vector<std::vector<std::vector<int>>> labels(len);
    for (const auto& c : j.at("components")) {
      int n = c.at("degree").get<int>();
      if (n < d.lo || n > d.hi) throw std::invalid_argument("component degree outside the window");
      std::size_t k = static_cast<std::size_t>(n - d.lo);
      if (seen[k]) throw std::invalid_argument("duplicate component at degree " + std::to_string(n));
      seen[k] = true;
      d.dims[k] = c.at("dim").get<std::size_t>();
      d.exact[k] = c.value("exact", true);
      if (c.contains("labels")) {
        any_labels = true;
        labels[k] = c.at("labels").get<std::vector<std::vector<int>>>();
      }
    }
    for (std::size_t k = 0; k < len; ++k)
      if (!seen[k]) throw std::invalid_argument("missing component at degree " + std::to_string(d.lo + static_cast<int>(k)));
    if (any_labels) d.labels = std::move(labels);
    std::vector<std::vector<std::optional<Action>>> xs(d.m, std::vector<std::optional<Action>>(len - 1));
    std::vector<std::vector<std::optional<Action>>> ds(d.m, std::vector<std::optional<Action>>(len - 1));
    for (const auto& a : j.at("actions")) {
      std::string op = a.at("op").get<std::string>();
      std::size_t axis = a.at("axis").get<std::size_t>();
      int from = a.at("from").get<int>(), to = a.at("to").get<int>();
      if (axis == 0 || axis > d.m) throw std::invalid_argument("action axis out of range");
      bool is_x = op == "x";
      if (!is_x && op != "d") throw std::invalid_argument("action op must be \"x\" or \"d\"");
      if (to != from + (is_x ? 1 : -1)) throw std::invalid_argument("action changes degree incorrectly");
      int src_low = is_x ? from : to;
      if (src_low < d.lo || src_low + 1 > d.hi) throw std::invalid_argument("action outside the window");
      std::size_t k = static_cast<std::size_t>(src_low - d.lo);
      std::size_t rows = d.dims[static_cast<std::size_t>(to - d.lo)], cols = d.dims[static_cast<std::size_t>(from - d.lo)];
      Matrix mat = matrix_from(a.at("matrix"), rows, cols);
      std::vector<bool> esc = a.contains("escapes") ? a.at("escapes").get<std::vector<bool>>() : std::vector<bool>(cols, false);
      auto& slot = (is_x ? xs : ds)[axis - 1][k];
      if (slot) throw std::invalid_argument("duplicate action");
      slot = Action(std::move(mat), std::move(esc));
    }
    d.x.resize(d.m);
    d.d.resize(d.m);
    for (std::size_t i = 0; i < d.m; ++i)
      for (std::size_t k = 0; k + 1 < len; ++k) {
        std::size_t lower = d.dims[k], upper = d.dims[k + 1];
        d.x[i].push_back(xs[i][k] ? *xs[i][k] : Action(Matrix(upper, lower)));
        d.d[i].push_back(ds[i][k] ? *ds[i][k] : Action(Matrix(lower, upper)));
      }
    return WindowModule(std::move(d));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed module JSON: ") + e.what());
  }
}

}  // namespace lcg
