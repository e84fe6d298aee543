#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "heis/experiments.hpp"
#include "heis/group.hpp"

namespace heis {

namespace {

std::string describe(const std::string& field, const std::string& message, int line) {
  std::string s = "config";
  if (line > 0) s += " line " + std::to_string(line);
  s += ": " + field + ": " + message;
  return s;
}

template <class T>
void read(const Json& j, const char* key, T& dst, const std::vector<std::pair<std::string, int>>& lines) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    int line = 0;
    for (const auto& [k, l] : lines)
      if (k == key) line = l;
    throw ConfigError(key, "wrong type (" + std::string(e.what()) + ")", line);
  }
}

template <class T>
void read_optional(const Json& j, const char* key, std::optional<T>& dst,
                   const std::vector<std::pair<std::string, int>>& lines) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    dst.reset();
    return;
  }
  T v{};
  read(j, key, v, lines);
  dst = v;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message, int line)
    : std::runtime_error(describe(field, message, line)), field_(std::move(field)), message_(message), line_(line) {}

int ExperimentConfig::kohn_truncation() const { return kohn_N.value_or(8); }

int ExperimentConfig::rumin_truncation() const { return rumin_N.value_or(n == 1 ? 14 : 9); }

std::pair<double, double> ExperimentConfig::lambda_range() const {
  const double c = std::abs(FrameConvention::from_name(convention).bracket_constant());
  const double edge = c * (0.5 * n + k_max);
  return {lambda_min.value_or(-edge), lambda_max.value_or(edge)};
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 3) throw ConfigError("n", "must be in 1..3");
  if (cfg.N < 4) throw ConfigError("N", "must be at least 4");
  try {
    FrameConvention::from_name(cfg.convention);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("convention", e.what());
  }
  if (!(cfg.tol_scale > 0.0)) throw ConfigError("tol_scale", "must be positive");
  if (cfg.suites.empty()) throw ConfigError("suites", "empty suite list");
  std::set<std::string> seen;
  for (const auto& s : cfg.suites) {
    if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
      throw ConfigError("suites", "unknown suite '" + s + "'");
    if (!seen.insert(s).second) throw ConfigError("suites", "duplicate suite '" + s + "'");
  }
  if (!(cfg.lambda_step > 0.0)) throw ConfigError("lambda_step", "must be positive");
  if (cfg.k_max < 0) throw ConfigError("k_max", "must be non-negative");
  if (!(cfg.match_window > 0.0)) throw ConfigError("match_window", "must be positive");
  const auto [lo, hi] = cfg.lambda_range();
  if (!(lo <= hi)) throw ConfigError("lambda_min", "empty lambda grid");
  for (const auto& [p, q] : cfg.pq)
    if (p < 0 || q < 0 || p > cfg.n || q > cfg.n) throw ConfigError("pq", "bidegree out of range");
  if (cfg.levels.empty()) throw ConfigError("levels", "empty level list");
  for (int k : cfg.levels)
    if (k < 0) throw ConfigError("levels", "negative level");
  if (cfg.kohn_truncation() < 4) throw ConfigError("kohn_N", "must be at least 4");
  if (cfg.rumin_truncation() <= cfg.n + 1) throw ConfigError("rumin_N", "must exceed n + 1");
  if (cfg.hodge_N < 4) throw ConfigError("hodge_N", "must be at least 4");
  if (cfg.sandbox_complexes < 1) throw ConfigError("sandbox_complexes", "must be positive");
  if (cfg.trace_pairs < 1) throw ConfigError("trace_pairs", "must be positive");
  const std::pair<const char*, double> tols[] = {
      {"parametrix", cfg.tol.parametrix},   {"projection", cfg.tol.projection},
      {"szego", cfg.tol.szego},             {"rumin_square", cfg.tol.rumin_square},
      {"rumin_projection", cfg.tol.rumin_projection}, {"trace", cfg.tol.trace},
      {"sandbox", cfg.tol.sandbox},         {"hodge", cfg.tol.hodge},
      {"log_coefficient", cfg.tol.log_coefficient},   {"dip", cfg.tol.dip},
      {"floor", cfg.tol.floor}};
  for (const auto& [name, v] : tols)
    if (!(v > 0.0)) throw ConfigError(std::string("tolerances.") + name, "must be positive");
  if (!cfg.corrupt.empty() && cfg.corrupt != "laplacian_weight")
    throw ConfigError("corrupt", "unknown fault '" + cfg.corrupt + "'");
}

Json to_json(const ExperimentConfig& cfg) {
  Json pq = Json::array();
  for (const auto& [p, q] : cfg.pq) pq.push_back({p, q});
  Json tol = {{"parametrix", cfg.tol.parametrix},
              {"projection", cfg.tol.projection},
              {"szego", cfg.tol.szego},
              {"rumin_square", cfg.tol.rumin_square},
              {"rumin_projection", cfg.tol.rumin_projection},
              {"trace", cfg.tol.trace},
              {"sandbox", cfg.tol.sandbox},
              {"hodge", cfg.tol.hodge},
              {"log_coefficient", cfg.tol.log_coefficient},
              {"dip", cfg.tol.dip},
              {"floor", cfg.tol.floor}};
  return Json{{"n", cfg.n},
              {"N", cfg.N},
              {"convention", cfg.convention},
              {"seed", cfg.seed},
              {"tol_scale", cfg.tol_scale},
              {"suites", cfg.suites},
              {"lambda_min", optional_json(cfg.lambda_min)},
              {"lambda_max", optional_json(cfg.lambda_max)},
              {"lambda_step", cfg.lambda_step},
              {"k_max", cfg.k_max},
              {"match_window", cfg.match_window},
              {"pq", pq},
              {"levels", cfg.levels},
              {"kohn_N", optional_json(cfg.kohn_N)},
              {"rumin_N", optional_json(cfg.rumin_N)},
              {"hodge_N", cfg.hodge_N},
              {"sandbox_complexes", cfg.sandbox_complexes},
              {"trace_pairs", cfg.trace_pairs},
              {"trace_refinement", cfg.trace_refinement},
              {"log_family", cfg.log_family},
              {"tolerances", tol},
              {"out", cfg.out},
              {"corrupt", cfg.corrupt}};
}

ExperimentConfig config_from_json(const Json& j, const std::vector<std::pair<std::string, int>>& lines) {
  if (!j.is_object()) throw ConfigError("<root>", "expected an object");
  static const std::set<std::string> keys = {
      "n",      "N",           "convention", "seed",       "tol_scale",         "suites",      "lambda_min",
      "lambda_max", "lambda_step", "k_max",  "match_window", "pq",              "levels",      "kohn_N",
      "rumin_N", "hodge_N",    "sandbox_complexes", "trace_pairs", "trace_refinement", "log_family", "tolerances",
      "out",    "corrupt"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.count(it.key())) {
      int line = 0;
      for (const auto& [k, l] : lines)
        if (k == it.key()) line = l;
      throw ConfigError(it.key(), "unknown key", line);
    }
  }
  ExperimentConfig c;
  read(j, "n", c.n, lines);
  read(j, "N", c.N, lines);
  read(j, "convention", c.convention, lines);
  read(j, "seed", c.seed, lines);
  read(j, "tol_scale", c.tol_scale, lines);
  read(j, "suites", c.suites, lines);
  read_optional(j, "lambda_min", c.lambda_min, lines);
  read_optional(j, "lambda_max", c.lambda_max, lines);
  read(j, "lambda_step", c.lambda_step, lines);
  read(j, "k_max", c.k_max, lines);
  read(j, "match_window", c.match_window, lines);
  if (j.contains("pq")) {
    std::vector<std::vector<int>> raw;
    read(j, "pq", raw, lines);
    c.pq.clear();
    for (const auto& e : raw) {
      if (e.size() != 2) throw ConfigError("pq", "entries must be [p, q]");
      c.pq.emplace_back(e[0], e[1]);
    }
  }
  read(j, "levels", c.levels, lines);
  read_optional(j, "kohn_N", c.kohn_N, lines);
  read_optional(j, "rumin_N", c.rumin_N, lines);
  read(j, "hodge_N", c.hodge_N, lines);
  read(j, "sandbox_complexes", c.sandbox_complexes, lines);
  read(j, "trace_pairs", c.trace_pairs, lines);
  read(j, "trace_refinement", c.trace_refinement, lines);
  read(j, "log_family", c.log_family, lines);
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    static const std::set<std::string> tkeys = {"parametrix", "projection", "szego",     "rumin_square",
                                                "rumin_projection", "trace", "sandbox", "hodge",
                                                "log_coefficient", "dip",    "floor"};
    for (auto it = t.begin(); it != t.end(); ++it)
      if (!tkeys.count(it.key())) throw ConfigError("tolerances." + it.key(), "unknown key");
    read(t, "parametrix", c.tol.parametrix, lines);
    read(t, "projection", c.tol.projection, lines);
    read(t, "szego", c.tol.szego, lines);
    read(t, "rumin_square", c.tol.rumin_square, lines);
    read(t, "rumin_projection", c.tol.rumin_projection, lines);
    read(t, "trace", c.tol.trace, lines);
    read(t, "sandbox", c.tol.sandbox, lines);
    read(t, "hodge", c.tol.hodge, lines);
    read(t, "log_coefficient", c.tol.log_coefficient, lines);
    read(t, "dip", c.tol.dip, lines);
    read(t, "floor", c.tol.floor, lines);
  }
  read(j, "out", c.out, lines);
  read(j, "corrupt", c.corrupt, lines);
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("<json>", e.what());
    }
    auto cfg = config_from_json(j);
    validate(cfg);
    return cfg;
  }
  Json j = Json::object();
  std::vector<std::pair<std::string, int>> lines;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("<line>", "expected key = value", lineno);
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("<line>", "missing key", lineno);
    Json v;
    try {
      v = Json::parse(value);
    } catch (const nlohmann::json::parse_error&) {
      v = value;
    }
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
      j[key.substr(0, dot)][key.substr(dot + 1)] = v;
      lines.emplace_back(key.substr(dot + 1), lineno);
    } else {
      j[key] = v;
    }
    lines.emplace_back(key, lineno);
  }
  auto cfg = config_from_json(j, lines);
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    for (const auto& [k, l] : lines)
      if (k == e.field()) throw ConfigError(e.field(), e.message(), l);
    throw;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace heis
