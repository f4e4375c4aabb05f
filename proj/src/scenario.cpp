#include "eacomm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace eacomm {

std::string to_string(MessageKind k) { return k == MessageKind::classical ? "classical" : "quantum"; }

MessageKind message_kind_from_string(const std::string& s) {
  if (s == "classical") return MessageKind::classical;
  if (s == "quantum") return MessageKind::quantum;
  throw std::invalid_argument("unknown message kind '" + s + "'");
}

static std::string to_string(Assistance a) {
  switch (a) {
    case Assistance::none: return "none";
    case Assistance::shared_randomness: return "shared_randomness";
    case Assistance::entanglement: return "entanglement";
  }
  return "entanglement";
}

static Assistance assistance_from_string(const std::string& s) {
  if (s == "none") return Assistance::none;
  if (s == "shared_randomness") return Assistance::shared_randomness;
  if (s == "entanglement") return Assistance::entanglement;
  throw std::invalid_argument("unknown assistance '" + s + "'");
}

void Scenario::validate() const {
  if (n_x < 1 || n_y < 1 || n_b < 1 || d < 1)
    throw std::invalid_argument("Scenario: n_x, n_y, n_b and d must all be >= 1");
}

// ------------------------------------------------------------------ Behavior

Behavior::Behavior(Scenario s, std::vector<double> table) : scenario_(s), table_(std::move(table)) {
  scenario_.validate();
  if (static_cast<int>(table_.size()) != scenario_.table_size())
    throw DimensionError("Behavior: table has " + std::to_string(table_.size()) + " entries, expected " +
                         std::to_string(scenario_.table_size()));
  for (double v : table_)
    if (!std::isfinite(v) || v < -kTolerance || v > 1.0 + kTolerance)
      throw std::invalid_argument("Behavior: probability outside [0,1]");
  for (int x = 0; x < s.n_x; ++x)
    for (int y = 0; y < s.n_y; ++y) {
      double sum = 0.0;
      for (int b = 0; b < s.n_b; ++b) sum += p(x, y, b);
      if (std::abs(sum - 1.0) > kTolerance)
        throw std::invalid_argument("Behavior: p(.|" + std::to_string(x) + "," + std::to_string(y) +
                                    ") does not sum to one");
    }
}

Behavior Behavior::uniform(const Scenario& s) {
  return Behavior(s, std::vector<double>(static_cast<size_t>(s.table_size()), 1.0 / s.n_b));
}

double Behavior::correlator(int x, int y) const {
  if (scenario_.n_b != 2) throw std::invalid_argument("correlator requires binary outcomes");
  return p(x, y, 0) - p(x, y, 1);
}

// ---------------------------------------------------------------- Functional

double Functional::evaluate(const Behavior& beh) const {
  const auto& s = beh.scenario();
  if (s.n_x != n_x || s.n_y != n_y || s.n_b != n_b) throw DimensionError("Functional: behavior shape mismatch");
  double v = constant;
  for (size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * beh.table()[i];
  return v;
}

double Functional::algebraic_max() const {
  double v = constant;
  for (int x = 0; x < n_x; ++x)
    for (int y = 0; y < n_y; ++y) {
      double best = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < n_b; ++b) best = std::max(best, at(x, y, b));
      v += best;
    }
  return v;
}

// ------------------------------------------------------------------- Witness

void Witness::validate() const {
  scenario.validate();
  if (form == WitnessForm::correlation) {
    if (scenario.n_b != 2) throw std::invalid_argument("Witness: correlation form needs n_b = 2");
    if (coeffs.rows() != scenario.n_x || coeffs.cols() != scenario.n_y)
      throw DimensionError("Witness: coefficient matrix must be n_x x n_y");
  } else if (static_cast<int>(prob_coeffs.size()) != scenario.table_size()) {
    throw DimensionError("Witness: probability coefficients must have n_x*n_y*n_b entries");
  }
  for (const auto& c : constraints) {
    if (c.x < 0 || c.x >= scenario.n_x || c.y < 0 || c.y >= scenario.n_y)
      throw std::invalid_argument("Witness: constraint index out of range");
    if (c.value < -1.0 || c.value > 1.0) throw std::invalid_argument("Witness: constraint value outside [-1,1]");
  }
}

Functional Witness::functional() const {
  Functional f(scenario.n_x, scenario.n_y, scenario.n_b);
  if (form == WitnessForm::correlation) {
    for (int x = 0; x < scenario.n_x; ++x)
      for (int y = 0; y < scenario.n_y; ++y) {
        f.at(x, y, 0) = coeffs(x, y);
        f.at(x, y, 1) = -coeffs(x, y);
      }
  } else {
    f.coeffs = prob_coeffs;
    f.constant = constant;
  }
  return f;
}

double evaluate_witness(const Witness& w, const Behavior& beh) {
  if (!w.scenario.same_shape(beh.scenario())) throw DimensionError("evaluate_witness: shape mismatch");
  return w.functional().evaluate(beh);
}

bool check_constraints(const Witness& w, const Behavior& beh, double tolerance) {
  if (!w.scenario.same_shape(beh.scenario())) throw DimensionError("check_constraints: shape mismatch");
  for (const auto& c : w.constraints)
    if (std::abs(beh.correlator(c.x, c.y) - c.value) > tolerance) return false;
  return true;
}

namespace {

Witness correlation_witness(std::string name, int d, std::initializer_list<std::initializer_list<double>> rows) {
  Witness w;
  w.name = std::move(name);
  const int nx = static_cast<int>(rows.size());
  const int ny = static_cast<int>(rows.begin()->size());
  w.scenario = Scenario{nx, ny, 2, d, MessageKind::quantum, Assistance::entanglement};
  w.coeffs.resize(nx, ny);
  int x = 0;
  for (const auto& r : rows) {
    int y = 0;
    for (double v : r) w.coeffs(x, y++) = v;
    ++x;
  }
  return w;
}

Witness frac_witness(double beta) {
  return correlation_witness("w_frac", 2,
                             {{1, 1, beta}, {1, -1, beta}, {-1, 1, beta}, {-1, -1, beta}, {0, 0, -4 * beta}});
}

}  // namespace

Witness catalog(const std::string& name, double beta) {
  Witness w;
  if (name == "w_rac") {
    w = correlation_witness("w_rac", 2, {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  } else if (name == "w_frac") {
    w = frac_witness(beta);
  } else if (name == "w_rac_flagged") {
    w = frac_witness(0.0);
    w.name = "w_rac_flagged";
    for (int x = 0; x < 4; ++x) w.constraints.push_back({x, 2, 1.0});
    w.constraints.push_back({4, 2, -1.0});
  } else if (name == "w_5") {
    w = correlation_witness("w_5", 2,
                            {{1, 1, 1, 1}, {1, 1, 1, -1}, {1, 1, -1, 0}, {1, -1, 0, 0}, {-1, 0, 0, 0}});
  } else if (name == "rac_9_3") {
    w.name = "rac_9_3";
    w.scenario = Scenario{9, 2, 3, 3, MessageKind::classical, Assistance::entanglement};
    w.form = WitnessForm::probability;
    w.prob_coeffs.assign(static_cast<size_t>(w.scenario.table_size()), 0.0);
    for (int x1 = 0; x1 < 3; ++x1)
      for (int x2 = 0; x2 < 3; ++x2) {
        const int x = 3 * x1 + x2;
        w.prob_coeffs[static_cast<size_t>(w.scenario.index(x, 0, x1))] = 1.0 / 18.0;
        w.prob_coeffs[static_cast<size_t>(w.scenario.index(x, 1, x2))] = 1.0 / 18.0;
      }
  } else {
    throw std::invalid_argument("catalog: unknown witness '" + name + "'");
  }
  w.validate();
  return w;
}

std::vector<std::string> catalog_names() { return {"w_rac", "w_frac", "w_rac_flagged", "w_5", "rac_9_3"}; }

// ------------------------------------------------------------- brute force

double classical_bound_bruteforce(const Functional& f, int d, long long max_encodings) {
  if (d < 1) throw std::invalid_argument("classical_bound_bruteforce: d must be >= 1");
  long long total = 1;
  for (int x = 0; x < f.n_x; ++x) {
    total *= d;
    if (total > max_encodings) throw std::length_error("classical_bound_bruteforce: search space too large");
  }
  std::vector<int> enc(static_cast<size_t>(f.n_x), 0);
  std::vector<double> score(static_cast<size_t>(f.n_b));
  double best = -std::numeric_limits<double>::infinity();
  for (long long e = 0; e < total; ++e) {
    long long r = e;
    for (int x = f.n_x - 1; x >= 0; --x) {
      enc[static_cast<size_t>(x)] = static_cast<int>(r % d);
      r /= d;
    }
    // The decoder for each (y, message) is chosen independently.
    double value = f.constant;
    for (int y = 0; y < f.n_y; ++y)
      for (int c = 0; c < d; ++c) {
        std::fill(score.begin(), score.end(), 0.0);
        bool used = false;
        for (int x = 0; x < f.n_x; ++x) {
          if (enc[static_cast<size_t>(x)] != c) continue;
          used = true;
          for (int b = 0; b < f.n_b; ++b) score[static_cast<size_t>(b)] += f.at(x, y, b);
        }
        if (used) value += *std::max_element(score.begin(), score.end());
      }
    best = std::max(best, value);
  }
  return best;
}

double classical_bound_bruteforce(const Witness& w, int d) { return classical_bound_bruteforce(w.functional(), d); }

// ---------------------------------------------------------------------- json

nlohmann::json to_json(const Scenario& s) {
  return {{"n_x", s.n_x}, {"n_y", s.n_y}, {"n_b", s.n_b}, {"d", s.d},
          {"message_kind", to_string(s.message)}, {"assistance", to_string(s.assistance)}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.n_x = j.at("n_x").get<int>();
  s.n_y = j.at("n_y").get<int>();
  s.n_b = j.at("n_b").get<int>();
  s.d = j.value("d", 2);
  s.message = message_kind_from_string(j.value("message_kind", std::string("quantum")));
  s.assistance = assistance_from_string(j.value("assistance", std::string("entanglement")));
  s.validate();
  return s;
}

nlohmann::json to_json(const Behavior& b) {
  const auto& s = b.scenario();
  nlohmann::json table = nlohmann::json::array();
  for (int x = 0; x < s.n_x; ++x) {
    nlohmann::json rows = nlohmann::json::array();
    for (int y = 0; y < s.n_y; ++y) {
      std::vector<double> ps;
      for (int o = 0; o < s.n_b; ++o) ps.push_back(b.p(x, y, o));
      rows.push_back(ps);
    }
    table.push_back(rows);
  }
  return {{"scenario", to_json(s)}, {"table", table}};
}

Behavior behavior_from_json(const nlohmann::json& j) {
  Scenario s = scenario_from_json(j.at("scenario"));
  std::vector<double> t(static_cast<size_t>(s.table_size()));
  const auto& table = j.at("table");
  if (static_cast<int>(table.size()) != s.n_x) throw DimensionError("behavior_from_json: table shape");
  for (int x = 0; x < s.n_x; ++x) {
    if (static_cast<int>(table[static_cast<size_t>(x)].size()) != s.n_y)
      throw DimensionError("behavior_from_json: table shape");
    for (int y = 0; y < s.n_y; ++y) {
      const auto ps = table[static_cast<size_t>(x)][static_cast<size_t>(y)].get<std::vector<double>>();
      if (static_cast<int>(ps.size()) != s.n_b) throw DimensionError("behavior_from_json: table shape");
      for (int o = 0; o < s.n_b; ++o) t[static_cast<size_t>(s.index(x, y, o))] = ps[static_cast<size_t>(o)];
    }
  }
  return Behavior(s, std::move(t));
}

nlohmann::json to_json(const Witness& w) {
  nlohmann::json j{{"name", w.name}, {"n_x", w.scenario.n_x}, {"n_y", w.scenario.n_y},
                   {"n_b", w.scenario.n_b}, {"d", w.scenario.d}};
  if (w.form == WitnessForm::correlation) {
    nlohmann::json c = nlohmann::json::array();
    for (Eigen::Index x = 0; x < w.coeffs.rows(); ++x) {
      std::vector<double> row;
      for (Eigen::Index y = 0; y < w.coeffs.cols(); ++y) row.push_back(w.coeffs(x, y));
      c.push_back(row);
    }
    j["coeffs"] = c;
  } else {
    j["form"] = "probability";
    const auto& s = w.scenario;
    nlohmann::json c = nlohmann::json::array();
    for (int x = 0; x < s.n_x; ++x) {
      nlohmann::json rows = nlohmann::json::array();
      for (int y = 0; y < s.n_y; ++y) {
        std::vector<double> ps;
        for (int o = 0; o < s.n_b; ++o) ps.push_back(w.prob_coeffs[static_cast<size_t>(s.index(x, y, o))]);
        rows.push_back(ps);
      }
      c.push_back(rows);
    }
    j["coeffs"] = c;
    j["constant"] = w.constant;
  }
  nlohmann::json cons = nlohmann::json::array();
  for (const auto& c : w.constraints) cons.push_back({{"x", c.x}, {"y", c.y}, {"value", c.value}});
  j["constraints"] = cons;
  return j;
}

Witness witness_from_json(const nlohmann::json& j) {
  Witness w;
  w.name = j.value("name", std::string("custom"));
  w.scenario.n_x = j.at("n_x").get<int>();
  w.scenario.n_y = j.at("n_y").get<int>();
  w.scenario.n_b = j.at("n_b").get<int>();
  w.scenario.d = j.value("d", 2);
  const auto& c = j.at("coeffs");
  if (j.value("form", std::string("correlation")) == "probability") {
    w.form = WitnessForm::probability;
    const auto& s = w.scenario;
    w.prob_coeffs.assign(static_cast<size_t>(s.table_size()), 0.0);
    for (int x = 0; x < s.n_x; ++x)
      for (int y = 0; y < s.n_y; ++y) {
        const auto ps = c.at(static_cast<size_t>(x)).at(static_cast<size_t>(y)).get<std::vector<double>>();
        if (static_cast<int>(ps.size()) != s.n_b) throw DimensionError("witness_from_json: coefficient shape");
        for (int o = 0; o < s.n_b; ++o) w.prob_coeffs[static_cast<size_t>(s.index(x, y, o))] = ps[static_cast<size_t>(o)];
      }
    w.constant = j.value("constant", 0.0);
  } else {
    w.coeffs.resize(w.scenario.n_x, w.scenario.n_y);
    if (static_cast<int>(c.size()) != w.scenario.n_x) throw DimensionError("witness_from_json: coefficient shape");
    for (int x = 0; x < w.scenario.n_x; ++x) {
      const auto row = c.at(static_cast<size_t>(x)).get<std::vector<double>>();
      if (static_cast<int>(row.size()) != w.scenario.n_y) throw DimensionError("witness_from_json: coefficient shape");
      for (int y = 0; y < w.scenario.n_y; ++y) w.coeffs(x, y) = row[static_cast<size_t>(y)];
    }
  }
  if (j.contains("constraints"))
    for (const auto& k : j.at("constraints"))
      w.constraints.push_back({k.at("x").get<int>(), k.at("y").get<int>(), k.at("value").get<double>()});
  w.validate();
  return w;
}

nlohmann::json to_json(const BoundReport& r, bool include_time) {
  nlohmann::json j{{"value", r.value},
                   {"direction", r.direction == BoundDirection::upper ? "upper" : "lower"},
                   {"method", r.method},
                   {"status", r.status}};
  j["hierarchy_level"] = r.hierarchy_level ? nlohmann::json(*r.hierarchy_level) : nlohmann::json(nullptr);
  j["duality_gap"] = r.duality_gap ? nlohmann::json(*r.duality_gap) : nlohmann::json(nullptr);
  if (include_time) j["wall_time"] = r.wall_time;
  return j;
}

}  // namespace eacomm
