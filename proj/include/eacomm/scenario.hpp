#pragma once

// Prepare-and-measure scenarios, behaviors p(b|x,y), linear witnesses and the
// built-in witness catalog.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eacomm/qmat.hpp"

namespace eacomm {

enum class MessageKind { classical, quantum };
enum class Assistance { none, shared_randomness, entanglement };

std::string to_string(MessageKind k);
MessageKind message_kind_from_string(const std::string& s);

struct Scenario {
  int n_x = 1;
  int n_y = 1;
  int n_b = 2;
  int d = 2;  // message dimension
  MessageKind message = MessageKind::quantum;
  Assistance assistance = Assistance::entanglement;

  void validate() const;
  int table_size() const { return n_x * n_y * n_b; }
  int index(int x, int y, int b) const { return (x * n_y + y) * n_b + b; }
  bool same_shape(const Scenario& o) const { return n_x == o.n_x && n_y == o.n_y && n_b == o.n_b; }
};

// Conditional probability table p(b|x,y). Outcome index 0 is read as +1 and
// index 1 as -1 for correlators.
class Behavior {
 public:
  Behavior() = default;
  Behavior(Scenario s, std::vector<double> table);
  static Behavior uniform(const Scenario& s);

  const Scenario& scenario() const { return scenario_; }
  double p(int x, int y, int b) const { return table_[static_cast<size_t>(scenario_.index(x, y, b))]; }
  double correlator(int x, int y) const;  // E_xy = p(0|x,y) - p(1|x,y)
  const std::vector<double>& table() const { return table_; }

  static constexpr double kTolerance = 1e-9;

 private:
  Scenario scenario_;
  std::vector<double> table_;
};

// W = constant + sum_{x,y,b} coeff(x,y,b) p(b|x,y)
struct Functional {
  int n_x = 0, n_y = 0, n_b = 0;
  std::vector<double> coeffs;
  double constant = 0.0;

  Functional() = default;
  Functional(int nx, int ny, int nb) : n_x(nx), n_y(ny), n_b(nb), coeffs(static_cast<size_t>(nx * ny * nb), 0.0) {}

  double& at(int x, int y, int b) { return coeffs[static_cast<size_t>((x * n_y + y) * n_b + b)]; }
  double at(int x, int y, int b) const { return coeffs[static_cast<size_t>((x * n_y + y) * n_b + b)]; }
  double evaluate(const Behavior& beh) const;
  // Largest value over all behaviors: constant + sum_{x,y} max_b coeff.
  double algebraic_max() const;
};

struct WitnessConstraint {
  int x = 0, y = 0;
  double value = 0.0;  // required E_xy
};

enum class WitnessForm { correlation, probability };

struct Witness {
  std::string name;
  Scenario scenario;  // d is the default message dimension used by the catalog
  WitnessForm form = WitnessForm::correlation;
  RealMatrix coeffs;                 // correlation form, n_x x n_y
  std::vector<double> prob_coeffs;   // probability form, indexed like Behavior
  double constant = 0.0;             // probability form only
  std::vector<WitnessConstraint> constraints;

  void validate() const;
  Functional functional() const;
};

// sum_{x,y} c_xy E_xy (correlation form) or the probability functional.
double evaluate_witness(const Witness& w, const Behavior& beh);
bool check_constraints(const Witness& w, const Behavior& beh, double tolerance = 1e-9);

// Names: w_rac, w_frac (uses beta), w_rac_flagged (w_frac with beta=0 plus the
// flag constraints), w_5, rac_9_3. Throws std::invalid_argument otherwise.
Witness catalog(const std::string& name, double beta = 4.0);
std::vector<std::string> catalog_names();

// Exact maximum of the functional over deterministic classical strategies
// with a d-symbol message and no entanglement. Throws std::length_error when
// d^n_x exceeds max_encodings.
double classical_bound_bruteforce(const Functional& f, int d, long long max_encodings = 50'000'000LL);
double classical_bound_bruteforce(const Witness& w, int d);

enum class BoundDirection { upper, lower };

struct BoundReport {
  double value = 0.0;
  BoundDirection direction = BoundDirection::upper;
  std::string method;
  std::optional<std::string> hierarchy_level;
  std::optional<double> duality_gap;
  double wall_time = 0.0;  // seconds
  std::string status = "optimal";
};

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Behavior& b);
Behavior behavior_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& j);
// Timing excluded when include_time is false.
nlohmann::json to_json(const BoundReport& r, bool include_time = true);

}  // namespace eacomm
