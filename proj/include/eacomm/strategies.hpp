#pragma once

// Explicit entanglement-assisted protocols and their exact simulation.

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eacomm/qmat.hpp"
#include "eacomm/scenario.hpp"

namespace eacomm {

// Shared |phi> on A (x) B, channels $_x : A -> C, measurements on C (x) B.
struct EaQuantumStrategy {
  PureState shared_state;
  int dA = 1, dB = 1;
  std::vector<KrausChannel> channels;  // per x
  std::vector<Povm> measurements;      // per y, on C (x) B

  void validate() const;
  int d() const { return channels.empty() ? 0 : channels.front().out_dim(); }
  Scenario scenario() const;
};

// tau^x_CB with common marginal tau_B; measurements per y.
struct EaQuantumStateForm {
  int d = 1, dB = 1;
  std::vector<DensityOperator> states;
  std::vector<Povm> measurements;

  void validate(double tolerance = 1e-9) const;
  Scenario scenario() const;
  // max_x || Tr_C tau^x - Tr_C tau^0 ||_max
  double marginal_spread() const;
};

// Alice measures M_{c|x} on A and sends c; Bob measures M_{b|y,c} on B.
struct EaClassicalStrategy {
  PureState shared_state;
  int dA = 1, dB = 1;
  std::vector<Povm> alice;               // per x, d outcomes
  std::vector<std::vector<Povm>> bob;    // [y][c], n_b outcomes

  void validate() const;
  int d() const { return alice.empty() ? 0 : alice.front().outcomes(); }
  Scenario scenario() const;
};

// Unnormalized tau^{c,x}_B with sum_c tau^{c,x}_B = tau_B for all x.
struct EaClassicalStateForm {
  int d = 1, dB = 1;
  std::vector<std::vector<ComplexMatrix>> substates;  // [x][c]
  std::vector<std::vector<Povm>> bob;                 // [y][c]

  void validate(double tolerance = 1e-9) const;
  Scenario scenario() const;
  double marginal_spread() const;
};

Behavior simulate_quantum(const EaQuantumStrategy& s);
Behavior simulate(const EaQuantumStateForm& s);
Behavior simulate_classical(const EaClassicalStrategy& s);
Behavior simulate(const EaClassicalStateForm& s);

EaQuantumStateForm to_state_form(const EaQuantumStrategy& s);
EaClassicalStateForm to_state_form(const EaClassicalStrategy& s);

// Classical message as a dephasing channel: $_x[rho] = sum_c Tr(rho M_{c|x}) |c><c|
// and Bob measures sum_c |c><c| (x) M_{b|y,c}.
EaQuantumStrategy embed_classical(const EaClassicalStrategy& s);

// Classical-quantum states tau^x_CB = sum_c |c><c| (x) tau^{c,x}_B.
EaQuantumStateForm embed_classical(const EaClassicalStateForm& s);

struct BinaryObservable {
  Povm povm;     // outcome 0 on the nonnegative eigenspace
  double value;  // trace norm of the input
};

// Two-outcome measurement maximizing Tr(M_0 H) - Tr(M_1 H).
BinaryObservable optimal_binary_observable(const ComplexMatrix& signed_combo);

// Merge outcomes: element b of the result is the sum of elements o with map[o] == b.
Povm coarse_grain(const Povm& p, const std::vector<int>& map, int outcomes);

// Built-in protocols. Input x = (x1, x2) of the RAC is indexed 2*x1 + x2 and
// bit value 0 is outcome index 0 (E = +1).
EaQuantumStrategy dense_coding();            // Bell measurement, b = x_y post-processed
EaQuantumStrategy dense_coding_bell();       // single 4-outcome Bell measurement
EaQuantumStrategy flagged_qubit_strategy();  // unitaries (1-iX)/sqrt2, 1, X, Y, Z on phi_max
EaQuantumStrategy ququart_strategy();        // phi_max (x) phi_max, CNOT encodings
EaClassicalStrategy chsh_ea_bit();           // one bit plus a maximally entangled pair

nlohmann::json to_json(const EaQuantumStateForm& s);
nlohmann::json to_json(const EaClassicalStateForm& s);
nlohmann::json to_json(const EaQuantumStrategy& s);
nlohmann::json to_json(const EaClassicalStrategy& s);
EaQuantumStateForm quantum_state_form_from_json(const nlohmann::json& j);
EaClassicalStateForm classical_state_form_from_json(const nlohmann::json& j);

}  // namespace eacomm
