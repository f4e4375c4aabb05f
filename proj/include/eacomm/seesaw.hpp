#pragma once

// Inner bounds by alternating optimization: states for fixed measurements,
// then measurements for fixed states. Every step is an SDP (closed form for
// two-outcome measurements) and the reported value is re-simulated from the
// returned strategy.

#include <cstdint>
#include <vector>

#include "eacomm/scenario.hpp"
#include "eacomm/sdp.hpp"
#include "eacomm/strategies.hpp"

namespace eacomm {

struct SeesawConfig {
  int D = 2;  // local dimension of Bob's share of the entangled state
  int restarts = 10;
  int max_iters = 200;
  double conv_tol = 1e-7;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct SeesawRun {
  int restart = 0;
  int iterations = 0;
  double value = 0.0;
  std::vector<double> history;  // value after every state step
};

struct QuantumSeesawResult {
  BoundReport report;
  EaQuantumStateForm strategy;
  std::vector<SeesawRun> runs;
  int best_restart = 0;
};

struct ClassicalSeesawResult {
  BoundReport report;
  EaClassicalStateForm strategy;
  std::vector<SeesawRun> runs;
  int best_restart = 0;
};

QuantumSeesawResult seesaw_quantum(const Functional& f, int d, const SeesawConfig& cfg);
QuantumSeesawResult seesaw_quantum(const Witness& w, int d, const SeesawConfig& cfg);
ClassicalSeesawResult seesaw_classical(const Functional& f, int d, const SeesawConfig& cfg);
ClassicalSeesawResult seesaw_classical(const Witness& w, int d, const SeesawConfig& cfg);

// Single steps. The state steps return the optimal states for the given
// measurements, repaired to an exactly common marginal; solver_value, when
// given, receives the SDP optimum.
EaQuantumStateForm quantum_state_step(const Functional& f, int d, int D, const std::vector<Povm>& measurements,
                                      double* solver_value = nullptr, const sdp::SolverOptions& opts = {});
std::vector<Povm> quantum_measurement_step(const Functional& f, const EaQuantumStateForm& s);

EaClassicalStateForm classical_state_step(const Functional& f, int d, int D, const std::vector<std::vector<Povm>>& bob,
                                          double* solver_value = nullptr, const sdp::SolverOptions& opts = {});
std::vector<std::vector<Povm>> classical_measurement_step(const Functional& f, const EaClassicalStateForm& s);

// Best measurement for the effective operators K_b: sum_b Re Tr(M_b K_b).
Povm best_measurement(const std::vector<ComplexMatrix>& k);

double witness_value(const Functional& f, const EaQuantumStateForm& s);
double witness_value(const Functional& f, const EaClassicalStateForm& s);

}  // namespace eacomm
