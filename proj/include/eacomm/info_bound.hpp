#pragma once

// Guessing probability of an ensemble and the information measure
// I = -log2 max_x p_x + log2 P_g.

#include <vector>

#include "eacomm/sdp.hpp"
#include "eacomm/strategies.hpp"

namespace eacomm {

struct Ensemble {
  std::vector<double> priors;
  std::vector<DensityOperator> states;

  void validate() const;
  static Ensemble uniform(std::vector<DensityOperator> states);
};

struct Guessing {
  double p_guess = 0.0;   // certified optimum of the SDP
  double attained = 0.0;  // sum_x p_x Tr(rho_x N_x) for the returned POVM
  Povm povm;
};

Guessing guessing_probability(const Ensemble& e, const sdp::SolverOptions& opts = {});
double information(const Ensemble& e, const sdp::SolverOptions& opts = {});
double information(const Ensemble& e, const Guessing& g);

// log2 k + log2 d
double info_dimension_bound(int k, int d);

// I(e) <= I(e with uniform priors) + tolerance
bool uniform_prior_dominance_check(const Ensemble& e, double tolerance = 1e-8);

// Uniform-prior ensembles {tau^x_CB}; classical forms become cq-states
// sum_c |c><c| (x) tau^{c,x}_B.
Ensemble ensemble_of(const EaQuantumStateForm& s);
Ensemble ensemble_of(const EaClassicalStateForm& s);

// Schmidt number used in the bound: 1 for cq-states, the largest exact
// Schmidt rank when every tau^x is pure, d otherwise.
int schmidt_number_bound(const EaQuantumStateForm& s);
inline int schmidt_number_bound(const EaClassicalStateForm&) { return 1; }

}  // namespace eacomm
