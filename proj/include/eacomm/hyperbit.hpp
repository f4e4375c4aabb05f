#pragma once

// Hyperbit bound: E_xy = eta_y (a_x . b_y) + (1 - eta_y) t_y for unit
// vectors a_x, b_y, eta_y in [0,1] and t_y = +-1. The bound is linear in
// eta_y for fixed vectors, so the extreme choices eta_y in {0,1} suffice;
// for eta_y = 0 the best t_y contributes |sum_x c_xy|, the remaining inputs
// form a unit-diagonal Gram SDP.

#include <vector>

#include "eacomm/scenario.hpp"
#include "eacomm/sdp.hpp"
#include "eacomm/seesaw.hpp"

namespace eacomm {

struct HyperbitResult {
  BoundReport report;
  std::vector<int> discarded;  // inputs y with eta_y = 0 at the maximum
  RealMatrix gram;             // Gram matrix of (a_x, b_y) for the kept y
};

// Correlation coefficients c_xy and constant of a two-outcome functional.
RealMatrix correlation_coefficients(const Functional& f, double* constant);

HyperbitResult hyperbit_upper_bound(const Functional& f, const sdp::SolverOptions& opts = {});
HyperbitResult hyperbit_upper_bound(const Witness& w, const sdp::SolverOptions& opts = {});

// Objective of the pure Gram problem at explicit vectors (columns of a and b).
double gram_objective(const RealMatrix& c, const RealMatrix& a, const RealMatrix& b);

struct Separation {
  double ea_value = 0.0;
  double hyperbit_bound = 0.0;
  bool separated = false;  // ea_value > hyperbit_bound
};

// Seesaw value of a one-bit EA classical strategy for w against the hyperbit bound.
Separation ea_bit_exceeds_hyperbit_demo(const Witness& w, const SeesawConfig& cfg);
Separation ea_bit_exceeds_hyperbit_demo();

}  // namespace eacomm
