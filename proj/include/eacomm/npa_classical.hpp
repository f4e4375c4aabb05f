#pragma once

// Outer bounds for entanglement-assisted classical communication. A d-symbol
// message turns the prepare-and-measure scenario into a Bell scenario in
// which Alice measures x with d outcomes and Bob measures y' = (y, c).

#include <memory>

#include "eacomm/moments.hpp"
#include "eacomm/scenario.hpp"
#include "eacomm/strategies.hpp"

namespace eacomm::npa {

struct BellScenario {
  int inputs_a = 1, outcomes_a = 2;
  int inputs_b = 1, outcomes_b = 2;
};

// Projectors of both parties with the last outcome of every measurement
// removed (it is 1 minus the others). Alice letters precede Bob letters.
class BellAlgebra : public Algebra {
 public:
  explicit BellAlgebra(BellScenario s);

  int alice_letter(int x, int a) const { return x * (s_.outcomes_a - 1) + a; }
  int bob_letter(int y, int b) const { return na_ + y * (s_.outcomes_b - 1) + b; }
  bool is_alice(int l) const { return l < na_; }
  const BellScenario& scenario() const { return s_; }

  int num_letters() const override { return na_ + nb_; }
  std::string letter_name(int letter) const override;
  char letter_group(int letter) const override { return is_alice(letter) ? 'A' : 'B'; }
  int adjoint_letter(int letter) const override { return letter; }
  bool canonicalize(Word& w) const override;

 private:
  int input_of(int l) const;
  BellScenario s_;
  int na_, nb_;
};

struct BellRelaxation {
  BellScenario scenario;
  LevelSpec level;
  int d = 0;  // message size when built from a prepare-and-measure scenario
  std::shared_ptr<const BellAlgebra> algebra;
  MomentProblem problem;

  Polynomial alice_projector(int x, int a) const;
  Polynomial bob_projector(int y, int b) const;
  LinearForm probability(int x, int a, int y, int b);  // p(ab|xy)
};

BellRelaxation build_bell_relaxation(const BellScenario& s, const LevelSpec& level);

// Bell relaxation of a prepare-and-measure scenario with a d-symbol message.
BellRelaxation build_relaxation(const Scenario& s, int d, const LevelSpec& level);

// W = constant + sum coeff(x,y,b) sum_c <A_{c|x} B_{b|y,c}>; also installed as
// the relaxation's objective.
LinearForm witness_objective(BellRelaxation& rel, const Functional& f);

// Generic Bell functional sum coeff[x][a][y][b] p(ab|xy); installed as objective.
LinearForm bell_objective(BellRelaxation& rel, const std::vector<double>& coeff);

struct NpaResult {
  BoundReport report;
  sdp::SdpSolution solution;
  int matrix_size = 0;
  int num_moments = 0;
  int num_equalities = 0;
};

NpaResult solve_relaxation(const MomentProblem& mp, const std::string& method, const std::string& level,
                           const sdp::SolverOptions& opts = {});

NpaResult solve_upper_bound(const Functional& f, int d, const LevelSpec& level, const sdp::SolverOptions& opts = {});
NpaResult solve_upper_bound(const Witness& w, int d, const LevelSpec& level, const sdp::SolverOptions& opts = {});

// Letter operators of an explicit strategy on H_A (x) H_B.
std::vector<ComplexMatrix> strategy_operators(const BellRelaxation& rel, const EaClassicalStrategy& s);

}  // namespace eacomm::npa
