#pragma once

// Outer bounds for entanglement-assisted quantum communication. Alice's
// encoding unitary is split into blocks U_{x;j} = <j|_C U_x |0>_C and Bob's
// measurement into blocks M_{b|y;jk} = <j|_C M_{b|y} |k>_C, so that
//   p(b|x,y) = sum_{jk} <phi| U_{x;j}^dag U_{x;k} M_{b|y;jk} |phi>.
// U-letters commute with M-letters; the unitarity and projector relations
// are sum rules imposed on the moment matrix.

#include <memory>

#include "eacomm/npa_classical.hpp"

namespace eacomm::npa {

struct HybridOptions {
  // Drop the last outcome of every M and substitute it by completeness.
  bool eliminate_last_outcome = true;
  // Linear constraints p(b|x,y) >= 0 for every (x,y,b).
  bool positivity = true;
};

class HybridAlgebra : public Algebra {
 public:
  HybridAlgebra(int n_x, int n_y, int n_b, int d, bool eliminate_last_outcome);

  int u(int x, int j) const { return x * d_ + j; }
  int ud(int x, int j) const { return n_x_ * d_ + x * d_ + j; }
  int m(int b, int y, int j, int k) const { return 2 * n_x_ * d_ + ((y * kept_ + b) * d_ + j) * d_ + k; }
  bool is_u(int l) const { return l < 2 * n_x_ * d_; }
  int kept_outcomes() const { return kept_; }
  int d() const { return d_; }

  int num_letters() const override { return 2 * n_x_ * d_ + n_y_ * kept_ * d_ * d_; }
  std::string letter_name(int letter) const override;
  char letter_group(int letter) const override { return is_u(letter) ? 'U' : 'M'; }
  int adjoint_letter(int letter) const override;
  bool canonicalize(Word& w) const override;

 private:
  int n_x_, n_y_, n_b_, d_, kept_;
};

struct HybridRelaxation {
  Scenario scenario;
  int d = 1;
  LevelSpec level;
  HybridOptions options;
  std::shared_ptr<const HybridAlgebra> algebra;
  MomentProblem problem;

  // M_{b|y;jk} with the eliminated outcome expanded.
  Polynomial m_block(int b, int y, int j, int k) const;
  LinearForm probability(int x, int y, int b);
};

HybridRelaxation build_hybrid(const Scenario& s, int d, const LevelSpec& level, const HybridOptions& opts = {});

// Installs W as the relaxation's objective.
LinearForm hybrid_objective(HybridRelaxation& rel, const Functional& f);

NpaResult solve_upper_bound_quantum(const Functional& f, int d, const LevelSpec& level, const HybridOptions& hopts = {},
                                    const sdp::SolverOptions& opts = {});
NpaResult solve_upper_bound_quantum(const Witness& w, int d, const LevelSpec& level, const HybridOptions& hopts = {},
                                    const sdp::SolverOptions& opts = {});

// Letter operators on H_A (x) H_B for an explicit strategy whose channels have
// at most dA Kraus operators and whose measurements are projective.
std::vector<ComplexMatrix> hybrid_operators(const HybridRelaxation& rel, const EaQuantumStrategy& s);

}  // namespace eacomm::npa
