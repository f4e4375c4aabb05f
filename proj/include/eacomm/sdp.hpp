#pragma once

// Conic problem representation and solver contract.
//
// A problem is
//     optimize   objective . y + objective_constant
//     subject to G_k(y) = G_k0 + sum_i y_i G_ki  PSD   for every block k
//                a_e . y = rhs_e                        for every equality e
// with real variables y. Blocks are real symmetric (or diagonal, i.e. linear
// inequalities). Hermitian blocks are supported through realify(), which maps
// H to [[Re H, -Im H], [Im H, Re H]]; this doubles every eigenvalue's
// multiplicity but leaves the objective untouched because the objective is
// stated on y, not on the matrix.

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eacomm/qmat.hpp"

namespace eacomm::sdp {

enum class Sense { maximize, minimize };

inline constexpr int kConstant = -1;

// Entry (row, col) of a symmetric block, mirrored to (col, row).
struct Term {
  int var = kConstant;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct Block {
  int size = 0;
  bool diagonal = false;
  std::vector<Term> terms;

  Block() = default;
  explicit Block(int n, bool diag = false) : size(n), diagonal(diag) {}
  void add(int var, int row, int col, double value);
  void add_constant(int row, int col, double value) { add(kConstant, row, col, value); }
};

struct LinearEquality {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
};

struct SdpProblem {
  int num_vars = 0;
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  double objective_constant = 0.0;
  std::vector<Block> blocks;
  std::vector<LinearEquality> equalities;

  int add_vars(int n);
  void validate() const;
  RealMatrix block_value(size_t k, const std::vector<double>& y) const;
  double objective_value(const std::vector<double>& y) const;
  double max_equality_residual(const std::vector<double>& y) const;
};

// Entry (row, col) with row <= col of a Hermitian block; (col, row) receives
// the conjugate. Diagonal values must be real.
struct HTerm {
  int var = kConstant;
  int row = 0;
  int col = 0;
  cplx value = 0.0;
};

struct HermitianBlock {
  int size = 0;
  std::vector<HTerm> terms;

  HermitianBlock() = default;
  explicit HermitianBlock(int n) : size(n) {}
  void add(int var, int row, int col, cplx value);
};

// n x n Hermitian matrix variable stored in n^2 consecutive real variables:
// diagonal entries first, then (Re, Im) of each strictly-upper entry.
struct HermitianVar {
  int first = 0;
  int n = 0;

  int count() const { return n * n; }
  int diag(int r) const { return first + r; }
  int re(int r, int c) const { return first + n + 2 * pair_index(r, c); }
  int im(int r, int c) const { return re(r, c) + 1; }
  int pair_index(int r, int c) const { return r * n - r * (r + 1) / 2 + (c - r - 1); }

  // block[offset + r, offset + c] += scale * X[r, c]
  void add_to(HermitianBlock& block, int row_offset, int col_offset, double scale) const;
  // Coefficients of Re Tr(X * op) on this variable's entries, accumulated.
  void add_trace_with(std::vector<double>& coeffs, const ComplexMatrix& op, double scale = 1.0) const;
  ComplexMatrix value(const std::vector<double>& y) const;
};

struct HermitianSdpProblem {
  int num_vars = 0;
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  double objective_constant = 0.0;
  std::vector<HermitianBlock> blocks;
  std::vector<Block> real_blocks;
  std::vector<LinearEquality> equalities;

  int add_vars(int n);
  HermitianVar add_hermitian(int n);
  ComplexMatrix block_value(size_t k, const std::vector<double>& y) const;
};

SdpProblem realify(const HermitianSdpProblem& h);

enum class SolveStatus { optimal, near_optimal, infeasible, unbounded, failed };
std::string to_string(SolveStatus s);

struct SolverOptions {
  double gap_tol = 1e-8;        // relative duality gap
  double feas_tol = 1e-9;       // relative primal / dual infeasibility
  int max_iters = 120;
  double step_fraction = 0.95;
  bool verbose = false;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::failed;
  double primal_value = 0.0;  // objective at the returned y
  double dual_value = 0.0;    // certificate value from the dual iterate
  double duality_gap = 0.0;   // |primal - dual|
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::vector<double> x;      // values of the problem variables
  // Dual matrix of every block (a column vector for diagonal blocks). For a
  // maximization these satisfy G_ki . Y = -objective_i and bound the optimum by
  // sum_k G_k0 . Y_k + constant.
  std::vector<RealMatrix> dual_blocks;
  std::string message;

  bool ok() const { return status == SolveStatus::optimal || status == SolveStatus::near_optimal; }
  // Bound that does not under-report: max(primal, dual) when maximizing,
  // min(primal, dual) when minimizing.
  double safe_bound(Sense sense) const;
};

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts = {});
SdpSolution solve(const HermitianSdpProblem& p, const SolverOptions& opts = {});

// Hermitian dual matrices W_k of a solved problem, one per Hermitian block,
// normalized so that Re Tr(G W) equals the realified pairing.
std::vector<ComplexMatrix> hermitian_duals(const HermitianSdpProblem& p, const SdpSolution& s);

// max sum_b Re Tr(M_b K_b) over POVMs {M_b}, solved through its dual
// min Tr Z s.t. Z >= K_b. The POVM is read off the dual iterate and
// projected onto exact completeness.
struct PovmOptimum {
  double value = 0.0;       // certified upper value Tr Z
  double attained = 0.0;    // sum_b Re Tr(M_b K_b) of the returned POVM
  std::vector<ComplexMatrix> povm;
  SolveStatus status = SolveStatus::failed;
};
PovmOptimum optimize_povm(const std::vector<ComplexMatrix>& k, const SolverOptions& opts = {});

// SDPA sparse format. The problem is written as
//     minimize c . y  s.t.  sum_i y_i F_i - F_0 PSD
// with c = -objective for maximization problems. Equalities are appended as
// a final diagonal block holding each equality twice (>= and <=). Comment
// lines starting with '*' record the sense, the objective constant and the
// equality block so that import_sdpa restores the same structure.
void export_sdpa(const SdpProblem& p, std::ostream& os);
void export_sdpa(const SdpProblem& p, const std::string& path);
SdpProblem import_sdpa(std::istream& is);
SdpProblem import_sdpa_file(const std::string& path);

nlohmann::json to_json(const SdpProblem& p);

}  // namespace eacomm::sdp
