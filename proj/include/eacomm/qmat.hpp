#pragma once

// Dense complex linear algebra and quantum-information primitives.

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace eacomm {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Shape or dimension disagreement between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace tol {
inline constexpr double kHermitian = 1e-10;  // symmetry residual
inline constexpr double kPsd = 1e-9;         // smallest admissible eigenvalue (negated)
inline constexpr double kTrace = 1e-9;
inline constexpr double kNorm = 1e-10;
inline constexpr double kSchmidtRelative = 1e-8;
}  // namespace tol

enum class Keep { A, B };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

// Partial trace of an operator on C^dA (x) C^dB, keeping the selected factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dA, int dB, Keep keep);

double trace_norm(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::kHermitian);
bool is_psd(const ComplexMatrix& m, double tolerance = tol::kPsd);
bool all_finite(const ComplexMatrix& m);

struct HermitianEig {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns, first nonzero component real positive
};

// Eigen-decomposition of a Hermitian matrix. Throws std::invalid_argument on
// non-Hermitian input.
HermitianEig hermitian_eig(const ComplexMatrix& m, double tolerance = tol::kHermitian);

// Projector onto the span of eigenvectors whose eigenvalue satisfies pred.
ComplexMatrix eigenspace_projector(const HermitianEig& eig, bool nonnegative);

ComplexMatrix projector(const ComplexVector& v);
ComplexMatrix identity(int n);

class PureState {
 public:
  PureState() = default;
  explicit PureState(ComplexVector amplitudes);
  static PureState normalized(ComplexVector amplitudes);
  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexMatrix density() const { return projector(amplitudes_); }

 private:
  ComplexVector amplitudes_;
};

PureState phi_max(int local_dim = 2);
PureState tensor(const PureState& a, const PureState& b);

// Number of Schmidt coefficients above tolerance * (largest coefficient).
int schmidt_rank(const PureState& psi, int dA, int dB, double relative_tol = tol::kSchmidtRelative);
RealVector schmidt_coefficients(const PureState& psi, int dA, int dB);

class DensityOperator {
 public:
  DensityOperator() = default;
  // Unnormalized operators only need Tr <= 1.
  explicit DensityOperator(ComplexMatrix m, bool unnormalized = false);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  bool unnormalized() const { return unnormalized_; }
  double trace() const { return matrix_.trace().real(); }

 private:
  ComplexMatrix matrix_;
  bool unnormalized_ = false;
};

class Povm {
 public:
  Povm() = default;
  explicit Povm(std::vector<ComplexMatrix> elements, double tolerance = tol::kPsd);

  int outcomes() const { return static_cast<int>(elements_.size()); }
  int dim() const { return elements_.empty() ? 0 : static_cast<int>(elements_.front().rows()); }
  const ComplexMatrix& operator[](int b) const { return elements_.at(static_cast<size_t>(b)); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

  // Residual || sum_b M_b - 1 ||_max.
  double completeness_residual() const;

 private:
  std::vector<ComplexMatrix> elements_;
};

class KrausChannel {
 public:
  KrausChannel() = default;
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops, double tolerance = tol::kPsd);
  static KrausChannel unitary(const ComplexMatrix& u);

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  // ($ (x) 1_B)[rho] for rho on C^in (x) C^dB.
  ComplexMatrix apply_first(const ComplexMatrix& rho, int dB) const;

 private:
  int in_dim_ = 0;
  int out_dim_ = 0;
  std::vector<ComplexMatrix> ops_;
};

namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

// CNOT on two qubits, big-endian ordering, control on qubit `control` (0 or 1).
ComplexMatrix cnot(int control);

// Random objects for initialization and property tests.
ComplexMatrix random_unitary(int n, std::mt19937_64& rng);
PureState random_pure_state(int n, std::mt19937_64& rng);
ComplexMatrix random_density(int n, std::mt19937_64& rng, int rank = -1);
// Haar-random unitary applied to the computational basis, basis vectors
// split into `outcomes` contiguous groups (sizes as equal as possible).
Povm random_projective_povm(int dim, int outcomes, std::mt19937_64& rng);

// JSON: {"rows","cols","re":[...],"im":[...]}, row-major.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace eacomm
