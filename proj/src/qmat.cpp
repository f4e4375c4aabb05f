#include "eacomm/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

namespace eacomm {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dA, int dB, Keep keep) {
  if (dA < 1 || dB < 1 || m.rows() != m.cols() || m.rows() != static_cast<Eigen::Index>(dA) * dB)
    throw DimensionError("partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square of size " +
                         std::to_string(dA * dB));
  if (keep == Keep::B) {
    ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
    for (int a = 0; a < dA; ++a) out += m.block(a * dB, a * dB, dB, dB);
    return out;
  }
  ComplexMatrix out(dA, dA);
  for (int a = 0; a < dA; ++a)
    for (int a2 = 0; a2 < dA; ++a2) out(a, a2) = m.block(a * dB, a2 * dB, dB, dB).trace();
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("trace_norm: matrix must be square");
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m, 1e-12)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

bool is_psd(const ComplexMatrix& m, double tolerance) {
  if (!is_hermitian(m, std::max(tolerance, tol::kHermitian))) return false;
  if (m.size() == 0) return true;
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tolerance;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  return true;
}

HermitianEig hermitian_eig(const ComplexMatrix& m, double tolerance) {
  if (!is_hermitian(m, tolerance)) throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  const Eigen::Index n = m.rows();
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const RealVector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ev(a) > ev(b); });

  HermitianEig out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = ev(order[static_cast<size_t>(k)]);
    ComplexVector v = es.eigenvectors().col(order[static_cast<size_t>(k)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        v *= std::conj(v(i)) / std::abs(v(i));
        v(i) = std::abs(v(i));
        break;
      }
    }
    out.vectors.col(k) = v;
  }
  return out;
}

ComplexMatrix eigenspace_projector(const HermitianEig& eig, bool nonnegative) {
  const Eigen::Index n = eig.values.size();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const bool nonneg = eig.values(k) >= 0.0;
    if (nonneg == nonnegative) p += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }
  return p;
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

// ---------------------------------------------------------------- PureState

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw DimensionError("PureState: empty amplitude vector");
  if (std::abs(amplitudes_.norm() - 1.0) > tol::kNorm)
    throw std::invalid_argument("PureState: amplitude vector is not normalized");
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (n <= 0.0) throw std::invalid_argument("PureState: zero vector");
  return PureState(amplitudes / n);
}

PureState PureState::basis(int dim, int index) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return PureState(v);
}

PureState phi_max(int local_dim) {
  ComplexVector v = ComplexVector::Zero(local_dim * local_dim);
  for (int i = 0; i < local_dim; ++i) v(i * local_dim + i) = 1.0 / std::sqrt(static_cast<double>(local_dim));
  return PureState(v);
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState(kron(a.amplitudes(), b.amplitudes()));
}

RealVector schmidt_coefficients(const PureState& psi, int dA, int dB) {
  if (dA * dB != psi.dim())
    throw DimensionError("schmidt: dims " + std::to_string(dA) + "x" + std::to_string(dB) +
                         " do not match state dimension " + std::to_string(psi.dim()));
  ComplexMatrix r(dA, dB);
  for (int a = 0; a < dA; ++a)
    for (int b = 0; b < dB; ++b) r(a, b) = psi.amplitudes()(a * dB + b);
  Eigen::JacobiSVD<ComplexMatrix> svd(r);
  return svd.singularValues();
}

int schmidt_rank(const PureState& psi, int dA, int dB, double relative_tol) {
  RealVector s = schmidt_coefficients(psi, dA, dB);
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cut = relative_tol * s(0);
  return static_cast<int>((s.array() > cut).count());
}

// ---------------------------------------------------------- DensityOperator

DensityOperator::DensityOperator(ComplexMatrix m, bool unnormalized)
    : matrix_(std::move(m)), unnormalized_(unnormalized) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw DimensionError("DensityOperator: matrix must be square and non-empty");
  if (!all_finite(matrix_)) throw std::invalid_argument("DensityOperator: non-finite entries");
  if (!is_hermitian(matrix_)) throw std::invalid_argument("DensityOperator: not Hermitian");
  if (!is_psd(matrix_)) throw std::invalid_argument("DensityOperator: negative eigenvalue");
  const double t = trace();
  if (unnormalized_) {
    if (t > 1.0 + tol::kTrace) throw std::invalid_argument("DensityOperator: trace exceeds one");
  } else if (std::abs(t - 1.0) > tol::kTrace) {
    throw std::invalid_argument("DensityOperator: trace is not one");
  }
}

// --------------------------------------------------------------------- Povm

Povm::Povm(std::vector<ComplexMatrix> elements, double tolerance) : elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
  const auto n = elements_.front().rows();
  for (const auto& e : elements_) {
    if (e.rows() != n || e.cols() != n) throw DimensionError("Povm: inconsistent element dimensions");
    if (!all_finite(e)) throw std::invalid_argument("Povm: non-finite entries");
    if (!is_psd(e, tolerance)) throw std::invalid_argument("Povm: element not positive semidefinite");
  }
  if (completeness_residual() > tolerance) throw std::invalid_argument("Povm: elements do not sum to identity");
}

double Povm::completeness_residual() const {
  ComplexMatrix s = ComplexMatrix::Zero(dim(), dim());
  for (const auto& e : elements_) s += e;
  return (s - ComplexMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

// ------------------------------------------------------------- KrausChannel

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops, double tolerance) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
  out_dim_ = static_cast<int>(ops_.front().rows());
  in_dim_ = static_cast<int>(ops_.front().cols());
  ComplexMatrix s = ComplexMatrix::Zero(in_dim_, in_dim_);
  for (const auto& k : ops_) {
    if (k.rows() != out_dim_ || k.cols() != in_dim_) throw DimensionError("KrausChannel: inconsistent shapes");
    s += k.adjoint() * k;
  }
  if ((s - ComplexMatrix::Identity(in_dim_, in_dim_)).cwiseAbs().maxCoeff() > tolerance)
    throw std::invalid_argument("KrausChannel: not trace preserving");
}

KrausChannel KrausChannel::unitary(const ComplexMatrix& u) { return KrausChannel({u}); }

ComplexMatrix KrausChannel::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != in_dim_) throw DimensionError("KrausChannel::apply: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(out_dim_, out_dim_);
  for (const auto& k : ops_) out += k * rho * k.adjoint();
  return out;
}

ComplexMatrix KrausChannel::apply_first(const ComplexMatrix& rho, int dB) const {
  if (rho.rows() != static_cast<Eigen::Index>(in_dim_) * dB)
    throw DimensionError("KrausChannel::apply_first: dimension mismatch");
  const ComplexMatrix idB = ComplexMatrix::Identity(dB, dB);
  ComplexMatrix out = ComplexMatrix::Zero(out_dim_ * dB, out_dim_ * dB);
  for (const auto& k : ops_) {
    ComplexMatrix kk = kron(k, idB);
    out += kk * rho * kk.adjoint();
  }
  return out;
}

// -------------------------------------------------------------------- gates

namespace pauli {
ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

ComplexMatrix cnot(int control) {
  if (control != 0 && control != 1) throw std::invalid_argument("cnot: control must be 0 or 1");
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      int bits[2] = {a, b};
      if (bits[control] == 1) bits[1 - control] ^= 1;
      u(2 * bits[0] + bits[1], 2 * a + b) = 1.0;
    }
  }
  return u;
}

// ------------------------------------------------------------------- random

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

PureState random_pure_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return PureState::normalized(v);
}

ComplexMatrix random_density(int n, std::mt19937_64& rng, int rank) {
  if (rank <= 0) rank = n;
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix z(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) z(i, j) = cplx(g(rng), g(rng));
  ComplexMatrix rho = z * z.adjoint();
  return rho / rho.trace().real();
}

Povm random_projective_povm(int dim, int outcomes, std::mt19937_64& rng) {
  ComplexMatrix u = random_unitary(dim, rng);
  std::vector<ComplexMatrix> el(static_cast<size_t>(outcomes), ComplexMatrix::Zero(dim, dim));
  for (int k = 0; k < dim; ++k) {
    const int b = static_cast<int>((static_cast<long>(k) * outcomes) / dim);
    el[static_cast<size_t>(b)] += u.col(k) * u.col(k).adjoint();
  }
  return Povm(std::move(el));
}

// --------------------------------------------------------------------- json

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  std::vector<double> re, im;
  re.reserve(static_cast<size_t>(m.size()));
  im.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
  if (static_cast<Eigen::Index>(re.size()) != rows * cols || im.size() != re.size())
    throw DimensionError("matrix_from_json: entry count does not match rows*cols");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
      const auto k = static_cast<size_t>(i * cols + j2);
      m(i, j2) = cplx(re[k], im[k]);
    }
  if (!all_finite(m)) throw std::invalid_argument("matrix_from_json: non-finite entries");
  return m;
}

}  // namespace eacomm
