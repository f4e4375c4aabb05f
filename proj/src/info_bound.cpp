#include "eacomm/info_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eacomm {

void Ensemble::validate() const {
  if (priors.empty() || priors.size() != states.size()) throw DimensionError("Ensemble: one prior per state required");
  double s = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) throw std::invalid_argument("Ensemble: negative prior");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("Ensemble: priors must sum to 1");
  for (const auto& r : states)
    if (r.dim() != states.front().dim()) throw DimensionError("Ensemble: states differ in dimension");
}

Ensemble Ensemble::uniform(std::vector<DensityOperator> states) {
  Ensemble e;
  e.priors.assign(states.size(), 1.0 / static_cast<double>(states.size()));
  e.states = std::move(states);
  return e;
}

Guessing guessing_probability(const Ensemble& e, const sdp::SolverOptions& opts) {
  e.validate();
  std::vector<ComplexMatrix> k;
  for (size_t x = 0; x < e.states.size(); ++x) k.push_back(e.priors[x] * e.states[x].matrix());
  sdp::PovmOptimum opt = sdp::optimize_povm(k, opts);
  if (opt.povm.empty()) throw std::runtime_error("guessing_probability: solver " + sdp::to_string(opt.status));
  return {std::min(1.0, opt.value), opt.attained, Povm(opt.povm)};
}

double information(const Ensemble& e, const Guessing& g) {
  const double pmax = *std::max_element(e.priors.begin(), e.priors.end());
  return -std::log2(pmax) + std::log2(g.p_guess);
}

double information(const Ensemble& e, const sdp::SolverOptions& opts) {
  return information(e, guessing_probability(e, opts));
}

double info_dimension_bound(int k, int d) {
  if (k < 1 || d < 1) throw std::invalid_argument("info_dimension_bound: k and d must be >= 1");
  return std::log2(static_cast<double>(k)) + std::log2(static_cast<double>(d));
}

bool uniform_prior_dominance_check(const Ensemble& e, double tolerance) {
  const Ensemble u = Ensemble::uniform(e.states);
  return information(e) <= information(u) + tolerance;
}

Ensemble ensemble_of(const EaQuantumStateForm& s) { return Ensemble::uniform(s.states); }

Ensemble ensemble_of(const EaClassicalStateForm& s) {
  std::vector<DensityOperator> states;
  for (const auto& row : s.substates) {
    ComplexMatrix m = ComplexMatrix::Zero(s.d * s.dB, s.d * s.dB);
    for (int c = 0; c < s.d; ++c) m.block(c * s.dB, c * s.dB, s.dB, s.dB) = row[static_cast<size_t>(c)];
    states.emplace_back(m);
  }
  return Ensemble::uniform(std::move(states));
}

int schmidt_number_bound(const EaQuantumStateForm& s) {
  int k = 1;
  for (const auto& r : s.states) {
    const HermitianEig eig = hermitian_eig(r.matrix());
    const double top = eig.values(0);
    const bool pure = eig.values.size() == 1 || eig.values(1) <= tol::kSchmidtRelative * top;
    if (!pure) return s.d;
    k = std::max(k, schmidt_rank(PureState::normalized(eig.vectors.col(0)), s.d, s.dB));
  }
  return k;
}

}  // namespace eacomm
