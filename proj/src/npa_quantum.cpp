#include "eacomm/npa_quantum.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace eacomm::npa {

HybridAlgebra::HybridAlgebra(int n_x, int n_y, int n_b, int d, bool eliminate_last_outcome)
    : n_x_(n_x), n_y_(n_y), n_b_(n_b), d_(d), kept_(eliminate_last_outcome ? n_b - 1 : n_b) {
  if (n_x < 1 || n_y < 1 || n_b < 1 || d < 1) throw std::invalid_argument("HybridAlgebra: counts must be >= 1");
}

std::string HybridAlgebra::letter_name(int l) const {
  if (l < n_x_ * d_) return "U" + std::to_string(l / d_) + "." + std::to_string(l % d_);
  if (is_u(l)) {
    l -= n_x_ * d_;
    return "U" + std::to_string(l / d_) + "." + std::to_string(l % d_) + "*";
  }
  l -= 2 * n_x_ * d_;
  const int k = l % d_, j = (l / d_) % d_, yb = l / (d_ * d_);
  return "M" + std::to_string(yb % kept_) + "|" + std::to_string(yb / kept_) + "." + std::to_string(j) + std::to_string(k);
}

int HybridAlgebra::adjoint_letter(int l) const {
  if (l < n_x_ * d_) return l + n_x_ * d_;
  if (is_u(l)) return l - n_x_ * d_;
  const int base = 2 * n_x_ * d_;
  const int r = l - base;
  const int k = r % d_, j = (r / d_) % d_, yb = r / (d_ * d_);
  return base + (yb * d_ + k) * d_ + j;
}

bool HybridAlgebra::canonicalize(Word& w) const {
  std::stable_partition(w.begin(), w.end(), [&](int l) { return is_u(l); });
  return true;
}

Polynomial HybridRelaxation::m_block(int b, int y, int j, int k) const {
  const int kept = algebra->kept_outcomes();
  if (b < kept) return {{1.0, {algebra->m(b, y, j, k)}}};
  Polynomial p;
  if (j == k) p.push_back({1.0, {}});
  for (int c = 0; c < kept; ++c) p.push_back({-1.0, {algebra->m(c, y, j, k)}});
  return p;
}

LinearForm HybridRelaxation::probability(int x, int y, int b) {
  Polynomial p;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (const auto& t : m_block(b, y, j, k)) {
        Word w = {algebra->ud(x, j), algebra->u(x, k)};
        w.insert(w.end(), t.word.begin(), t.word.end());
        p.push_back({t.coef, std::move(w)});
      }
  auto f = problem.expectation(p, false);
  if (!f) throw std::logic_error("HybridRelaxation: probability moment missing from the moment matrix");
  return *f;
}

HybridRelaxation build_hybrid(const Scenario& s, int d, const LevelSpec& level, const HybridOptions& opts) {
  if (d < 1) throw std::invalid_argument("build_hybrid: d must be >= 1");
  auto alg = std::make_shared<const HybridAlgebra>(s.n_x, s.n_y, s.n_b, d, opts.eliminate_last_outcome);
  HybridRelaxation rel{s, d, level, opts, alg, MomentProblem(alg)};
  const int kept = alg->kept_outcomes();

  std::vector<Word> basis = generate_basis(*alg, level);
  std::unordered_set<Word, WordHash> seen(basis.begin(), basis.end());
  auto append = [&](Word w) {
    alg->canonicalize(w);
    if (seen.insert(w).second) basis.push_back(std::move(w));
  };
  for (int x = 0; x < s.n_x; ++x)
    for (int j = 0; j < d; ++j) append({alg->ud(x, j), alg->u(x, j)});
  for (int x = 0; x < s.n_x; ++x)
    for (int y = 0; y < s.n_y; ++y)
      for (int b = 0; b < kept; ++b)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) append({alg->ud(x, j), alg->u(x, k), alg->m(b, y, j, k)});
  rel.problem.set_basis(std::move(basis));

  // sum_j U_{x;j}^dag U_{x;j} = 1
  for (int x = 0; x < s.n_x; ++x) {
    Polynomial p = {{-1.0, {}}};
    for (int j = 0; j < d; ++j) p.push_back({1.0, {alg->ud(x, j), alg->u(x, j)}});
    rel.problem.impose_identity(p);
  }
  // sum_b M_{b|y;jk} = delta_jk when every outcome is a letter
  if (!opts.eliminate_last_outcome)
    for (int y = 0; y < s.n_y; ++y)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          Polynomial p;
          if (j == k) p.push_back({-1.0, {}});
          for (int b = 0; b < s.n_b; ++b) p.push_back({1.0, {alg->m(b, y, j, k)}});
          rel.problem.impose_identity(p);
        }
  // sum_k M_{b|y;jk} M_{b'|y;kl} = delta_bb' M_{b|y;jl}
  for (int y = 0; y < s.n_y; ++y)
    for (int b = 0; b < kept; ++b)
      for (int b2 = 0; b2 < kept; ++b2)
        for (int j = 0; j < d; ++j)
          for (int l = 0; l < d; ++l) {
            Polynomial p;
            for (int k = 0; k < d; ++k) p.push_back({1.0, {alg->m(b, y, j, k), alg->m(b2, y, k, l)}});
            if (b == b2) p.push_back({-1.0, {alg->m(b, y, j, l)}});
            rel.problem.impose_identity(p);
          }
  if (opts.positivity)
    for (int x = 0; x < s.n_x; ++x)
      for (int y = 0; y < s.n_y; ++y)
        for (int b = 0; b < s.n_b; ++b) rel.problem.add_nonnegative(rel.probability(x, y, b));
  return rel;
}

LinearForm hybrid_objective(HybridRelaxation& rel, const Functional& f) {
  const Scenario& s = rel.scenario;
  if (f.n_x != s.n_x || f.n_y != s.n_y || f.n_b != s.n_b)
    throw DimensionError("hybrid_objective: functional does not match the relaxation");
  LinearForm obj;
  obj.constant = f.constant;
  for (int x = 0; x < s.n_x; ++x)
    for (int y = 0; y < s.n_y; ++y)
      for (int b = 0; b < s.n_b; ++b) {
        const double w = f.at(x, y, b);
        if (w == 0.0) continue;
        LinearForm p = rel.probability(x, y, b);
        obj.constant += w * p.constant;
        for (const auto& [i, v] : p.terms) obj.terms.emplace_back(i, w * v);
      }
  obj.normalize();
  rel.problem.set_objective(obj);
  return obj;
}

NpaResult solve_upper_bound_quantum(const Functional& f, int d, const LevelSpec& level, const HybridOptions& hopts,
                                    const sdp::SolverOptions& opts) {
  Scenario s;
  s.n_x = f.n_x;
  s.n_y = f.n_y;
  s.n_b = f.n_b;
  s.d = d;
  HybridRelaxation rel = build_hybrid(s, d, level, hopts);
  hybrid_objective(rel, f);
  return solve_relaxation(rel.problem, "npa_quantum", level.label(), opts);
}

NpaResult solve_upper_bound_quantum(const Witness& w, int d, const LevelSpec& level, const HybridOptions& hopts,
                                    const sdp::SolverOptions& opts) {
  if (!w.constraints.empty())
    throw std::invalid_argument("solve_upper_bound_quantum: hard witness constraints are not supported; use the penalized form");
  return solve_upper_bound_quantum(w.functional(), d, level, hopts, opts);
}

std::vector<ComplexMatrix> hybrid_operators(const HybridRelaxation& rel, const EaQuantumStrategy& s) {
  s.validate();
  const Scenario& sc = rel.scenario;
  if (s.d() != rel.d || static_cast<int>(s.channels.size()) != sc.n_x || static_cast<int>(s.measurements.size()) != sc.n_y)
    throw DimensionError("hybrid_operators: strategy does not match the relaxation");
  const HybridAlgebra& alg = *rel.algebra;
  const int d = rel.d;
  const ComplexMatrix ia = identity(s.dA), ib = identity(s.dB);
  std::vector<ComplexMatrix> ops(static_cast<size_t>(alg.num_letters()));
  for (int x = 0; x < sc.n_x; ++x) {
    const auto& kraus = s.channels[static_cast<size_t>(x)].kraus_ops();
    if (static_cast<int>(kraus.size()) > s.dA)
      throw std::invalid_argument("hybrid_operators: channel Kraus rank exceeds the sender's dimension");
    for (int j = 0; j < d; ++j) {
      ComplexMatrix uj = ComplexMatrix::Zero(s.dA, s.dA);
      for (size_t i = 0; i < kraus.size(); ++i) uj.row(static_cast<Eigen::Index>(i)) = kraus[i].row(j);
      ops[static_cast<size_t>(alg.u(x, j))] = kron(uj, ib);
      ops[static_cast<size_t>(alg.ud(x, j))] = kron(uj.adjoint(), ib);
    }
  }
  for (int y = 0; y < sc.n_y; ++y)
    for (int b = 0; b < alg.kept_outcomes(); ++b) {
      const ComplexMatrix& mb = s.measurements[static_cast<size_t>(y)][b];
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          ops[static_cast<size_t>(alg.m(b, y, j, k))] = kron(ia, mb.block(j * s.dB, k * s.dB, s.dB, s.dB));
    }
  return ops;
}

}  // namespace eacomm::npa
