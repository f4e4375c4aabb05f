#include "eacomm/npa_classical.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

namespace eacomm::npa {

BellAlgebra::BellAlgebra(BellScenario s) : s_(s) {
  if (s.inputs_a < 1 || s.inputs_b < 1 || s.outcomes_a < 1 || s.outcomes_b < 1)
    throw std::invalid_argument("BellAlgebra: counts must be >= 1");
  na_ = s.inputs_a * (s.outcomes_a - 1);
  nb_ = s.inputs_b * (s.outcomes_b - 1);
}

int BellAlgebra::input_of(int l) const {
  return is_alice(l) ? l / (s_.outcomes_a - 1) : (l - na_) / (s_.outcomes_b - 1);
}

std::string BellAlgebra::letter_name(int l) const {
  if (is_alice(l)) {
    const int k = s_.outcomes_a - 1;
    return "A" + std::to_string(l % k) + "|" + std::to_string(l / k);
  }
  const int k = s_.outcomes_b - 1;
  return "B" + std::to_string((l - na_) % k) + "|" + std::to_string((l - na_) / k);
}

bool BellAlgebra::canonicalize(Word& w) const {
  std::stable_partition(w.begin(), w.end(), [&](int l) { return is_alice(l); });
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      const int a = w[i], b = w[i + 1];
      if (is_alice(a) != is_alice(b)) continue;
      if (a == b) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        changed = true;
        break;
      }
      if (input_of(a) == input_of(b)) return false;
    }
  }
  return true;
}

Polynomial BellRelaxation::alice_projector(int x, int a) const {
  const int k = scenario.outcomes_a - 1;
  if (a < k) return {{1.0, {algebra->alice_letter(x, a)}}};
  Polynomial p = {{1.0, {}}};
  for (int c = 0; c < k; ++c) p.push_back({-1.0, {algebra->alice_letter(x, c)}});
  return p;
}

Polynomial BellRelaxation::bob_projector(int y, int b) const {
  const int k = scenario.outcomes_b - 1;
  if (b < k) return {{1.0, {algebra->bob_letter(y, b)}}};
  Polynomial p = {{1.0, {}}};
  for (int c = 0; c < k; ++c) p.push_back({-1.0, {algebra->bob_letter(y, c)}});
  return p;
}

LinearForm BellRelaxation::probability(int x, int a, int y, int b) {
  auto f = problem.expectation(poly_product(alice_projector(x, a), bob_projector(y, b)), false);
  if (!f) throw std::logic_error("BellRelaxation: probability moment missing from the moment matrix");
  return *f;
}

BellRelaxation build_bell_relaxation(const BellScenario& s, const LevelSpec& level) {
  auto alg = std::make_shared<const BellAlgebra>(s);
  BellRelaxation rel{s, level, 0, alg, MomentProblem(alg)};
  rel.problem.set_basis(generate_basis(*alg, level));
  return rel;
}

BellRelaxation build_relaxation(const Scenario& s, int d, const LevelSpec& level) {
  if (d < 1) throw std::invalid_argument("build_relaxation: d must be >= 1");
  BellRelaxation rel = build_bell_relaxation({s.n_x, d, s.n_y * d, s.n_b}, level);
  rel.d = d;
  return rel;
}

LinearForm witness_objective(BellRelaxation& rel, const Functional& f) {
  if (rel.d < 1) throw std::invalid_argument("witness_objective: relaxation was not built from a scenario");
  if (f.n_x != rel.scenario.inputs_a || f.n_y * rel.d != rel.scenario.inputs_b || f.n_b != rel.scenario.outcomes_b)
    throw DimensionError("witness_objective: functional does not match the relaxation");
  LinearForm obj;
  obj.constant = f.constant;
  for (int x = 0; x < f.n_x; ++x)
    for (int y = 0; y < f.n_y; ++y)
      for (int b = 0; b < f.n_b; ++b) {
        const double w = f.at(x, y, b);
        if (w == 0.0) continue;
        for (int c = 0; c < rel.d; ++c) {
          LinearForm p = rel.probability(x, c, y * rel.d + c, b);
          obj.constant += w * p.constant;
          for (const auto& [i, v] : p.terms) obj.terms.emplace_back(i, w * v);
        }
      }
  obj.normalize();
  rel.problem.set_objective(obj);
  return obj;
}

LinearForm bell_objective(BellRelaxation& rel, const std::vector<double>& coeff) {
  const BellScenario& s = rel.scenario;
  if (coeff.size() != static_cast<size_t>(s.inputs_a * s.outcomes_a * s.inputs_b * s.outcomes_b))
    throw DimensionError("bell_objective: coefficient count mismatch");
  LinearForm obj;
  size_t k = 0;
  for (int x = 0; x < s.inputs_a; ++x)
    for (int a = 0; a < s.outcomes_a; ++a)
      for (int y = 0; y < s.inputs_b; ++y)
        for (int b = 0; b < s.outcomes_b; ++b, ++k) {
          if (coeff[k] == 0.0) continue;
          LinearForm p = rel.probability(x, a, y, b);
          obj.constant += coeff[k] * p.constant;
          for (const auto& [i, v] : p.terms) obj.terms.emplace_back(i, coeff[k] * v);
        }
  obj.normalize();
  rel.problem.set_objective(obj);
  return obj;
}

NpaResult solve_relaxation(const MomentProblem& mp, const std::string& method, const std::string& level,
                           const sdp::SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  NpaResult r;
  r.matrix_size = mp.matrix_size();
  r.num_moments = mp.num_moments();
  r.num_equalities = static_cast<int>(mp.equalities().size());
  r.solution = sdp::solve(mp.to_sdp(), opts);
  r.report.direction = BoundDirection::upper;
  r.report.method = method;
  r.report.hierarchy_level = level;
  r.report.status = sdp::to_string(r.solution.status);
  if (r.solution.ok()) {
    r.report.value = r.solution.safe_bound(sdp::Sense::maximize);
    r.report.duality_gap = r.solution.duality_gap;
  } else {
    r.report.value = std::numeric_limits<double>::infinity();
  }
  r.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

NpaResult solve_upper_bound(const Functional& f, int d, const LevelSpec& level, const sdp::SolverOptions& opts) {
  Scenario s;
  s.n_x = f.n_x;
  s.n_y = f.n_y;
  s.n_b = f.n_b;
  s.d = d;
  s.message = MessageKind::classical;
  BellRelaxation rel = build_relaxation(s, d, level);
  witness_objective(rel, f);
  return solve_relaxation(rel.problem, "npa_classical", level.label(), opts);
}

NpaResult solve_upper_bound(const Witness& w, int d, const LevelSpec& level, const sdp::SolverOptions& opts) {
  if (!w.constraints.empty())
    throw std::invalid_argument("solve_upper_bound: hard witness constraints are not supported; use the penalized form");
  return solve_upper_bound(w.functional(), d, level, opts);
}

std::vector<ComplexMatrix> strategy_operators(const BellRelaxation& rel, const EaClassicalStrategy& s) {
  s.validate();
  const BellScenario& bs = rel.scenario;
  if (s.d() != bs.outcomes_a || static_cast<int>(s.alice.size()) != bs.inputs_a ||
      static_cast<int>(s.bob.size()) * rel.d != bs.inputs_b)
    throw DimensionError("strategy_operators: strategy does not match the relaxation");
  const ComplexMatrix ia = identity(s.dA), ib = identity(s.dB);
  std::vector<ComplexMatrix> ops(static_cast<size_t>(rel.algebra->num_letters()));
  for (int x = 0; x < bs.inputs_a; ++x)
    for (int a = 0; a + 1 < bs.outcomes_a; ++a)
      ops[static_cast<size_t>(rel.algebra->alice_letter(x, a))] = kron(s.alice[static_cast<size_t>(x)][a], ib);
  for (int y = 0; y < static_cast<int>(s.bob.size()); ++y)
    for (int c = 0; c < rel.d; ++c)
      for (int b = 0; b + 1 < bs.outcomes_b; ++b)
        ops[static_cast<size_t>(rel.algebra->bob_letter(y * rel.d + c, b))] =
            kron(ia, s.bob[static_cast<size_t>(y)][static_cast<size_t>(c)][b]);
  return ops;
}

}  // namespace eacomm::npa
