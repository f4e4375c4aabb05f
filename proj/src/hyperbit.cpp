#include "eacomm/hyperbit.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eacomm {

RealMatrix correlation_coefficients(const Functional& f, double* constant) {
  if (f.n_b != 2) throw std::invalid_argument("hyperbit: two-outcome functional required");
  RealMatrix c(f.n_x, f.n_y);
  double k = f.constant;
  for (int x = 0; x < f.n_x; ++x)
    for (int y = 0; y < f.n_y; ++y) {
      // p(0) = (1 + E)/2, p(1) = (1 - E)/2
      c(x, y) = 0.5 * (f.at(x, y, 0) - f.at(x, y, 1));
      k += 0.5 * (f.at(x, y, 0) + f.at(x, y, 1));
    }
  if (constant) *constant = k;
  return c;
}

double gram_objective(const RealMatrix& c, const RealMatrix& a, const RealMatrix& b) { return (c.array() * (a.transpose() * b).array()).sum(); }

namespace {

struct GramSolve {
  double value = 0.0;
  RealMatrix gram;
  double gap = 0.0;
};

// max sum_{x, y in kept} c_xy G(a_x, b_y) over unit-diagonal PSD G.
GramSolve solve_gram(const RealMatrix& c, const std::vector<int>& kept, const sdp::SolverOptions& opts) {
  const int nx = static_cast<int>(c.rows());
  const int n = nx + static_cast<int>(kept.size());
  sdp::SdpProblem p;
  std::vector<int> var(static_cast<size_t>(n * n), -1);
  sdp::Block g(n);
  for (int i = 0; i < n; ++i) {
    g.add_constant(i, i, 1.0);
    for (int j = i + 1; j < n; ++j) {
      const int v = p.add_vars(1);
      var[static_cast<size_t>(i * n + j)] = v;
      g.add(v, i, j, 1.0);
    }
  }
  p.blocks.push_back(std::move(g));
  for (int x = 0; x < nx; ++x)
    for (size_t k = 0; k < kept.size(); ++k)
      p.objective[static_cast<size_t>(var[static_cast<size_t>(x * n + nx + static_cast<int>(k))])] = c(x, kept[k]);
  GramSolve out;
  if (kept.empty()) {
    out.gram = RealMatrix::Identity(n, n);
    return out;
  }
  sdp::SdpSolution sol = sdp::solve(p, opts);
  if (!sol.ok()) throw std::runtime_error("hyperbit: Gram SDP " + sdp::to_string(sol.status) + " (" + sol.message + ")");
  out.value = sol.safe_bound(sdp::Sense::maximize);
  out.gap = sol.duality_gap;
  out.gram = p.block_value(0, sol.x);
  return out;
}

}  // namespace

HyperbitResult hyperbit_upper_bound(const Functional& f, const sdp::SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  double constant = 0.0;
  const RealMatrix c = correlation_coefficients(f, &constant);
  const int ny = f.n_y;
  if (ny > 20) throw std::invalid_argument("hyperbit: too many measurement settings to enumerate");
  HyperbitResult best;
  double best_value = -std::numeric_limits<double>::infinity();
  double best_gap = 0.0;
  for (unsigned mask = 0; mask < (1u << ny); ++mask) {
    std::vector<int> kept, discarded;
    double fixed = 0.0;
    for (int y = 0; y < ny; ++y) {
      if (mask & (1u << y)) {
        discarded.push_back(y);
        fixed += std::abs(c.col(y).sum());
      } else {
        kept.push_back(y);
      }
    }
    GramSolve g = solve_gram(c, kept, opts);
    const double v = constant + fixed + g.value;
    if (v > best_value + 1e-12) {
      best_value = v;
      best_gap = g.gap;
      best.discarded = discarded;
      best.gram = g.gram;
    }
  }
  best.report.value = best_value;
  best.report.direction = BoundDirection::upper;
  best.report.method = "hyperbit_gram";
  best.report.duality_gap = best_gap;
  best.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return best;
}

HyperbitResult hyperbit_upper_bound(const Witness& w, const sdp::SolverOptions& opts) {
  if (!w.constraints.empty()) throw std::invalid_argument("hyperbit: hard witness constraints are not supported");
  return hyperbit_upper_bound(w.functional(), opts);
}

Separation ea_bit_exceeds_hyperbit_demo(const Witness& w, const SeesawConfig& cfg) {
  Separation s;
  s.ea_value = seesaw_classical(w, 2, cfg).report.value;
  s.hyperbit_bound = hyperbit_upper_bound(w).report.value;
  s.separated = s.ea_value > s.hyperbit_bound;
  return s;
}

Separation ea_bit_exceeds_hyperbit_demo() {
  SeesawConfig cfg;
  cfg.D = 4;
  cfg.restarts = 20;
  cfg.seed = 7;
  return ea_bit_exceeds_hyperbit_demo(catalog("w_5"), cfg);
}

}  // namespace eacomm
