#include "eacomm/seesaw.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace eacomm {
namespace {

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix clip_psd(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
  RealVector v = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

// m^{1/2}, or the pseudo-inverse square root.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, bool inverse) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
  RealVector v = es.eigenvalues();
  const double cut = 1e-13 * std::max(1.0, v.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) <= cut) v(i) = 0.0;
    else v(i) = inverse ? 1.0 / std::sqrt(v(i)) : std::sqrt(v(i));
  }
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

// S_x with S_x sigma_x S_x^dag = target.
std::vector<ComplexMatrix> marginal_repairs(const std::vector<ComplexMatrix>& sigma, ComplexMatrix* target) {
  ComplexMatrix avg = ComplexMatrix::Zero(sigma.front().rows(), sigma.front().cols());
  for (const auto& s : sigma) avg += s;
  avg = hermitize(avg);
  avg /= avg.trace().real();
  const ComplexMatrix root = psd_sqrt(avg, false);
  std::vector<ComplexMatrix> out;
  for (const auto& s : sigma) out.push_back(root * psd_sqrt(s, true));
  *target = avg;
  return out;
}

void check_functional(const Functional& f, int d, int D) {
  if (f.n_x < 1 || f.n_y < 1 || f.n_b < 1) throw std::invalid_argument("seesaw: empty functional");
  if (d < 1 || D < 1) throw std::invalid_argument("seesaw: dimensions must be >= 1");
}

// O_x = sum_{y,b} c(x,y,b) M_{b|y}
ComplexMatrix effective_operator(const Functional& f, int x, const std::vector<Povm>& meas, int dim) {
  ComplexMatrix o = ComplexMatrix::Zero(dim, dim);
  for (int y = 0; y < f.n_y; ++y)
    for (int b = 0; b < f.n_b; ++b)
      if (f.at(x, y, b) != 0.0) o += f.at(x, y, b) * meas[static_cast<size_t>(y)][b];
  return hermitize(o);
}

void add_constant(sdp::HermitianBlock& blk, const ComplexMatrix& m, double scale) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = r; c < m.cols(); ++c)
      if (m(r, c) != cplx(0.0)) blk.add(sdp::kConstant, r, c, scale * (r == c ? cplx(m(r, c).real()) : m(r, c)));
}

// Variables lambda and Lambda_x (x < n-1); Lambda_{n-1} = lambda 1 - sum_x Lambda_x.
struct DualForm {
  sdp::HermitianSdpProblem p;
  int lambda = 0;
  std::vector<sdp::HermitianVar> lam;
  int D = 1;

  DualForm(int n, int dim) : D(dim) {
    p.sense = sdp::Sense::maximize;
    lambda = p.add_vars(1);
    p.objective[static_cast<size_t>(lambda)] = -1.0;
    for (int x = 0; x + 1 < n; ++x) lam.push_back(p.add_hermitian(dim));
  }

  void add_lambda(sdp::HermitianBlock& blk, int x, int offset) const {
    if (x < static_cast<int>(lam.size())) {
      lam[static_cast<size_t>(x)].add_to(blk, offset, offset, 1.0);
      return;
    }
    for (const auto& v : lam) v.add_to(blk, offset, offset, -1.0);
    for (int r = 0; r < D; ++r) blk.add(lambda, offset + r, offset + r, 1.0);
  }
};

sdp::SdpSolution solve_checked(const sdp::HermitianSdpProblem& p, const sdp::SolverOptions& opts, const char* what) {
  sdp::SdpSolution sol = sdp::solve(p, opts);
  if (!sol.ok()) throw std::runtime_error(std::string(what) + ": solver " + sdp::to_string(sol.status) + " (" + sol.message + ")");
  return sol;
}

Povm random_povm(int dim, int outcomes, std::mt19937_64& rng) { return random_projective_povm(dim, outcomes, rng); }

template <class Form>
struct RunOutput {
  SeesawRun run;
  Form form;
  bool ok = false;
  std::string error;
};

template <class Form, class Init, class Step>
std::vector<RunOutput<Form>> run_restarts(const SeesawConfig& cfg, Init init, Step step) {
  std::vector<RunOutput<Form>> out(static_cast<size_t>(cfg.restarts));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int r = next++; r < cfg.restarts; r = next++) {
      auto& o = out[static_cast<size_t>(r)];
      o.run.restart = r;
      try {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        auto meas = init(rng);
        Form best = step(meas, nullptr);
        double v = best.value;
        o.run.history.push_back(v);
        Form cur = best;
        for (int it = 1; it <= cfg.max_iters; ++it) {
          o.run.iterations = it;
          Form nxt = step(meas, &cur);
          o.run.history.push_back(nxt.value);
          const bool improved = nxt.value > v + cfg.conv_tol;
          if (nxt.value > best.value) best = nxt;
          cur = std::move(nxt);
          if (!improved) break;
          v = cur.value;
        }
        o.run.value = best.value;
        o.form = std::move(best);
        o.ok = true;
      } catch (const std::exception& e) {
        o.error = e.what();
      }
    }
  };
  const int nt = std::max(1, std::min(cfg.threads, cfg.restarts));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

template <class Form>
int pick_best(const std::vector<RunOutput<Form>>& runs) {
  int best = -1;
  for (size_t i = 0; i < runs.size(); ++i)
    if (runs[i].ok && (best < 0 || runs[i].run.value > runs[static_cast<size_t>(best)].run.value)) best = static_cast<int>(i);
  if (best < 0) throw std::runtime_error("seesaw: every restart failed: " + (runs.empty() ? std::string("no restarts") : runs.front().error));
  return best;
}

struct QuantumIterate {
  EaQuantumStateForm s;
  double value = 0.0;
};

struct ClassicalIterate {
  EaClassicalStateForm s;
  double value = 0.0;
};

}  // namespace

void SeesawConfig::validate() const {
  if (D < 1) throw std::invalid_argument("SeesawConfig: D must be >= 1");
  if (restarts < 1) throw std::invalid_argument("SeesawConfig: restarts must be >= 1");
  if (max_iters < 0) throw std::invalid_argument("SeesawConfig: max_iters must be >= 0");
  if (!(conv_tol > 0.0)) throw std::invalid_argument("SeesawConfig: conv_tol must be > 0");
}

Povm best_measurement(const std::vector<ComplexMatrix>& k) {
  if (k.empty()) throw std::invalid_argument("best_measurement: no outcomes");
  const int n = static_cast<int>(k.front().rows());
  if (k.size() == 1) return Povm({identity(n)});
  if (k.size() == 2) return optimal_binary_observable(hermitize(k[0] - k[1])).povm;
  sdp::PovmOptimum opt = sdp::optimize_povm(k);
  if (opt.povm.empty()) throw std::runtime_error("best_measurement: solver " + sdp::to_string(opt.status));
  return Povm(opt.povm);
}

double witness_value(const Functional& f, const EaQuantumStateForm& s) { return f.evaluate(simulate(s)); }
double witness_value(const Functional& f, const EaClassicalStateForm& s) { return f.evaluate(simulate(s)); }

EaQuantumStateForm quantum_state_step(const Functional& f, int d, int D, const std::vector<Povm>& measurements,
                                      double* solver_value, const sdp::SolverOptions& opts) {
  check_functional(f, d, D);
  const int dim = d * D;
  if (static_cast<int>(measurements.size()) != f.n_y) throw DimensionError("quantum_state_step: one POVM per y required");
  for (const auto& m : measurements)
    if (m.dim() != dim || m.outcomes() != f.n_b) throw DimensionError("quantum_state_step: POVM shape");

  // min lambda s.t. 1_C (x) Lambda_x >= O_x, sum_x Lambda_x = lambda 1
  DualForm df(f.n_x, D);
  for (int x = 0; x < f.n_x; ++x) {
    sdp::HermitianBlock blk(dim);
    for (int j = 0; j < d; ++j) df.add_lambda(blk, x, j * D);
    add_constant(blk, effective_operator(f, x, measurements, dim), -1.0);
    df.p.blocks.push_back(std::move(blk));
  }
  sdp::SdpSolution sol = solve_checked(df.p, opts, "quantum_state_step");
  std::vector<ComplexMatrix> tau = sdp::hermitian_duals(df.p, sol);

  std::vector<ComplexMatrix> sigma;
  for (auto& t : tau) {
    t = clip_psd(t);
    sigma.push_back(partial_trace(t, d, D, Keep::B));
  }
  ComplexMatrix tau_b;
  auto fix = marginal_repairs(sigma, &tau_b);
  EaQuantumStateForm out;
  out.d = d;
  out.dB = D;
  out.measurements = measurements;
  for (size_t x = 0; x < tau.size(); ++x) {
    const ComplexMatrix s = kron(identity(d), fix[x]);
    ComplexMatrix t = hermitize(s * tau[x] * s.adjoint());
    t /= t.trace().real();
    out.states.emplace_back(t);
  }
  if (solver_value) *solver_value = -sol.primal_value + f.constant;
  return out;
}

std::vector<Povm> quantum_measurement_step(const Functional& f, const EaQuantumStateForm& s) {
  if (static_cast<int>(s.states.size()) != f.n_x) throw DimensionError("quantum_measurement_step: state count");
  const int dim = s.d * s.dB;
  std::vector<Povm> out;
  for (int y = 0; y < f.n_y; ++y) {
    std::vector<ComplexMatrix> k(static_cast<size_t>(f.n_b), ComplexMatrix::Zero(dim, dim));
    for (int x = 0; x < f.n_x; ++x)
      for (int b = 0; b < f.n_b; ++b) k[static_cast<size_t>(b)] += f.at(x, y, b) * s.states[static_cast<size_t>(x)].matrix();
    out.push_back(best_measurement(k));
  }
  return out;
}

EaClassicalStateForm classical_state_step(const Functional& f, int d, int D, const std::vector<std::vector<Povm>>& bob,
                                          double* solver_value, const sdp::SolverOptions& opts) {
  check_functional(f, d, D);
  if (static_cast<int>(bob.size()) != f.n_y) throw DimensionError("classical_state_step: one POVM row per y required");
  for (const auto& row : bob) {
    if (static_cast<int>(row.size()) != d) throw DimensionError("classical_state_step: one POVM per message symbol");
    for (const auto& m : row)
      if (m.dim() != D || m.outcomes() != f.n_b) throw DimensionError("classical_state_step: POVM shape");
  }

  // min lambda s.t. Lambda_x >= O_{c,x}, sum_x Lambda_x = lambda 1
  DualForm df(f.n_x, D);
  for (int x = 0; x < f.n_x; ++x)
    for (int c = 0; c < d; ++c) {
      std::vector<Povm> col;
      for (int y = 0; y < f.n_y; ++y) col.push_back(bob[static_cast<size_t>(y)][static_cast<size_t>(c)]);
      sdp::HermitianBlock blk(D);
      df.add_lambda(blk, x, 0);
      add_constant(blk, effective_operator(f, x, col, D), -1.0);
      df.p.blocks.push_back(std::move(blk));
    }
  sdp::SdpSolution sol = solve_checked(df.p, opts, "classical_state_step");
  std::vector<ComplexMatrix> w = sdp::hermitian_duals(df.p, sol);

  std::vector<ComplexMatrix> sigma;
  for (int x = 0; x < f.n_x; ++x) {
    ComplexMatrix s = ComplexMatrix::Zero(D, D);
    for (int c = 0; c < d; ++c) {
      auto& t = w[static_cast<size_t>(x * d + c)];
      t = clip_psd(t);
      s += t;
    }
    sigma.push_back(s);
  }
  ComplexMatrix tau_b;
  auto fix = marginal_repairs(sigma, &tau_b);
  EaClassicalStateForm out;
  out.d = d;
  out.dB = D;
  out.bob = bob;
  for (int x = 0; x < f.n_x; ++x) {
    std::vector<ComplexMatrix> row;
    const ComplexMatrix& s = fix[static_cast<size_t>(x)];
    double tr = 0.0;
    for (int c = 0; c < d; ++c) {
      row.push_back(hermitize(s * w[static_cast<size_t>(x * d + c)] * s.adjoint()));
      tr += row.back().trace().real();
    }
    for (auto& t : row) t /= tr;
    out.substates.push_back(std::move(row));
  }
  if (solver_value) *solver_value = -sol.primal_value + f.constant;
  return out;
}

std::vector<std::vector<Povm>> classical_measurement_step(const Functional& f, const EaClassicalStateForm& s) {
  if (static_cast<int>(s.substates.size()) != f.n_x) throw DimensionError("classical_measurement_step: state count");
  std::vector<std::vector<Povm>> out(static_cast<size_t>(f.n_y));
  for (int y = 0; y < f.n_y; ++y)
    for (int c = 0; c < s.d; ++c) {
      std::vector<ComplexMatrix> k(static_cast<size_t>(f.n_b), ComplexMatrix::Zero(s.dB, s.dB));
      for (int x = 0; x < f.n_x; ++x)
        for (int b = 0; b < f.n_b; ++b)
          k[static_cast<size_t>(b)] += f.at(x, y, b) * s.substates[static_cast<size_t>(x)][static_cast<size_t>(c)];
      out[static_cast<size_t>(y)].push_back(best_measurement(k));
    }
  return out;
}

QuantumSeesawResult seesaw_quantum(const Functional& f, int d, const SeesawConfig& cfg) {
  cfg.validate();
  check_functional(f, d, cfg.D);
  const auto t0 = std::chrono::steady_clock::now();
  auto init = [&](std::mt19937_64& rng) {
    std::vector<Povm> m;
    for (int y = 0; y < f.n_y; ++y) m.push_back(random_povm(d * cfg.D, f.n_b, rng));
    return m;
  };
  auto step = [&](std::vector<Povm>& meas, const QuantumIterate* cur) {
    if (cur) meas = quantum_measurement_step(f, cur->s);
    QuantumIterate it;
    it.s = quantum_state_step(f, d, cfg.D, meas);
    it.value = witness_value(f, it.s);
    return it;
  };
  auto runs = run_restarts<QuantumIterate>(cfg, init, step);
  const int best = pick_best(runs);
  QuantumSeesawResult r;
  r.best_restart = best;
  r.strategy = runs[static_cast<size_t>(best)].form.s;
  for (const auto& o : runs) r.runs.push_back(o.run);
  r.report.value = witness_value(f, r.strategy);
  r.report.direction = BoundDirection::lower;
  r.report.method = "seesaw_quantum";
  r.report.status = "feasible";
  r.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ClassicalSeesawResult seesaw_classical(const Functional& f, int d, const SeesawConfig& cfg) {
  cfg.validate();
  check_functional(f, d, cfg.D);
  const auto t0 = std::chrono::steady_clock::now();
  auto init = [&](std::mt19937_64& rng) {
    std::vector<std::vector<Povm>> m(static_cast<size_t>(f.n_y));
    for (int y = 0; y < f.n_y; ++y)
      for (int c = 0; c < d; ++c) m[static_cast<size_t>(y)].push_back(random_povm(cfg.D, f.n_b, rng));
    return m;
  };
  auto step = [&](std::vector<std::vector<Povm>>& meas, const ClassicalIterate* cur) {
    if (cur) meas = classical_measurement_step(f, cur->s);
    ClassicalIterate it;
    it.s = classical_state_step(f, d, cfg.D, meas);
    it.value = witness_value(f, it.s);
    return it;
  };
  auto runs = run_restarts<ClassicalIterate>(cfg, init, step);
  const int best = pick_best(runs);
  ClassicalSeesawResult r;
  r.best_restart = best;
  r.strategy = runs[static_cast<size_t>(best)].form.s;
  for (const auto& o : runs) r.runs.push_back(o.run);
  r.report.value = witness_value(f, r.strategy);
  r.report.direction = BoundDirection::lower;
  r.report.method = "seesaw_classical";
  r.report.status = "feasible";
  r.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

QuantumSeesawResult seesaw_quantum(const Witness& w, int d, const SeesawConfig& cfg) {
  if (!w.constraints.empty())
    throw std::invalid_argument("seesaw_quantum: hard witness constraints are not supported; use the penalized form");
  return seesaw_quantum(w.functional(), d, cfg);
}

ClassicalSeesawResult seesaw_classical(const Witness& w, int d, const SeesawConfig& cfg) {
  if (!w.constraints.empty())
    throw std::invalid_argument("seesaw_classical: hard witness constraints are not supported; use the penalized form");
  return seesaw_classical(w.functional(), d, cfg);
}

}  // namespace eacomm
