// Equality elimination followed by an infeasible primal-dual interior-point
// method (HKM direction, Mehrotra predictor-corrector) for
//     maximize b . z  s.t.  S(z) = C + sum_j z_j G_j  PSD.
// Internally the SDPA convention is used: x = z, c = -b, F_i = G_i,
// F_0 = -C, primal slack X = S(x), dual Y with F_i . Y = c_i.

#include "eacomm/sdp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace eacomm::sdp {
namespace {

struct Entry {
  int r, c;
  double v;
};

struct SparseExpr {
  double c0 = 0.0;
  std::vector<std::pair<int, double>> t;
};

struct ReducedBlock {
  int n = 0;
  bool diag = false;
  RealMatrix C;                           // n x n, or n x 1 for diagonal blocks
  std::vector<int> vars;                  // reduced variable ids, ascending
  std::vector<std::vector<Entry>> ents;   // entries per local variable, r <= c
};

struct Reduced {
  int m = 0;
  std::vector<double> b;
  double constant = 0.0;
  std::vector<ReducedBlock> blocks;
  std::vector<SparseExpr> expr;  // original variable -> reduced variables
  SolveStatus early = SolveStatus::optimal;
  bool decided = false;
  std::string message;
};

double max_abs(const std::unordered_map<int, double>& row) {
  double s = 0.0;
  for (const auto& [v, a] : row) s = std::max(s, std::abs(a));
  return s;
}

// Sparse Gaussian elimination of the equalities. Returns one expression per
// original variable in terms of the surviving (free) original variables.
bool eliminate(const SdpProblem& p, std::vector<SparseExpr>& expr, std::vector<char>& eliminated, std::string& msg) {
  const int N = p.num_vars;
  std::vector<int> occ(static_cast<size_t>(N), 0);
  for (const auto& b : p.blocks)
    for (const auto& t : b.terms)
      if (t.var >= 0) ++occ[static_cast<size_t>(t.var)];

  expr.assign(static_cast<size_t>(N), {});
  eliminated.assign(static_cast<size_t>(N), 0);
  std::vector<int> order;

  for (const auto& eq : p.equalities) {
    std::unordered_map<int, double> row;
    for (const auto& [v, a] : eq.coeffs) row[v] += a;
    double rhs = eq.rhs;
    const double scale = std::max(max_abs(row), std::abs(rhs));
    if (scale == 0.0) continue;

    std::vector<int> stack;
    for (const auto& [v, a] : row)
      if (eliminated[static_cast<size_t>(v)]) stack.push_back(v);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      auto it = row.find(v);
      if (it == row.end()) continue;
      double a = it->second;
      row.erase(it);
      const SparseExpr& e = expr[static_cast<size_t>(v)];
      rhs -= a * e.c0;
      for (const auto& [j, cj] : e.t) {
        auto [jt, inserted] = row.try_emplace(j, 0.0);
        jt->second += a * cj;
        if (inserted && eliminated[static_cast<size_t>(j)]) stack.push_back(j);
      }
    }
    const double amax = max_abs(row);
    const double drop = 1e-12 * std::max(scale, amax);
    for (auto it = row.begin(); it != row.end();) {
      if (std::abs(it->second) <= drop) it = row.erase(it);
      else ++it;
    }
    if (row.empty()) {
      if (std::abs(rhs) > 1e-9 * std::max(1.0, scale)) {
        msg = "inconsistent linear equalities";
        return false;
      }
      continue;
    }
    int piv = -1;
    for (const auto& [v, a] : row) {
      if (std::abs(a) < 0.1 * amax) continue;
      if (piv < 0 || occ[static_cast<size_t>(v)] < occ[static_cast<size_t>(piv)] ||
          (occ[static_cast<size_t>(v)] == occ[static_cast<size_t>(piv)] && v > piv))
        piv = v;
    }
    const double ap = row[piv];
    SparseExpr e;
    e.c0 = rhs / ap;
    for (const auto& [v, a] : row)
      if (v != piv) e.t.emplace_back(v, -a / ap);
    std::sort(e.t.begin(), e.t.end());
    expr[static_cast<size_t>(piv)] = std::move(e);
    eliminated[static_cast<size_t>(piv)] = 1;
    order.push_back(piv);
  }

  // Later pivots never reference earlier ones, so resolve back to front.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    SparseExpr& e = expr[static_cast<size_t>(*it)];
    bool dirty = std::any_of(e.t.begin(), e.t.end(), [&](const auto& q) { return eliminated[static_cast<size_t>(q.first)]; });
    if (!dirty) continue;
    std::unordered_map<int, double> acc;
    double c0 = e.c0;
    for (const auto& [j, cj] : e.t) {
      if (!eliminated[static_cast<size_t>(j)]) {
        acc[j] += cj;
        continue;
      }
      const SparseExpr& f = expr[static_cast<size_t>(j)];
      c0 += cj * f.c0;
      for (const auto& [k, ck] : f.t) acc[k] += cj * ck;
    }
    e.c0 = c0;
    e.t.assign(acc.begin(), acc.end());
    std::sort(e.t.begin(), e.t.end());
    e.t.erase(std::remove_if(e.t.begin(), e.t.end(), [](const auto& q) { return q.second == 0.0; }), e.t.end());
  }
  for (int v = 0; v < N; ++v)
    if (!eliminated[static_cast<size_t>(v)]) expr[static_cast<size_t>(v)] = SparseExpr{0.0, {{v, 1.0}}};
  return true;
}

Reduced reduce(const SdpProblem& p) {
  Reduced red;
  std::vector<char> eliminated;
  if (!eliminate(p, red.expr, eliminated, red.message)) {
    red.decided = true;
    red.early = SolveStatus::infeasible;
    return red;
  }
  const int N = p.num_vars;
  const double sign = p.sense == Sense::maximize ? 1.0 : -1.0;

  // Provisional ids over free original variables.
  std::vector<int> prov(static_cast<size_t>(N), -1);
  int nfree = 0;
  for (int v = 0; v < N; ++v)
    if (!eliminated[static_cast<size_t>(v)]) prov[static_cast<size_t>(v)] = nfree++;

  std::vector<double> b(static_cast<size_t>(nfree), 0.0);
  red.constant = sign * p.objective_constant;
  for (int v = 0; v < N; ++v) {
    double o = sign * p.objective[static_cast<size_t>(v)];
    if (o == 0.0) continue;
    const SparseExpr& e = red.expr[static_cast<size_t>(v)];
    red.constant += o * e.c0;
    for (const auto& [j, cj] : e.t) b[static_cast<size_t>(prov[static_cast<size_t>(j)])] += o * cj;
  }

  struct Trip {
    int var, r, c;
    double v;
  };
  std::vector<std::vector<Trip>> trips(p.blocks.size());
  std::vector<char> used(static_cast<size_t>(nfree), 0);
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    const Block& blk = p.blocks[k];
    ReducedBlock rb;
    rb.n = blk.size;
    rb.diag = blk.diagonal;
    rb.C = blk.diagonal ? RealMatrix::Zero(blk.size, 1) : RealMatrix::Zero(blk.size, blk.size);
    auto addc = [&](int r, int c, double v) {
      if (rb.diag) {
        rb.C(r, 0) += v;
      } else {
        rb.C(r, c) += v;
        if (r != c) rb.C(c, r) += v;
      }
    };
    auto& tk = trips[k];
    for (const auto& t : blk.terms) {
      if (t.var == kConstant) {
        addc(t.row, t.col, t.value);
        continue;
      }
      const SparseExpr& e = red.expr[static_cast<size_t>(t.var)];
      if (e.c0 != 0.0) addc(t.row, t.col, t.value * e.c0);
      for (const auto& [j, cj] : e.t) tk.push_back({prov[static_cast<size_t>(j)], t.row, t.col, t.value * cj});
    }
    std::sort(tk.begin(), tk.end(), [](const Trip& a, const Trip& c) {
      return std::tie(a.var, a.r, a.c) < std::tie(c.var, c.r, c.c);
    });
    std::vector<Trip> merged;
    for (const auto& t : tk) {
      if (!merged.empty() && merged.back().var == t.var && merged.back().r == t.r && merged.back().c == t.c)
        merged.back().v += t.v;
      else
        merged.push_back(t);
    }
    double cmax = 0.0;
    for (const auto& t : merged) cmax = std::max(cmax, std::abs(t.v));
    merged.erase(std::remove_if(merged.begin(), merged.end(), [&](const Trip& t) { return std::abs(t.v) <= 1e-14 * cmax; }),
                 merged.end());
    for (const auto& t : merged) used[static_cast<size_t>(t.var)] = 1;
    tk = std::move(merged);
    red.blocks.push_back(std::move(rb));
  }

  // Free variables outside every block are either irrelevant or unbounded.
  std::vector<int> final_id(static_cast<size_t>(nfree), -1);
  double bscale = 0.0;
  for (double x : b) bscale = std::max(bscale, std::abs(x));
  for (int j = 0; j < nfree; ++j) {
    if (used[static_cast<size_t>(j)]) {
      final_id[static_cast<size_t>(j)] = red.m++;
      red.b.push_back(b[static_cast<size_t>(j)]);
    } else if (std::abs(b[static_cast<size_t>(j)]) > 1e-12 * std::max(1.0, bscale)) {
      red.decided = true;
      red.early = SolveStatus::unbounded;
      red.message = "objective depends on a variable that no constraint bounds";
    }
  }
  for (size_t k = 0; k < red.blocks.size(); ++k) {
    ReducedBlock& rb = red.blocks[k];
    for (const auto& t : trips[k]) {
      int id = final_id[static_cast<size_t>(t.var)];
      if (rb.vars.empty() || rb.vars.back() != id) {
        rb.vars.push_back(id);
        rb.ents.emplace_back();
      }
      rb.ents.back().push_back({t.r, t.c, t.v});
    }
  }
  for (auto& e : red.expr) {
    std::vector<std::pair<int, double>> t;
    for (const auto& [j, cj] : e.t) {
      int id = final_id[static_cast<size_t>(prov[static_cast<size_t>(j)])];
      if (id >= 0) t.emplace_back(id, cj);
    }
    e.t = std::move(t);
  }
  return red;
}

// Tr(F M) for symmetric F given by its upper entries.
double pair_with(const std::vector<Entry>& f, const RealMatrix& m) {
  double s = 0.0;
  for (const auto& e : f) s += e.r == e.c ? e.v * m(e.r, e.r) : e.v * (m(e.r, e.c) + m(e.c, e.r));
  return s;
}

double pair_with_diag(const std::vector<Entry>& f, const RealMatrix& m) {
  double s = 0.0;
  for (const auto& e : f) s += e.v * m(e.r, 0);
  return s;
}

void add_scaled(RealMatrix& acc, const std::vector<Entry>& f, double a, bool diag) {
  for (const auto& e : f) {
    if (diag) {
      acc(e.r, 0) += a * e.v;
    } else {
      acc(e.r, e.c) += a * e.v;
      if (e.r != e.c) acc(e.c, e.r) += a * e.v;
    }
  }
}

double inner(const RealMatrix& a, const RealMatrix& b) { return a.cwiseProduct(b).sum(); }

// Largest alpha <= cap with X + alpha dX PSD (cap = infinity when unbounded).
double max_step(const RealMatrix& X, const RealMatrix& dX, bool diag) {
  double lmin;
  if (diag) {
    lmin = (dX.array() / X.array()).minCoeff();
  } else {
    Eigen::LLT<RealMatrix> llt(X);
    RealMatrix h = llt.matrixL().solve(dX);
    RealMatrix m = llt.matrixL().solve(h.transpose());
    m = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
    lmin = es.eigenvalues()(0);
  }
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

class Ipm {
 public:
  Ipm(const Reduced& red, const SolverOptions& opts) : red_(red), opts_(opts), m_(red.m) {}

  SdpSolution run();
  std::vector<double> x;
  std::vector<RealMatrix> X, Y;

 private:
  void slack(const std::vector<double>& z, std::vector<RealMatrix>& S) const;
  void schur(const std::vector<RealMatrix>& Xinv, RealMatrix& B) const;
  bool factor(RealMatrix& B);
  Eigen::VectorXd solve_schur(const Eigen::VectorXd& rhs) const;

  const Reduced& red_;
  const SolverOptions& opts_;
  int m_;
  Eigen::LLT<RealMatrix> llt_;
  Eigen::LDLT<RealMatrix> ldlt_;
  bool use_ldlt_ = false;
};

void Ipm::slack(const std::vector<double>& z, std::vector<RealMatrix>& S) const {
  S.resize(red_.blocks.size());
  for (size_t k = 0; k < red_.blocks.size(); ++k) {
    const ReducedBlock& rb = red_.blocks[k];
    S[k] = rb.C;
    for (size_t l = 0; l < rb.vars.size(); ++l) add_scaled(S[k], rb.ents[l], z[static_cast<size_t>(rb.vars[l])], rb.diag);
  }
}

void Ipm::schur(const std::vector<RealMatrix>& Xinv, RealMatrix& B) const {
  B.setZero(m_, m_);
  for (size_t k = 0; k < red_.blocks.size(); ++k) {
    const ReducedBlock& rb = red_.blocks[k];
    const RealMatrix& Yk = Y[k];
    const int nv = static_cast<int>(rb.vars.size());
    if (rb.diag) {
      RealVector w = Yk.col(0).cwiseQuotient(X[k].col(0));
      std::vector<std::vector<std::pair<int, double>>> at(static_cast<size_t>(rb.n));
      for (int l = 0; l < nv; ++l)
        for (const auto& e : rb.ents[static_cast<size_t>(l)]) at[static_cast<size_t>(e.r)].emplace_back(rb.vars[static_cast<size_t>(l)], e.v);
      for (int p = 0; p < rb.n; ++p) {
        const auto& lst = at[static_cast<size_t>(p)];
        for (size_t a = 0; a < lst.size(); ++a)
          for (size_t c = a; c < lst.size(); ++c) {
            int i = std::min(lst[a].first, lst[c].first), j = std::max(lst[a].first, lst[c].first);
            double v = lst[a].second * lst[c].second * w(p);
            B(i, j) += v;
            if (a != c && lst[a].first == lst[c].first) B(i, j) += v;
          }
      }
      continue;
    }
    const int n = rb.n;
    std::vector<int> slot(static_cast<size_t>(n), -1);
    for (int l = 0; l < nv; ++l) {
      const auto& fi = rb.ents[static_cast<size_t>(l)];
      std::vector<int> rows;
      for (const auto& e : fi) {
        for (int r : {e.r, e.c})
          if (slot[static_cast<size_t>(r)] < 0) {
            slot[static_cast<size_t>(r)] = static_cast<int>(rows.size());
            rows.push_back(r);
          }
      }
      const int nr = static_cast<int>(rows.size());
      RealMatrix P = RealMatrix::Zero(nr, n);
      for (const auto& e : fi) {
        P.row(slot[static_cast<size_t>(e.r)]) += e.v * Yk.row(e.c);
        if (e.r != e.c) P.row(slot[static_cast<size_t>(e.c)]) += e.v * Yk.row(e.r);
      }
      RealMatrix Xc(n, nr);
      for (int q = 0; q < nr; ++q) Xc.col(q) = Xinv[k].col(rows[static_cast<size_t>(q)]);
      for (int r : rows) slot[static_cast<size_t>(r)] = -1;
      RealMatrix G = Xc * P;  // X^{-1} F_i Y
      const int gi = rb.vars[static_cast<size_t>(l)];
      for (int l2 = l; l2 < nv; ++l2) {
        const int gj = rb.vars[static_cast<size_t>(l2)];
        B(std::min(gi, gj), std::max(gi, gj)) += pair_with(rb.ents[static_cast<size_t>(l2)], G);
      }
    }
  }
  B.triangularView<Eigen::StrictlyLower>() = B.transpose().triangularView<Eigen::StrictlyLower>();
}

bool Ipm::factor(RealMatrix& B) {
  use_ldlt_ = false;
  llt_.compute(B);
  if (llt_.info() == Eigen::Success) return true;
  double reg = 1e-13 * std::max(1.0, B.diagonal().cwiseAbs().maxCoeff());
  for (int tries = 0; tries < 4; ++tries, reg *= 100.0) {
    RealMatrix Br = B;
    Br.diagonal().array() += reg;
    llt_.compute(Br);
    if (llt_.info() == Eigen::Success) return true;
  }
  ldlt_.compute(B);
  use_ldlt_ = true;
  return ldlt_.info() == Eigen::Success;
}

Eigen::VectorXd Ipm::solve_schur(const Eigen::VectorXd& rhs) const {
  return use_ldlt_ ? Eigen::VectorXd(ldlt_.solve(rhs)) : Eigen::VectorXd(llt_.solve(rhs));
}

SdpSolution Ipm::run() {
  SdpSolution sol;
  const auto& blocks = red_.blocks;
  const size_t nb = blocks.size();
  double ntot = 0.0;
  for (const auto& rb : blocks) ntot += rb.n;

  // c = -b ; F_i = G_i ; F_0 = -C.
  Eigen::VectorXd c(m_);
  for (int i = 0; i < m_; ++i) c(i) = -red_.b[static_cast<size_t>(i)];
  double normC = 0.0;
  for (const auto& rb : blocks) normC = std::max(normC, rb.C.norm());
  std::vector<double> fnorm(static_cast<size_t>(m_), 0.0);
  for (const auto& rb : blocks)
    for (size_t l = 0; l < rb.vars.size(); ++l) {
      double s = 0.0;
      for (const auto& e : rb.ents[l]) s += (e.r == e.c ? 1.0 : 2.0) * e.v * e.v;
      fnorm[static_cast<size_t>(rb.vars[l])] += s;
    }
  double maxF = 0.0, xi = 0.0;
  for (int i = 0; i < m_; ++i) {
    double f = std::sqrt(fnorm[static_cast<size_t>(i)]);
    maxF = std::max(maxF, f);
    xi = std::max(xi, (1.0 + std::abs(c(i))) / (1.0 + f));
  }
  const double sqn = std::sqrt(ntot);
  const double y0 = std::max({10.0, sqn, ntot * xi});
  const double x0 = std::max({10.0, sqn, maxF, normC});

  x.assign(static_cast<size_t>(m_), 0.0);
  X.resize(nb);
  Y.resize(nb);
  for (size_t k = 0; k < nb; ++k) {
    const auto& rb = blocks[k];
    if (rb.diag) {
      X[k] = RealMatrix::Constant(rb.n, 1, x0);
      Y[k] = RealMatrix::Constant(rb.n, 1, y0);
    } else {
      X[k] = x0 * RealMatrix::Identity(rb.n, rb.n);
      Y[k] = y0 * RealMatrix::Identity(rb.n, rb.n);
    }
  }
  const double normb = std::sqrt(c.squaredNorm());

  std::vector<RealMatrix> S, Rp(nb), Xinv(nb), dXa(nb), dYa(nb), dX(nb), dY(nb);
  RealMatrix B;
  double best_gap = std::numeric_limits<double>::infinity();
  int stall = 0;

  auto finish = [&](SolveStatus st, const std::string& msg, double pobj, double dobj, double pinf, double dinf) {
    sol.status = st;
    sol.message = msg;
    sol.primal_value = -pobj;
    sol.dual_value = -dobj;
    sol.duality_gap = std::abs(pobj - dobj);
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    return sol;
  };

  for (int it = 0;; ++it) {
    sol.iterations = it;
    slack(x, S);
    double pinf = 0.0, mu = 0.0, dobj = 0.0, ynorm = 0.0;
    for (size_t k = 0; k < nb; ++k) {
      Rp[k] = S[k] - X[k];
      pinf = std::max(pinf, Rp[k].norm());
      mu += inner(X[k], Y[k]);
      dobj -= inner(blocks[k].C, Y[k]);
      ynorm += Y[k].squaredNorm();
    }
    ynorm = std::sqrt(ynorm);
    mu /= ntot;
    pinf /= (1.0 + normC);
    Eigen::VectorXd rd = c;
    for (size_t k = 0; k < nb; ++k) {
      const auto& rb = blocks[k];
      for (size_t l = 0; l < rb.vars.size(); ++l)
        rd(rb.vars[l]) -= rb.diag ? pair_with_diag(rb.ents[l], Y[k]) : pair_with(rb.ents[l], Y[k]);
    }
    const double dinf = rd.norm() / (1.0 + normb);
    double pobj = 0.0;
    for (int i = 0; i < m_; ++i) pobj += c(i) * x[static_cast<size_t>(i)];
    const double gap = std::abs(pobj - dobj) / std::max(1.0, 0.5 * (std::abs(pobj) + std::abs(dobj)));

    if (opts_.verbose)
      std::fprintf(stderr, "%3d  pobj % .10e  dobj % .10e  gap %.2e  pinf %.2e  dinf %.2e  mu %.2e\n", it, -pobj, -dobj, gap,
                   pinf, dinf, mu);

    if (gap < opts_.gap_tol && pinf < opts_.feas_tol && dinf < opts_.feas_tol)
      return finish(SolveStatus::optimal, "converged", pobj, dobj, pinf, dinf);

    // Farkas-type certificates from diverging iterates.
    if (ynorm > 1e8 * y0 && dobj > 0.0) {
      double q = (rd - c).norm() / dobj;
      if (q < 1e-6) return finish(SolveStatus::infeasible, "dual iterate diverges along an infeasibility certificate", pobj, dobj, pinf, dinf);
    }
    double xnorm = 0.0;
    for (double v : x) xnorm += v * v;
    xnorm = std::sqrt(xnorm);
    if (xnorm > 1e9 * (1.0 + x0) && -pobj > 1e8 * (1.0 + normC) && pinf * (1.0 + normC) < 1e-6 * (-pobj))
      return finish(SolveStatus::unbounded, "primal iterate diverges along an improving ray", pobj, dobj, pinf, dinf);

    auto near = [&]() {
      return gap < std::max(1e-6, 100 * opts_.gap_tol) && pinf < std::max(1e-6, 100 * opts_.feas_tol) &&
             dinf < std::max(1e-6, 100 * opts_.feas_tol);
    };
    if (it >= opts_.max_iters) {
      if (near()) return finish(SolveStatus::near_optimal, "iteration limit reached near optimum", pobj, dobj, pinf, dinf);
      return finish(SolveStatus::failed, "iteration limit reached", pobj, dobj, pinf, dinf);
    }
    if (gap < best_gap * 0.999) {
      best_gap = gap;
      stall = 0;
    } else if (++stall > 8 && near()) {
      return finish(SolveStatus::near_optimal, "progress stalled near optimum", pobj, dobj, pinf, dinf);
    }

    bool ok = true;
    for (size_t k = 0; k < nb; ++k) {
      if (blocks[k].diag) {
        Xinv[k] = X[k].cwiseInverse();
      } else {
        Eigen::LLT<RealMatrix> llt(X[k]);
        if (llt.info() != Eigen::Success) ok = false;
        Xinv[k] = llt.solve(RealMatrix::Identity(blocks[k].n, blocks[k].n));
        Xinv[k] = 0.5 * (Xinv[k] + Xinv[k].transpose()).eval();
      }
    }
    if (!ok) return finish(near() ? SolveStatus::near_optimal : SolveStatus::failed, "lost positive definiteness", pobj, dobj, pinf, dinf);

    if (m_ > 0) {
      schur(Xinv, B);
      if (!factor(B)) {
        return finish(near() ? SolveStatus::near_optimal : SolveStatus::failed, "Schur complement factorization failed", pobj,
                      dobj, pinf, dinf);
      }
    }

    auto direction = [&](double sigma_mu, bool corrector) {
      // R = sigma mu X^-1 - Y - X^-1 Rp Y [- X^-1 dXa dYa]
      std::vector<RealMatrix> R(nb);
      for (size_t k = 0; k < nb; ++k) {
        if (blocks[k].diag) {
          RealMatrix t = sigma_mu * Xinv[k] - Y[k] - Xinv[k].cwiseProduct(Rp[k]).cwiseProduct(Y[k]);
          if (corrector) t -= Xinv[k].cwiseProduct(dXa[k]).cwiseProduct(dYa[k]);
          R[k] = t;
        } else {
          RealMatrix t = sigma_mu * Xinv[k] - Y[k] - Xinv[k] * Rp[k] * Y[k];
          if (corrector) t -= Xinv[k] * dXa[k] * dYa[k];
          R[k] = t;
        }
      }
      Eigen::VectorXd rhs = -rd;
      for (size_t k = 0; k < nb; ++k) {
        const auto& rb = blocks[k];
        for (size_t l = 0; l < rb.vars.size(); ++l)
          rhs(rb.vars[l]) += rb.diag ? pair_with_diag(rb.ents[l], R[k]) : pair_with(rb.ents[l], R[k]);
      }
      Eigen::VectorXd dx = m_ > 0 ? solve_schur(rhs) : Eigen::VectorXd();
      std::vector<RealMatrix> ddX(nb), ddY(nb);
      for (size_t k = 0; k < nb; ++k) {
        const auto& rb = blocks[k];
        ddX[k] = Rp[k];
        for (size_t l = 0; l < rb.vars.size(); ++l) add_scaled(ddX[k], rb.ents[l], dx(rb.vars[l]), rb.diag);
        if (rb.diag) {
          RealMatrix t = RealMatrix::Constant(rb.n, 1, sigma_mu) - ddX[k].cwiseProduct(Y[k]);
          if (corrector) t -= dXa[k].cwiseProduct(dYa[k]);
          ddY[k] = Xinv[k].cwiseProduct(t) - Y[k];
        } else {
          RealMatrix t = sigma_mu * RealMatrix::Identity(rb.n, rb.n) - ddX[k] * Y[k];
          if (corrector) t -= dXa[k] * dYa[k];
          RealMatrix d = Xinv[k] * t - Y[k];
          ddY[k] = 0.5 * (d + d.transpose());
        }
      }
      return std::make_tuple(dx, ddX, ddY);
    };
    auto steps = [&](const std::vector<RealMatrix>& ddX, const std::vector<RealMatrix>& ddY) {
      double ap = std::numeric_limits<double>::infinity(), ad = ap;
      for (size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(X[k], ddX[k], blocks[k].diag));
        ad = std::min(ad, max_step(Y[k], ddY[k], blocks[k].diag));
      }
      return std::make_pair(ap, ad);
    };

    auto [dxa, pdX, pdY] = direction(0.0, false);
    dXa = pdX;
    dYa = pdY;
    auto [apa, ada] = steps(dXa, dYa);
    apa = std::min(1.0, apa);
    ada = std::min(1.0, ada);
    double mu_aff = 0.0;
    for (size_t k = 0; k < nb; ++k) mu_aff += inner(X[k] + apa * dXa[k], Y[k] + ada * dYa[k]);
    mu_aff /= ntot;
    double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
    if (pinf > 1e-2 || dinf > 1e-2) sigma = std::max(sigma, 0.1);

    auto [dxc, cdX, cdY] = direction(sigma * mu, true);
    auto [ap, ad] = steps(cdX, cdY);
    const double gamma = opts_.step_fraction;
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (ap < 1e-10 && ad < 1e-10)
      return finish(near() ? SolveStatus::near_optimal : SolveStatus::failed, "step length vanished", pobj, dobj, pinf, dinf);

    for (int i = 0; i < m_; ++i) x[static_cast<size_t>(i)] += ap * dxc(i);
    for (size_t k = 0; k < nb; ++k) {
      X[k] += ap * cdX[k];
      Y[k] += ad * cdY[k];
      if (!blocks[k].diag) {
        X[k] = 0.5 * (X[k] + X[k].transpose()).eval();
        Y[k] = 0.5 * (Y[k] + Y[k].transpose()).eval();
      }
    }
  }
}

}  // namespace

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts) {
  p.validate();
  Reduced red = reduce(p);
  const double sign = p.sense == Sense::maximize ? 1.0 : -1.0;
  SdpSolution sol;
  auto expand = [&](const std::vector<double>& z) {
    std::vector<double> y(static_cast<size_t>(p.num_vars));
    for (int v = 0; v < p.num_vars; ++v) {
      const SparseExpr& e = red.expr[static_cast<size_t>(v)];
      double s = e.c0;
      for (const auto& [j, cj] : e.t) s += cj * z[static_cast<size_t>(j)];
      y[static_cast<size_t>(v)] = s;
    }
    return y;
  };

  if (red.decided) {
    sol.status = red.early;
    sol.message = red.message;
    sol.x = expand(std::vector<double>(static_cast<size_t>(red.m), 0.0));
    double inf = std::numeric_limits<double>::infinity();
    if (red.early == SolveStatus::infeasible) sol.primal_value = sol.dual_value = -sign * inf;
    else sol.primal_value = sol.dual_value = sign * inf;
    return sol;
  }

  if (red.blocks.empty()) {
    sol.status = red.m == 0 ? SolveStatus::optimal : SolveStatus::unbounded;
    sol.x = expand(std::vector<double>(static_cast<size_t>(red.m), 0.0));
    sol.primal_value = sol.dual_value = sign * red.constant;
    return sol;
  }

  Ipm ipm(red, opts);
  sol = ipm.run();
  sol.x = expand(ipm.x);
  sol.primal_value += red.constant;
  sol.dual_value += red.constant;
  sol.dual_blocks = ipm.Y;
  if (sign < 0) {
    sol.primal_value = -sol.primal_value;
    sol.dual_value = -sol.dual_value;
  }
  if (sol.status == SolveStatus::optimal && sol.duality_gap > 1e-6 * std::max(1.0, std::abs(sol.primal_value)))
    sol.status = SolveStatus::near_optimal;
  return sol;
}

SdpSolution solve(const HermitianSdpProblem& p, const SolverOptions& opts) { return solve(realify(p), opts); }

std::vector<ComplexMatrix> hermitian_duals(const HermitianSdpProblem& p, const SdpSolution& s) {
  std::vector<ComplexMatrix> out;
  if (s.dual_blocks.size() < p.blocks.size()) return out;
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    const auto& hb = p.blocks[k];
    const RealMatrix& Y = s.dual_blocks[k];
    const int n = hb.size;
    if (Y.rows() == n) {
      out.push_back(Y.cast<cplx>());
      continue;
    }
    RealMatrix P = Y.topLeftCorner(n, n), Q = Y.topRightCorner(n, n), R = Y.bottomRightCorner(n, n);
    ComplexMatrix W(n, n);
    W.real() = P + R;
    W.imag() = Q.transpose() - Q;
    out.push_back(0.5 * (W + W.adjoint()));
  }
  return out;
}

PovmOptimum optimize_povm(const std::vector<ComplexMatrix>& k, const SolverOptions& opts) {
  PovmOptimum res;
  if (k.empty()) throw std::invalid_argument("optimize_povm: no operators");
  const int n = static_cast<int>(k.front().rows());
  HermitianSdpProblem h;
  HermitianVar z = h.add_hermitian(n);
  for (int r = 0; r < n; ++r) h.objective[static_cast<size_t>(z.diag(r))] = -1.0;
  for (const auto& kb : k) {
    if (kb.rows() != n || kb.cols() != n) throw DimensionError("optimize_povm: operator shape");
    HermitianBlock blk(n);
    z.add_to(blk, 0, 0, 1.0);
    for (int r = 0; r < n; ++r) {
      blk.add(kConstant, r, r, -0.5 * (kb(r, r) + std::conj(kb(r, r))).real());
      for (int c = r + 1; c < n; ++c) blk.add(kConstant, r, c, -0.5 * (kb(r, c) + std::conj(kb(c, r))));
    }
    h.blocks.push_back(std::move(blk));
  }
  SdpSolution s = solve(h, opts);
  res.status = s.status;
  res.value = -s.primal_value;
  std::vector<ComplexMatrix> w = hermitian_duals(h, s);
  if (w.size() != k.size()) return res;

  // Clip to PSD and renormalize so that the elements sum to the identity.
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (auto& m : w) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    RealVector ev = es.eigenvalues().cwiseMax(0.0);
    m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    sum += m;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (sum + sum.adjoint()));
  RealVector inv = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  ComplexMatrix isq = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  res.attained = 0.0;
  for (size_t b = 0; b < w.size(); ++b) {
    ComplexMatrix m = isq * w[b] * isq;
    m = 0.5 * (m + m.adjoint());
    res.attained += (m * k[b]).trace().real();
    res.povm.push_back(std::move(m));
  }
  return res;
}

}  // namespace eacomm::sdp
