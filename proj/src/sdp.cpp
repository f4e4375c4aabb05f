#include "eacomm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace eacomm::sdp {

void Block::add(int var, int row, int col, double value) {
  if (value == 0.0) return;
  if (row > col) std::swap(row, col);
  if (row < 0 || col >= size) throw std::out_of_range("Block::add: entry outside block");
  if (diagonal && row != col) throw std::invalid_argument("Block::add: off-diagonal entry in diagonal block");
  terms.push_back({var, row, col, value});
}

int SdpProblem::add_vars(int n) {
  int first = num_vars;
  num_vars += n;
  objective.resize(static_cast<size_t>(num_vars), 0.0);
  return first;
}

void SdpProblem::validate() const {
  if (num_vars < 0) throw std::invalid_argument("SdpProblem: negative variable count");
  if (static_cast<int>(objective.size()) != num_vars)
    throw std::invalid_argument("SdpProblem: objective length differs from variable count");
  for (const auto& b : blocks) {
    if (b.size < 1) throw std::invalid_argument("SdpProblem: empty block");
    for (const auto& t : b.terms) {
      if (t.var < kConstant || t.var >= num_vars) throw std::invalid_argument("SdpProblem: undeclared variable in block");
      if (t.row < 0 || t.col >= b.size || t.row > t.col) throw std::invalid_argument("SdpProblem: bad block entry");
      if (b.diagonal && t.row != t.col) throw std::invalid_argument("SdpProblem: off-diagonal entry in diagonal block");
      if (!std::isfinite(t.value)) throw std::invalid_argument("SdpProblem: non-finite coefficient");
    }
  }
  for (const auto& e : equalities) {
    for (const auto& [v, a] : e.coeffs) {
      if (v < 0 || v >= num_vars) throw std::invalid_argument("SdpProblem: undeclared variable in equality");
      if (!std::isfinite(a)) throw std::invalid_argument("SdpProblem: non-finite coefficient");
    }
    if (!std::isfinite(e.rhs)) throw std::invalid_argument("SdpProblem: non-finite right-hand side");
  }
}

RealMatrix SdpProblem::block_value(size_t k, const std::vector<double>& y) const {
  const Block& b = blocks.at(k);
  RealMatrix m = RealMatrix::Zero(b.size, b.size);
  for (const auto& t : b.terms) {
    double v = t.value * (t.var == kConstant ? 1.0 : y[static_cast<size_t>(t.var)]);
    m(t.row, t.col) += v;
    if (t.row != t.col) m(t.col, t.row) += v;
  }
  return m;
}

double SdpProblem::objective_value(const std::vector<double>& y) const {
  double s = objective_constant;
  for (int i = 0; i < num_vars; ++i) s += objective[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
  return s;
}

double SdpProblem::max_equality_residual(const std::vector<double>& y) const {
  double r = 0.0;
  for (const auto& e : equalities) {
    double s = -e.rhs;
    for (const auto& [v, a] : e.coeffs) s += a * y[static_cast<size_t>(v)];
    r = std::max(r, std::abs(s));
  }
  return r;
}

void HermitianBlock::add(int var, int row, int col, cplx value) {
  if (value == cplx(0.0)) return;
  if (row > col) {
    std::swap(row, col);
    value = std::conj(value);
  }
  if (row < 0 || col >= size) throw std::out_of_range("HermitianBlock::add: entry outside block");
  if (row == col && value.imag() != 0.0)
    throw std::invalid_argument("HermitianBlock::add: complex diagonal entry");
  terms.push_back({var, row, col, value});
}

void HermitianVar::add_to(HermitianBlock& block, int row_offset, int col_offset, double scale) const {
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      int br = row_offset + r, bc = col_offset + c;
      if (row_offset == col_offset && r > c) continue;
      if (r == c) {
        block.add(diag(r), br, bc, scale);
      } else if (r < c) {
        block.add(re(r, c), br, bc, scale);
        block.add(im(r, c), br, bc, cplx(0.0, scale));
      } else {
        block.add(re(c, r), br, bc, scale);
        block.add(im(c, r), br, bc, cplx(0.0, -scale));
      }
    }
  }
}

void HermitianVar::add_trace_with(std::vector<double>& coeffs, const ComplexMatrix& op, double scale) const {
  if (op.rows() != n || op.cols() != n) throw DimensionError("HermitianVar::add_trace_with: operator shape");
  for (int r = 0; r < n; ++r) coeffs[static_cast<size_t>(diag(r))] += scale * op(r, r).real();
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      // X_rc = a + ib: Re(X_rc O_cr + X_cr O_rc) = a Re(O_cr + O_rc) - b Im(O_cr - O_rc)
      cplx s = op(c, r) + op(r, c);
      cplx t = op(c, r) - op(r, c);
      coeffs[static_cast<size_t>(re(r, c))] += scale * s.real();
      coeffs[static_cast<size_t>(im(r, c))] += scale * -t.imag();
    }
  }
}

ComplexMatrix HermitianVar::value(const std::vector<double>& y) const {
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    m(r, r) = y[static_cast<size_t>(diag(r))];
    for (int c = r + 1; c < n; ++c) {
      cplx v(y[static_cast<size_t>(re(r, c))], y[static_cast<size_t>(im(r, c))]);
      m(r, c) = v;
      m(c, r) = std::conj(v);
    }
  }
  return m;
}

int HermitianSdpProblem::add_vars(int n) {
  int first = num_vars;
  num_vars += n;
  objective.resize(static_cast<size_t>(num_vars), 0.0);
  return first;
}

HermitianVar HermitianSdpProblem::add_hermitian(int n) {
  return HermitianVar{add_vars(n * n), n};
}

ComplexMatrix HermitianSdpProblem::block_value(size_t k, const std::vector<double>& y) const {
  const HermitianBlock& b = blocks.at(k);
  ComplexMatrix m = ComplexMatrix::Zero(b.size, b.size);
  for (const auto& t : b.terms) {
    cplx v = t.value * (t.var == kConstant ? 1.0 : y[static_cast<size_t>(t.var)]);
    m(t.row, t.col) += v;
    if (t.row != t.col) m(t.col, t.row) += std::conj(v);
  }
  return m;
}

SdpProblem realify(const HermitianSdpProblem& h) {
  SdpProblem p;
  p.sense = h.sense;
  p.num_vars = h.num_vars;
  p.objective = h.objective;
  p.objective.resize(static_cast<size_t>(h.num_vars), 0.0);
  p.objective_constant = h.objective_constant;
  p.equalities = h.equalities;
  for (const auto& hb : h.blocks) {
    bool real = std::all_of(hb.terms.begin(), hb.terms.end(), [](const HTerm& t) { return t.value.imag() == 0.0; });
    const int n = hb.size;
    if (real) {
      Block b(n);
      for (const auto& t : hb.terms) b.add(t.var, t.row, t.col, t.value.real());
      p.blocks.push_back(std::move(b));
      continue;
    }
    Block b(2 * n);
    for (const auto& t : hb.terms) {
      double re = t.value.real(), im = t.value.imag();
      b.add(t.var, t.row, t.col, re);
      b.add(t.var, t.row + n, t.col + n, re);
      if (t.row != t.col) {
        b.add(t.var, t.row, t.col + n, -im);
        b.add(t.var, t.col, t.row + n, im);
      }
    }
    p.blocks.push_back(std::move(b));
  }
  for (const auto& rb : h.real_blocks) p.blocks.push_back(rb);
  return p;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::near_optimal: return "near_optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::failed: return "failed";
  }
  return "failed";
}

double SdpSolution::safe_bound(Sense sense) const {
  return sense == Sense::maximize ? std::max(primal_value, dual_value) : std::min(primal_value, dual_value);
}

nlohmann::json to_json(const SdpProblem& p) {
  nlohmann::json j;
  j["num_vars"] = p.num_vars;
  j["sense"] = p.sense == Sense::maximize ? "max" : "min";
  j["objective"] = p.objective;
  j["objective_constant"] = p.objective_constant;
  auto& blocks = j["blocks"] = nlohmann::json::array();
  for (const auto& b : p.blocks) {
    nlohmann::json jb;
    jb["size"] = b.size;
    jb["diagonal"] = b.diagonal;
    auto& terms = jb["terms"] = nlohmann::json::array();
    for (const auto& t : b.terms) terms.push_back({t.var, t.row, t.col, t.value});
    blocks.push_back(std::move(jb));
  }
  auto& eqs = j["equalities"] = nlohmann::json::array();
  for (const auto& e : p.equalities) {
    nlohmann::json je;
    je["coeffs"] = e.coeffs;
    je["rhs"] = e.rhs;
    eqs.push_back(std::move(je));
  }
  return j;
}

}  // namespace eacomm::sdp
