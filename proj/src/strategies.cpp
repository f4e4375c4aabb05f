#include "eacomm/strategies.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace eacomm {
namespace {

std::vector<double> behavior_table(int nx, int ny, int nb) { return std::vector<double>(static_cast<size_t>(nx * ny * nb), 0.0); }

// Clamp rounding noise so that the table satisfies the Behavior invariants.
Behavior make_behavior(const Scenario& s, std::vector<double> t) {
  for (auto& v : t)
    if (v < 0.0 && v > -1e-12) v = 0.0;
  return Behavior(s, std::move(t));
}

ComplexMatrix tensor_id(const ComplexMatrix& a, int dB) { return kron(a, identity(dB)); }

// Binary measurements from the signed combinations sum_x c_xy tau^x.
std::vector<Povm> optimal_measurements(const std::vector<ComplexMatrix>& tau, const RealMatrix& c) {
  std::vector<Povm> out;
  for (int y = 0; y < c.cols(); ++y) {
    ComplexMatrix h = ComplexMatrix::Zero(tau.front().rows(), tau.front().cols());
    for (int x = 0; x < c.rows(); ++x) h += c(x, y) * tau[static_cast<size_t>(x)];
    out.push_back(optimal_binary_observable(h).povm);
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------- validation

void EaQuantumStrategy::validate() const {
  if (shared_state.dim() != dA * dB) throw DimensionError("EaQuantumStrategy: shared state dimension");
  if (channels.empty() || measurements.empty()) throw std::invalid_argument("EaQuantumStrategy: empty protocol");
  const int d0 = d();
  for (const auto& ch : channels) {
    if (ch.in_dim() != dA) throw DimensionError("EaQuantumStrategy: channel input dimension");
    if (ch.out_dim() != d0) throw DimensionError("EaQuantumStrategy: channel output dimensions differ");
  }
  const int nb = measurements.front().outcomes();
  for (const auto& m : measurements) {
    if (m.dim() != d0 * dB) throw DimensionError("EaQuantumStrategy: measurement dimension");
    if (m.outcomes() != nb) throw std::invalid_argument("EaQuantumStrategy: outcome counts differ");
  }
}

Scenario EaQuantumStrategy::scenario() const {
  return Scenario{static_cast<int>(channels.size()), static_cast<int>(measurements.size()), measurements.front().outcomes(), d(),
                  MessageKind::quantum, dB > 1 ? Assistance::entanglement : Assistance::none};
}

void EaQuantumStateForm::validate(double tolerance) const {
  if (states.empty() || measurements.empty()) throw std::invalid_argument("EaQuantumStateForm: empty");
  for (const auto& s : states)
    if (s.dim() != d * dB) throw DimensionError("EaQuantumStateForm: state dimension");
  const int nb = measurements.front().outcomes();
  for (const auto& m : measurements) {
    if (m.dim() != d * dB) throw DimensionError("EaQuantumStateForm: measurement dimension");
    if (m.outcomes() != nb) throw std::invalid_argument("EaQuantumStateForm: outcome counts differ");
  }
  if (marginal_spread() > tolerance) throw std::invalid_argument("EaQuantumStateForm: marginals on B differ");
}

Scenario EaQuantumStateForm::scenario() const {
  return Scenario{static_cast<int>(states.size()), static_cast<int>(measurements.size()), measurements.front().outcomes(), d,
                  MessageKind::quantum, dB > 1 ? Assistance::entanglement : Assistance::none};
}

double EaQuantumStateForm::marginal_spread() const {
  double r = 0.0;
  if (states.empty()) return r;
  ComplexMatrix m0 = partial_trace(states.front().matrix(), d, dB, Keep::B);
  for (const auto& s : states) r = std::max(r, (partial_trace(s.matrix(), d, dB, Keep::B) - m0).cwiseAbs().maxCoeff());
  return r;
}

void EaClassicalStrategy::validate() const {
  if (shared_state.dim() != dA * dB) throw DimensionError("EaClassicalStrategy: shared state dimension");
  if (alice.empty() || bob.empty()) throw std::invalid_argument("EaClassicalStrategy: empty protocol");
  const int d0 = d();
  for (const auto& a : alice) {
    if (a.dim() != dA) throw DimensionError("EaClassicalStrategy: Alice measurement dimension");
    if (a.outcomes() != d0) throw std::invalid_argument("EaClassicalStrategy: message sizes differ");
  }
  const int nb = bob.front().front().outcomes();
  for (const auto& row : bob) {
    if (static_cast<int>(row.size()) != d0) throw std::invalid_argument("EaClassicalStrategy: Bob needs one POVM per message");
    for (const auto& m : row) {
      if (m.dim() != dB) throw DimensionError("EaClassicalStrategy: Bob measurement dimension");
      if (m.outcomes() != nb) throw std::invalid_argument("EaClassicalStrategy: outcome counts differ");
    }
  }
}

Scenario EaClassicalStrategy::scenario() const {
  return Scenario{static_cast<int>(alice.size()), static_cast<int>(bob.size()), bob.front().front().outcomes(), d(),
                  MessageKind::classical, dB > 1 ? Assistance::entanglement : Assistance::none};
}

void EaClassicalStateForm::validate(double tolerance) const {
  if (substates.empty() || bob.empty()) throw std::invalid_argument("EaClassicalStateForm: empty");
  for (const auto& row : substates) {
    if (static_cast<int>(row.size()) != d) throw std::invalid_argument("EaClassicalStateForm: one sub-state per message");
    for (const auto& t : row) {
      if (t.rows() != dB || t.cols() != dB) throw DimensionError("EaClassicalStateForm: sub-state dimension");
      if (!is_hermitian(t, tolerance) || !is_psd(t, tolerance))
        throw std::invalid_argument("EaClassicalStateForm: sub-state not positive");
    }
  }
  const int nb = bob.front().front().outcomes();
  for (const auto& row : bob) {
    if (static_cast<int>(row.size()) != d) throw std::invalid_argument("EaClassicalStateForm: one POVM per message");
    for (const auto& m : row)
      if (m.dim() != dB || m.outcomes() != nb) throw DimensionError("EaClassicalStateForm: measurement shape");
  }
  ComplexMatrix t0 = ComplexMatrix::Zero(dB, dB);
  for (const auto& t : substates.front()) t0 += t;
  if (std::abs(t0.trace().real() - 1.0) > tolerance) throw std::invalid_argument("EaClassicalStateForm: tau_B not normalized");
  if (marginal_spread() > tolerance) throw std::invalid_argument("EaClassicalStateForm: marginals on B differ");
}

Scenario EaClassicalStateForm::scenario() const {
  return Scenario{static_cast<int>(substates.size()), static_cast<int>(bob.size()), bob.front().front().outcomes(), d,
                  MessageKind::classical, dB > 1 ? Assistance::entanglement : Assistance::none};
}

double EaClassicalStateForm::marginal_spread() const {
  double r = 0.0;
  if (substates.empty()) return r;
  ComplexMatrix t0 = ComplexMatrix::Zero(dB, dB);
  for (const auto& t : substates.front()) t0 += t;
  for (const auto& row : substates) {
    ComplexMatrix s = ComplexMatrix::Zero(dB, dB);
    for (const auto& t : row) s += t;
    r = std::max(r, (s - t0).cwiseAbs().maxCoeff());
  }
  return r;
}

// ------------------------------------------------------------- simulation

EaQuantumStateForm to_state_form(const EaQuantumStrategy& s) {
  s.validate();
  EaQuantumStateForm f;
  f.d = s.d();
  f.dB = s.dB;
  const ComplexMatrix phi = s.shared_state.density();
  for (const auto& ch : s.channels) {
    ComplexMatrix t = ch.apply_first(phi, s.dB);
    t = 0.5 * (t + t.adjoint());
    f.states.emplace_back(t);
  }
  f.measurements = s.measurements;
  return f;
}

Behavior simulate(const EaQuantumStateForm& s) {
  const Scenario sc = s.scenario();
  auto t = behavior_table(sc.n_x, sc.n_y, sc.n_b);
  for (int x = 0; x < sc.n_x; ++x)
    for (int y = 0; y < sc.n_y; ++y)
      for (int b = 0; b < sc.n_b; ++b)
        t[static_cast<size_t>(sc.index(x, y, b))] =
            (s.states[static_cast<size_t>(x)].matrix() * s.measurements[static_cast<size_t>(y)][b]).trace().real();
  return make_behavior(sc, std::move(t));
}

Behavior simulate_quantum(const EaQuantumStrategy& s) { return simulate(to_state_form(s)); }

EaClassicalStateForm to_state_form(const EaClassicalStrategy& s) {
  s.validate();
  EaClassicalStateForm f;
  f.d = s.d();
  f.dB = s.dB;
  const ComplexMatrix phi = s.shared_state.density();
  for (const auto& a : s.alice) {
    std::vector<ComplexMatrix> row;
    for (int c = 0; c < a.outcomes(); ++c) {
      ComplexMatrix t = partial_trace(tensor_id(a[c], s.dB) * phi, s.dA, s.dB, Keep::B);
      row.push_back(0.5 * (t + t.adjoint()));
    }
    f.substates.push_back(std::move(row));
  }
  f.bob = s.bob;
  return f;
}

Behavior simulate(const EaClassicalStateForm& s) {
  const Scenario sc = s.scenario();
  auto t = behavior_table(sc.n_x, sc.n_y, sc.n_b);
  for (int x = 0; x < sc.n_x; ++x)
    for (int y = 0; y < sc.n_y; ++y)
      for (int b = 0; b < sc.n_b; ++b) {
        double p = 0.0;
        for (int c = 0; c < s.d; ++c)
          p += (s.substates[static_cast<size_t>(x)][static_cast<size_t>(c)] * s.bob[static_cast<size_t>(y)][static_cast<size_t>(c)][b])
                   .trace()
                   .real();
        t[static_cast<size_t>(sc.index(x, y, b))] = p;
      }
  return make_behavior(sc, std::move(t));
}

Behavior simulate_classical(const EaClassicalStrategy& s) { return simulate(to_state_form(s)); }

EaQuantumStrategy embed_classical(const EaClassicalStrategy& s) {
  s.validate();
  EaQuantumStrategy q;
  q.shared_state = s.shared_state;
  q.dA = s.dA;
  q.dB = s.dB;
  const int d = s.d();
  for (const auto& a : s.alice) {
    std::vector<ComplexMatrix> ops;
    for (int c = 0; c < d; ++c) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a[c]);
      ComplexMatrix root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
      for (int i = 0; i < s.dA; ++i) {
        ComplexMatrix k = ComplexMatrix::Zero(d, s.dA);
        k.row(c) = root.row(i);
        ops.push_back(std::move(k));
      }
    }
    q.channels.emplace_back(std::move(ops), 1e-8);
  }
  for (const auto& row : s.bob) {
    const int nb = row.front().outcomes();
    std::vector<ComplexMatrix> el(static_cast<size_t>(nb), ComplexMatrix::Zero(d * s.dB, d * s.dB));
    for (int c = 0; c < d; ++c) {
      ComplexMatrix proj = ComplexMatrix::Zero(d, d);
      proj(c, c) = 1.0;
      for (int b = 0; b < nb; ++b) el[static_cast<size_t>(b)] += kron(proj, row[static_cast<size_t>(c)][b]);
    }
    q.measurements.emplace_back(std::move(el), 1e-8);
  }
  return q;
}

EaQuantumStateForm embed_classical(const EaClassicalStateForm& s) {
  EaQuantumStateForm q;
  q.d = s.d;
  q.dB = s.dB;
  for (const auto& row : s.substates) {
    ComplexMatrix t = ComplexMatrix::Zero(s.d * s.dB, s.d * s.dB);
    for (int c = 0; c < s.d; ++c) t.block(c * s.dB, c * s.dB, s.dB, s.dB) = row[static_cast<size_t>(c)];
    q.states.emplace_back(t);
  }
  for (const auto& row : s.bob) {
    const int nb = row.front().outcomes();
    std::vector<ComplexMatrix> el(static_cast<size_t>(nb), ComplexMatrix::Zero(s.d * s.dB, s.d * s.dB));
    for (int c = 0; c < s.d; ++c)
      for (int b = 0; b < nb; ++b) el[static_cast<size_t>(b)].block(c * s.dB, c * s.dB, s.dB, s.dB) = row[static_cast<size_t>(c)][b];
    q.measurements.emplace_back(std::move(el), 1e-8);
  }
  return q;
}

BinaryObservable optimal_binary_observable(const ComplexMatrix& signed_combo) {
  HermitianEig eig = hermitian_eig(signed_combo);
  const Eigen::Index n = eig.values.size();
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  ComplexMatrix plus = ComplexMatrix::Zero(n, n);
  double value = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    value += std::abs(eig.values(k));
    if (eig.values(k) >= -1e-12 * scale) plus += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }
  ComplexMatrix minus = ComplexMatrix::Identity(n, n) - plus;
  return {Povm({plus, minus}), value};
}

Povm coarse_grain(const Povm& p, const std::vector<int>& map, int outcomes) {
  if (static_cast<int>(map.size()) != p.outcomes()) throw std::invalid_argument("coarse_grain: map size");
  std::vector<ComplexMatrix> el(static_cast<size_t>(outcomes), ComplexMatrix::Zero(p.dim(), p.dim()));
  for (int o = 0; o < p.outcomes(); ++o) {
    const int b = map[static_cast<size_t>(o)];
    if (b < 0 || b >= outcomes) throw std::out_of_range("coarse_grain: target outcome");
    el[static_cast<size_t>(b)] += p[o];
  }
  return Povm(std::move(el));
}

// ------------------------------------------------------------- built-ins

namespace {

std::vector<ComplexMatrix> bell_projectors() {
  const PureState phi = phi_max(2);
  std::vector<ComplexMatrix> out;
  for (int x = 0; x < 4; ++x) {
    const int x1 = x / 2, x2 = x % 2;
    ComplexMatrix u = identity(2);
    if (x1) u = pauli::Z() * u;
    if (x2) u = pauli::X() * u;
    ComplexVector v = kron(u, identity(2)) * phi.amplitudes();
    out.push_back(projector(v));
  }
  return out;
}

std::vector<KrausChannel> dense_coding_channels() {
  std::vector<KrausChannel> ch;
  for (int x = 0; x < 4; ++x) {
    ComplexMatrix u = identity(2);
    if (x / 2) u = pauli::Z() * u;
    if (x % 2) u = pauli::X() * u;
    ch.push_back(KrausChannel::unitary(u));
  }
  return ch;
}

}  // namespace

EaQuantumStrategy dense_coding_bell() {
  EaQuantumStrategy s;
  s.shared_state = phi_max(2);
  s.dA = s.dB = 2;
  s.channels = dense_coding_channels();
  s.measurements.emplace_back(bell_projectors());
  return s;
}

EaQuantumStrategy dense_coding() {
  EaQuantumStrategy s = dense_coding_bell();
  const Povm bell = s.measurements.front();
  s.measurements.clear();
  s.measurements.push_back(coarse_grain(bell, {0, 0, 1, 1}, 2));  // b = x1
  s.measurements.push_back(coarse_grain(bell, {0, 1, 0, 1}, 2));  // b = x2
  return s;
}

EaQuantumStrategy flagged_qubit_strategy() {
  EaQuantumStrategy s;
  s.shared_state = phi_max(2);
  s.dA = s.dB = 2;
  const cplx i(0.0, 1.0);
  ComplexMatrix u1 = (pauli::I() - i * pauli::X()) / std::sqrt(2.0);
  for (const auto& u : {u1, pauli::I(), pauli::X(), pauli::Y(), pauli::Z()}) s.channels.push_back(KrausChannel::unitary(u));
  std::vector<ComplexMatrix> tau;
  for (const auto& ch : s.channels) tau.push_back(ch.apply_first(s.shared_state.density(), 2));
  s.measurements = optimal_measurements(tau, catalog("w_frac", 1.0).coeffs);
  return s;
}

EaQuantumStrategy ququart_strategy() {
  EaQuantumStrategy s;
  // A1 A2 B1 B2 ordering, sum_ij |ij>_A |ij>_B / 2.
  ComplexVector amp = ComplexVector::Zero(16);
  for (int a = 0; a < 4; ++a) amp(a * 4 + a) = 0.5;
  s.shared_state = PureState(amp);
  s.dA = s.dB = 4;
  const ComplexMatrix c1 = cnot(0), c2 = cnot(1);
  const ComplexMatrix I = pauli::I(), X = pauli::X(), Z = pauli::Z();
  const std::vector<ComplexMatrix> U = {
      identity(4),
      c1 * c2,
      kron(I, X) * c1 * c2,
      kron(I, Z),
      kron(I, Z * X) * c2,
  };
  for (const auto& u : U) {
    std::vector<ComplexMatrix> ops;
    for (int a1 = 0; a1 < 2; ++a1) {
      ComplexMatrix bra = ComplexMatrix::Zero(2, 4);  // <a1|_A1 (x) 1_A2
      bra(0, 2 * a1) = 1.0;
      bra(1, 2 * a1 + 1) = 1.0;
      ops.push_back(bra * u);
    }
    s.channels.emplace_back(std::move(ops));
  }
  std::vector<ComplexMatrix> tau;
  for (const auto& ch : s.channels) tau.push_back(ch.apply_first(s.shared_state.density(), 4));
  s.measurements = optimal_measurements(tau, catalog("w_frac", 1.0).coeffs);
  return s;
}

EaClassicalStrategy chsh_ea_bit() {
  EaClassicalStrategy s;
  s.shared_state = phi_max(2);
  s.dA = s.dB = 2;
  auto split = [](const ComplexMatrix& obs) {
    BinaryObservable b = optimal_binary_observable(obs);
    return std::make_pair(b.povm[0], b.povm[1]);  // (+1, -1) projectors
  };
  const auto [z0, z1] = split(pauli::Z());
  const auto [x0, x1] = split(pauli::X());
  const double r = 1.0 / std::sqrt(2.0);
  const auto [p0, p1] = split(r * (pauli::Z() + pauli::X()));
  const auto [q0, q1] = split(r * (pauli::Z() - pauli::X()));
  // Alice measures Z or X depending on x1 xor x2 and sends c = a xor x1.
  for (int x = 0; x < 4; ++x) {
    const int b1 = x / 2, b2 = x % 2;
    const bool use_x = (b1 ^ b2) != 0;
    ComplexMatrix a0 = use_x ? x0 : z0, a1 = use_x ? x1 : z1;
    if (b1) std::swap(a0, a1);
    s.alice.emplace_back(std::vector<ComplexMatrix>{a0, a1});
  }
  // Bob measures (Z +- X)/sqrt2 for y and outputs c xor b'.
  for (int y = 0; y < 2; ++y) {
    std::vector<Povm> row;
    for (int c = 0; c < 2; ++c) {
      ComplexMatrix e0 = y == 0 ? p0 : q0, e1 = y == 0 ? p1 : q1;
      if (c) std::swap(e0, e1);
      row.emplace_back(std::vector<ComplexMatrix>{e0, e1});
    }
    s.bob.push_back(std::move(row));
  }
  return s;
}

// ------------------------------------------------------------- json

namespace {

nlohmann::json povm_to_json(const Povm& p) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : p.elements()) a.push_back(matrix_to_json(e));
  return a;
}

Povm povm_from_json(const nlohmann::json& j) {
  std::vector<ComplexMatrix> el;
  for (const auto& e : j) el.push_back(matrix_from_json(e));
  return Povm(std::move(el), 1e-7);
}

}  // namespace

nlohmann::json to_json(const EaQuantumStateForm& s) {
  nlohmann::json j;
  j["kind"] = "quantum_state_form";
  j["d"] = s.d;
  j["dB"] = s.dB;
  auto& st = j["states"] = nlohmann::json::array();
  for (const auto& t : s.states) st.push_back(matrix_to_json(t.matrix()));
  auto& ms = j["measurements"] = nlohmann::json::array();
  for (const auto& m : s.measurements) ms.push_back(povm_to_json(m));
  return j;
}

nlohmann::json to_json(const EaClassicalStateForm& s) {
  nlohmann::json j;
  j["kind"] = "classical_state_form";
  j["d"] = s.d;
  j["dB"] = s.dB;
  auto& st = j["substates"] = nlohmann::json::array();
  for (const auto& row : s.substates) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& t : row) r.push_back(matrix_to_json(t));
    st.push_back(std::move(r));
  }
  auto& ms = j["bob"] = nlohmann::json::array();
  for (const auto& row : s.bob) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& m : row) r.push_back(povm_to_json(m));
    ms.push_back(std::move(r));
  }
  return j;
}

nlohmann::json to_json(const EaQuantumStrategy& s) {
  nlohmann::json j;
  j["kind"] = "quantum_strategy";
  j["dA"] = s.dA;
  j["dB"] = s.dB;
  j["shared_state"] = matrix_to_json(s.shared_state.amplitudes());
  auto& ch = j["channels"] = nlohmann::json::array();
  for (const auto& c : s.channels) {
    nlohmann::json k = nlohmann::json::array();
    for (const auto& op : c.kraus_ops()) k.push_back(matrix_to_json(op));
    ch.push_back(std::move(k));
  }
  auto& ms = j["measurements"] = nlohmann::json::array();
  for (const auto& m : s.measurements) ms.push_back(povm_to_json(m));
  return j;
}

nlohmann::json to_json(const EaClassicalStrategy& s) {
  nlohmann::json j;
  j["kind"] = "classical_strategy";
  j["dA"] = s.dA;
  j["dB"] = s.dB;
  j["shared_state"] = matrix_to_json(s.shared_state.amplitudes());
  auto& al = j["alice"] = nlohmann::json::array();
  for (const auto& a : s.alice) al.push_back(povm_to_json(a));
  auto& bo = j["bob"] = nlohmann::json::array();
  for (const auto& row : s.bob) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& m : row) r.push_back(povm_to_json(m));
    bo.push_back(std::move(r));
  }
  return j;
}

EaQuantumStateForm quantum_state_form_from_json(const nlohmann::json& j) {
  EaQuantumStateForm s;
  s.d = j.at("d").get<int>();
  s.dB = j.at("dB").get<int>();
  for (const auto& t : j.at("states")) s.states.emplace_back(matrix_from_json(t));
  for (const auto& m : j.at("measurements")) s.measurements.push_back(povm_from_json(m));
  s.validate(1e-7);
  return s;
}

EaClassicalStateForm classical_state_form_from_json(const nlohmann::json& j) {
  EaClassicalStateForm s;
  s.d = j.at("d").get<int>();
  s.dB = j.at("dB").get<int>();
  for (const auto& row : j.at("substates")) {
    std::vector<ComplexMatrix> r;
    for (const auto& t : row) r.push_back(matrix_from_json(t));
    s.substates.push_back(std::move(r));
  }
  for (const auto& row : j.at("bob")) {
    std::vector<Povm> r;
    for (const auto& m : row) r.push_back(povm_from_json(m));
    s.bob.push_back(std::move(r));
  }
  s.validate(1e-7);
  return s;
}

}  // namespace eacomm
