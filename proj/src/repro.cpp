#include "eacomm/repro.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

#include "eacomm/hyperbit.hpp"
#include "eacomm/info_bound.hpp"
#include "eacomm/npa_classical.hpp"
#include "eacomm/npa_quantum.hpp"
#include "eacomm/seesaw.hpp"

namespace eacomm {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::paper_bound: return "paper_bound";
    case Provenance::paper_strategy: return "paper_strategy";
    case Provenance::reference_only: return "reference_only";
  }
  return "?";
}

std::string to_string(Tag t) { return t == Tag::fast ? "fast" : "slow"; }

namespace {

double simulate_on(const EaQuantumStrategy& s, const Witness& w) { return evaluate_witness(w, simulate_quantum(s)); }

double npa_c(const char* w, int d, const char* level) {
  auto r = npa::solve_upper_bound(catalog(w), d, npa::LevelSpec::parse(level));
  if (!r.solution.ok()) throw std::runtime_error("NPA solve " + r.report.status);
  return r.report.value;
}

double npa_q(const Witness& w, int d, const char* level) {
  auto r = npa::solve_upper_bound_quantum(w, d, npa::LevelSpec::parse(level));
  if (!r.solution.ok()) throw std::runtime_error("hybrid NPA solve " + r.report.status);
  return r.report.value;
}

SeesawConfig seesaw_cfg(const ReproContext& ctx, int D, int restarts) {
  SeesawConfig c;
  c.D = D;
  c.restarts = restarts;
  c.seed = ctx.seed;
  c.threads = ctx.threads;
  return c;
}

double see_c(const ReproContext& ctx, const char* w, int d, int D, int restarts) {
  return seesaw_classical(catalog(w), d, seesaw_cfg(ctx, D, restarts)).report.value;
}

double see_q(const ReproContext& ctx, const char* w, int d, int D, int restarts) {
  return seesaw_quantum(catalog(w), d, seesaw_cfg(ctx, D, restarts)).report.value;
}

std::vector<ReproTarget> build_targets() {
  using P = Provenance;
  const double s2 = std::sqrt(2.0);
  std::vector<ReproTarget> t;
  auto add = [&](std::string id, std::string desc, std::string method, double ref, P prov, double tol, Tag tag, Check check,
                 std::function<double(const ReproContext&)> run, std::optional<double> upper = std::nullopt) {
    t.push_back({std::move(id), std::move(desc), std::move(method), ref, prov, tol, tag, check, upper, std::move(run)});
  };

  add("rac_flagged_strategy", "W_RAC of the flagged qubit strategy", "simulate", 2 * (1 + std::sqrt(5.0)), P::paper_strategy, 1e-9,
      Tag::fast, Check::equal, [](const ReproContext&) {
        const Witness w = catalog("w_rac_flagged");
        const Behavior b = simulate_quantum(flagged_qubit_strategy());
        if (!check_constraints(w, b)) throw std::runtime_error("flag constraints violated");
        Witness plain = w;
        plain.constraints.clear();
        return evaluate_witness(plain, b);
      });
  add("rac_ququart_strategy", "RAC part of the ququart CNOT strategy", "simulate", 2 * (2 + s2), P::paper_strategy, 1e-9, Tag::fast,
      Check::equal, [](const ReproContext&) { return simulate_on(ququart_strategy(), catalog("w_frac", 0.0)); });
  add("frac_ququart_strategy", "W_fRAC(beta=4) of the ququart CNOT strategy", "simulate", 38.8284, P::paper_strategy, 1e-4,
      Tag::fast, Check::equal, [](const ReproContext&) { return simulate_on(ququart_strategy(), catalog("w_frac", 4.0)); });
  add("rac_dense_coding", "W_RAC of dense coding", "simulate", 8.0, P::paper_strategy, 1e-9, Tag::fast, Check::equal,
      [](const ReproContext&) { return simulate_on(dense_coding(), catalog("w_rac")); });
  add("rac_chsh_ea_bit", "W_RAC of the CHSH-based EA bit", "simulate", 4 * s2, P::paper_strategy, 1e-9, Tag::fast, Check::equal,
      [](const ReproContext&) { return evaluate_witness(catalog("w_rac"), simulate_classical(chsh_ea_bit())); });

  for (int d : {2, 3, 4})
    add("rac_c" + std::to_string(d) + "_bruteforce", "W_RAC classical d=" + std::to_string(d), "bruteforce", 2.0 * d,
        P::paper_bound, 1e-12, Tag::fast, Check::equal,
        [d](const ReproContext&) { return classical_bound_bruteforce(catalog("w_rac"), d); });
  for (int d : {2, 3, 4, 5})
    add("w5_c" + std::to_string(d) + "_bruteforce", "W_5 classical d=" + std::to_string(d), "bruteforce", 4.0 + 2.0 * d,
        P::paper_bound, 1e-12, Tag::fast, Check::equal,
        [d](const ReproContext&) { return classical_bound_bruteforce(catalog("w_5"), d); });

  add("rac_ea_c2_npa", "W_RAC EA classical d=2, level 1", "npa_classical", 5.657, P::paper_bound, 1e-3, Tag::fast, Check::equal,
      [](const ReproContext&) { return npa_c("w_rac", 2, "1"); });
  add("rac_ea_c3_npa", "W_RAC EA classical d=3, level 1+AB+AA", "npa_classical", 6.828, P::paper_bound, 1e-3, Tag::fast,
      Check::equal, [](const ReproContext&) { return npa_c("w_rac", 3, "1+AB+AA"); });
  add("w5_ea_c2_npa", "W_5 EA classical d=2, level 2", "npa_classical", 9.034, P::paper_bound, 2e-3, Tag::slow, Check::equal,
      [](const ReproContext&) { return npa_c("w_5", 2, "2"); });
  add("rac_ea_q2_npa", "W_RAC EA quantum d=2, hybrid level 1", "npa_quantum", 8.0, P::paper_bound, 1e-6, Tag::fast, Check::equal,
      [](const ReproContext&) { return npa_q(catalog("w_rac"), 2, "1"); });
  add("w5_ea_q2_npa", "W_5 EA quantum d=2, hybrid level 1 (trivial bound expected)", "npa_quantum", 13.036, P::paper_bound, 1e-3,
      Tag::slow, Check::within, [](const ReproContext&) { return npa_q(catalog("w_5"), 2, "1"); }, 14.0);
  add("frac_ea_q3_npa", "W_fRAC(beta=4) EA quantum d=3, hybrid level 0", "npa_quantum", 40.0, P::paper_bound, 1e-3, Tag::slow,
      Check::at_least, [](const ReproContext&) { return npa_q(catalog("w_frac", 4.0), 3, "0"); });

  add("w5_ea_c2_seesaw", "W_5 EA classical d=2, D=4", "seesaw_classical", 9.034, P::paper_strategy, 1e-2, Tag::fast,
      Check::at_least, [](const ReproContext& c) { return see_c(c, "w_5", 2, 4, 50); });
  add("rac_ea_c3_seesaw", "W_RAC EA classical d=3, D=4", "seesaw_classical", 6.828, P::paper_strategy, 1e-2, Tag::fast,
      Check::at_least, [](const ReproContext& c) { return see_c(c, "w_rac", 3, 4, 20); });
  add("w5_ea_q2_seesaw", "W_5 EA quantum d=2, D=4", "seesaw_quantum", 13.036, P::paper_strategy, 1e-2, Tag::fast,
      Check::at_least, [](const ReproContext& c) { return see_q(c, "w_5", 2, 4, 20); });
  add("w5_q2_seesaw", "W_5 quantum d=2 without entanglement", "seesaw_quantum", 8.828, P::paper_bound, 1e-2, Tag::fast,
      Check::at_least, [](const ReproContext& c) { return see_q(c, "w_5", 2, 1, 20); });
  add("rac_q2_seesaw", "W_RAC quantum d=2 without entanglement", "seesaw_quantum", 4 * s2, P::paper_bound, 1e-2, Tag::fast,
      Check::at_least, [](const ReproContext& c) { return see_q(c, "w_rac", 2, 1, 10); });
  add("rac9_ea_c3_seesaw", "Nine-input ternary RAC, EA classical d=3, D=9", "seesaw_classical", 0.784, P::paper_strategy, 1e-3,
      Tag::slow, Check::at_least, [](const ReproContext& c) { return see_c(c, "rac_9_3", 3, 9, 4); });
  add("rac9_c3_d3_seesaw", "Nine-input ternary RAC, EA classical d=3, D=3", "seesaw_classical", 7.0 / 9.0, P::paper_strategy, 1e-3,
      Tag::fast, Check::at_least, [](const ReproContext& c) { return see_c(c, "rac_9_3", 3, 3, 10); });
  add("rac9_qutrit_strategy", "Nine-input ternary RAC, qutrit without entanglement", "seesaw_quantum", 0.5 * (1 + 1 / std::sqrt(3.0)),
      P::paper_strategy, 1e-3, Tag::fast, Check::equal, [](const ReproContext& c) { return see_q(c, "rac_9_3", 3, 1, 10); });

  add("hyperbit_w5", "Hyperbit bound on W_5", "hyperbit_gram", 9.0, P::paper_bound, 1e-3, Tag::fast, Check::equal,
      [](const ReproContext&) { return hyperbit_upper_bound(catalog("w_5")).report.value; });
  add("hyperbit_rac", "Hyperbit bound on W_RAC", "hyperbit_gram", 4 * s2, P::paper_bound, 1e-3, Tag::fast, Check::equal,
      [](const ReproContext&) { return hyperbit_upper_bound(catalog("w_rac")).report.value; });
  add("w5_ea_bit_minus_hyperbit", "EA bit seesaw value minus hyperbit bound on W_5", "seesaw_classical,hyperbit_gram", 0.034,
      P::paper_bound, 1e-2, Tag::fast, Check::at_least, [](const ReproContext& c) {
        const Separation s = ea_bit_exceeds_hyperbit_demo(catalog("w_5"), seesaw_cfg(c, 4, 50));
        return s.ea_value - s.hyperbit_bound;
      });
  add("info_dense_coding", "Information of the dense-coding ensemble (bits)", "info", 2.0, P::paper_bound, 1e-6, Tag::fast,
      Check::equal, [](const ReproContext&) { return information(ensemble_of(to_state_form(dense_coding_bell()))); });

  add("w5_ea_c3_info", "W_5 EA classical d=3 info bound; computed: NPA level 1+AB", "npa_classical", 11.563, P::reference_only,
      1e-3, Tag::slow, Check::equal, [](const ReproContext&) { return npa_c("w_5", 3, "1+AB"); });
  add("w5_ea_c4_info", "W_5 EA classical d=4 / EA quantum d=2 info bound; computed: EA qubit seesaw", "seesaw_quantum", 13.095,
      P::reference_only, 1e-3, Tag::fast, Check::equal, [](const ReproContext& c) { return see_q(c, "w_5", 2, 4, 20); });
  add("frac_ea_q2_info", "W_fRAC EA quantum d=2 info bound; computed: ququart strategy", "simulate", 38.8284, P::reference_only,
      1e-3, Tag::fast, Check::equal, [](const ReproContext&) { return simulate_on(ququart_strategy(), catalog("w_frac", 4.0)); });
  add("rac9_ea_c3_info", "Nine-input ternary RAC EA classical d=3 info bound; computed: seesaw D=9", "seesaw_classical", 0.787,
      P::reference_only, 1e-3, Tag::slow, Check::equal, [](const ReproContext& c) { return see_c(c, "rac_9_3", 3, 9, 4); });
  add("w5_info1_strategy", "W_5 with one bit of information; computed: EA bit seesaw", "seesaw_classical", 9.054,
      P::reference_only, 1e-3, Tag::fast, Check::equal, [](const ReproContext& c) { return see_c(c, "w_5", 2, 4, 50); });
  return t;
}

std::string verdict(const ReproTarget& t, double v) {
  if (t.provenance == Provenance::reference_only) return "reference_only";
  if (!std::isfinite(v)) return "fail";
  bool ok = false;
  switch (t.check) {
    case Check::equal: ok = std::abs(v - t.reference_value) <= t.tolerance; break;
    case Check::at_least: ok = v >= t.reference_value - t.tolerance; break;
    case Check::at_most: ok = v <= t.reference_value + t.tolerance; break;
    case Check::within: ok = v >= t.reference_value - t.tolerance && v <= t.upper.value_or(t.reference_value) + t.tolerance; break;
  }
  return ok ? "pass" : "fail";
}

}  // namespace

const std::vector<ReproTarget>& repro_targets() {
  static const std::vector<ReproTarget> targets = build_targets();
  return targets;
}

bool passed(const ReproOutcome& o) { return o.verdict == "pass" || o.verdict == "reference_only"; }

std::vector<ReproOutcome> reproduce(const std::string& filter, const ReproContext& ctx) {
  std::vector<const ReproTarget*> sel;
  for (const auto& t : repro_targets())
    if (filter == "all" || filter == to_string(t.tag) || filter == t.id) sel.push_back(&t);
  if (sel.empty()) throw std::invalid_argument("reproduce: no target matches '" + filter + "'");

  std::vector<ReproOutcome> out(sel.size());
  std::atomic<size_t> next{0};
  ReproContext inner = ctx;
  const int pool = std::max(1, std::min<int>(ctx.threads, static_cast<int>(sel.size())));
  if (pool > 1) inner.threads = 1;
  auto worker = [&]() {
    for (size_t i = next++; i < sel.size(); i = next++) {
      const ReproTarget& t = *sel[i];
      ReproOutcome& o = out[i];
      o.id = t.id;
      o.description = t.description;
      o.method = t.method;
      o.provenance = t.provenance;
      o.tag = t.tag;
      o.reference_value = t.reference_value;
      o.tolerance = t.tolerance;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const double v = t.run(inner);
        o.computed = v;
        o.verdict = verdict(t, v);
      } catch (const std::exception& e) {
        o.verdict = "error";
        o.message = e.what();
      }
      o.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::vector<std::thread> threads;
  for (int i = 1; i < pool; ++i) threads.emplace_back(worker);
  worker();
  for (auto& th : threads) th.join();
  return out;
}

nlohmann::json to_json(const ReproOutcome& o, bool include_time) {
  nlohmann::json j;
  j["id"] = o.id;
  j["description"] = o.description;
  j["method"] = o.method;
  j["provenance"] = to_string(o.provenance);
  j["tag"] = to_string(o.tag);
  j["reference"] = o.reference_value;
  j["tolerance"] = o.tolerance;
  j["computed"] = o.computed ? nlohmann::json(*o.computed) : nlohmann::json(nullptr);
  j["verdict"] = o.verdict;
  if (!o.message.empty()) j["message"] = o.message;
  if (include_time) j["wall_time"] = o.wall_time;
  return j;
}

}  // namespace eacomm
