// eacomm command-line interface.
//   eacomm [--seed N] [--threads N] [--out FILE] [--format json|csv|text] <command> ...
// Exit status: 0 success, 2 a reproduction target failed, 1 error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eacomm/hyperbit.hpp"
#include "eacomm/info_bound.hpp"
#include "eacomm/npa_classical.hpp"
#include "eacomm/npa_quantum.hpp"
#include "eacomm/repro.hpp"
#include "eacomm/seesaw.hpp"
#include "eacomm/strategies.hpp"

using nlohmann::json;
using namespace eacomm;

namespace {

struct Global {
  std::uint64_t seed = 7;
  int threads = 1;
  std::string out;
  std::string format = "text";
  bool timing = false;
};

struct WitnessArgs {
  std::string name = "w_rac";
  std::string file;
  double beta = 4.0;

  void attach(CLI::App* app) {
    app->add_option("--witness", name, "Catalog witness: w_rac, w_frac, w_rac_flagged, w_5, rac_9_3");
    app->add_option("--witness-file", file, "Witness JSON file (overrides --witness)");
    app->add_option("--beta", beta, "Penalty weight for w_frac");
  }
  Witness get() const {
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw std::runtime_error("cannot open " + file);
      return witness_from_json(json::parse(in));
    }
    return catalog(name, beta);
  }
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

EaQuantumStrategy builtin_quantum(const std::string& name) {
  if (name == "dense_coding") return dense_coding();
  if (name == "dense_coding_bell") return dense_coding_bell();
  if (name == "flagged") return flagged_qubit_strategy();
  if (name == "ququart") return ququart_strategy();
  throw std::invalid_argument("unknown quantum strategy '" + name + "'");
}

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_flat(std::ostream& os, const json& j, const std::string& fmt, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      print_flat(os, *it, fmt, key);
    } else if (it->is_array() && !it->empty() && (it->front().is_object() || it->front().is_array())) {
      os << (fmt == "csv" ? key + ",<" + std::to_string(it->size()) + " items>" : key + ": <" + std::to_string(it->size()) + " items>")
         << "\n";
    } else {
      os << key << (fmt == "csv" ? "," : ": ") << scalar(*it) << "\n";
    }
  }
}

void print_table(std::ostream& os, const json& rows, const std::vector<std::string>& cols, const std::string& fmt) {
  if (fmt == "csv") {
    for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& r : rows) {
      for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << (r.contains(cols[i]) ? scalar(r[cols[i]]) : "");
      os << "\n";
    }
    return;
  }
  std::vector<size_t> w(cols.size());
  for (size_t i = 0; i < cols.size(); ++i) {
    w[i] = cols[i].size();
    for (const auto& r : rows) w[i] = std::max(w[i], r.contains(cols[i]) ? scalar(r[cols[i]]).size() : 0);
  }
  auto line = [&](auto get) {
    for (size_t i = 0; i < cols.size(); ++i) {
      std::string s = get(i);
      os << s << std::string(w[i] - s.size() + 2, ' ');
    }
    os << "\n";
  };
  line([&](size_t i) { return cols[i]; });
  for (const auto& r : rows) line([&](size_t i) { return r.contains(cols[i]) ? scalar(r[cols[i]]) : std::string(); });
}

void emit(const Global& g, const json& j) {
  if (!g.out.empty()) write_json(g.out, j);
  if (g.format == "json") std::cout << j.dump(2) << "\n";
  else print_flat(std::cout, j, g.format);
}

json report_json(const BoundReport& r, const Global& g) { return to_json(r, g.timing); }

MessageKind message_arg(const std::string& s) { return message_kind_from_string(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlations in entanglement-assisted prepare-and-measure scenarios"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file presetting options");
  Global g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads (EACOMM_THREADS overrides)")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Write the JSON report to this file");
  app.add_option("--format", g.format, "Console format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_flag("--timing", g.timing, "Include wall-clock times in reports");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a built-in or stored strategy on a witness");
  std::string sim_strategy = "dense_coding", sim_file;
  WitnessArgs sim_w;
  sim->add_option("--strategy", sim_strategy, "dense_coding, dense_coding_bell, flagged, ququart, chsh_ea_bit");
  sim->add_option("--strategy-file", sim_file, "State-form JSON written by seesaw");
  sim_w.attach(sim);

  // seesaw
  auto* see = app.add_subcommand("seesaw", "Seesaw lower bound");
  WitnessArgs see_w;
  std::string see_msg = "classical", see_strategy_out;
  SeesawConfig see_cfg;
  int see_d = 2;
  see_w.attach(see);
  see->add_option("--message", see_msg, "classical or quantum");
  see->add_option("--d", see_d, "Message dimension");
  see->add_option("--D", see_cfg.D, "Local dimension of Bob's entangled share");
  see->add_option("--restarts", see_cfg.restarts, "Random restarts");
  see->add_option("--max-iters", see_cfg.max_iters, "Iterations per restart");
  see->add_option("--conv-tol", see_cfg.conv_tol, "Stop when the improvement is below this");
  see->add_option("--strategy-out", see_strategy_out, "Write the best strategy (JSON) here");

  // npa
  auto* npa_cmd = app.add_subcommand("npa", "NPA upper bound");
  WitnessArgs npa_w;
  std::string npa_msg = "classical", npa_level = "1", npa_export;
  int npa_d = 2;
  bool keep_last = false, no_positivity = false;
  npa_w.attach(npa_cmd);
  npa_cmd->add_option("--message", npa_msg, "classical or quantum");
  npa_cmd->add_option("--d", npa_d, "Message dimension");
  npa_cmd->add_option("--level", npa_level, "Level, e.g. 2 or 1+AB+AA (groups A,B classical; U,M quantum)");
  npa_cmd->add_option("--export", npa_export, "Write the SDP in SDPA sparse format and skip solving");
  npa_cmd->add_flag("--keep-last-outcome", keep_last, "Quantum: keep every outcome as a letter");
  npa_cmd->add_flag("--no-positivity", no_positivity, "Quantum: omit p(b|x,y) >= 0");

  // hyperbit
  auto* hyp = app.add_subcommand("hyperbit", "Hyperbit upper bound");
  WitnessArgs hyp_w;
  hyp_w.attach(hyp);

  // info
  auto* info = app.add_subcommand("info", "Guessing probability and information of an ensemble");
  std::string info_file, info_strategy;
  info->add_option("--ensemble", info_file, "Ensemble JSON {priors, states} or a state-form JSON");
  info->add_option("--strategy", info_strategy, "Built-in strategy instead of a file");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "Run reproduction targets");
  std::string rep_tag = "fast", rep_id;
  rep->add_option("--tag", rep_tag, "fast, slow or all")->check(CLI::IsMember({"fast", "slow", "all"}));
  rep->add_option("--id", rep_id, "Single target id");
  bool rep_list = false;
  rep->add_flag("--list", rep_list, "List targets without running them");

  // export
  auto* exp = app.add_subcommand("export", "Write a catalog witness or built-in strategy as JSON");
  std::string exp_witness, exp_strategy;
  double exp_beta = 4.0;
  exp->add_option("--witness", exp_witness, "Catalog witness name");
  exp->add_option("--beta", exp_beta, "Penalty weight for w_frac");
  exp->add_option("--strategy", exp_strategy, "Built-in strategy name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (const char* env = std::getenv("EACOMM_THREADS")) {
    try {
      g.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "error: EACOMM_THREADS must be an integer\n";
      return 1;
    }
  }

  try {
    if (*sim) {
      const Witness w = sim_w.get();
      Behavior b;
      json strat;
      if (!sim_file.empty()) {
        const json j = read_json(sim_file);
        const std::string kind = j.value("kind", "");
        if (kind == "quantum_state_form") b = simulate(quantum_state_form_from_json(j));
        else if (kind == "classical_state_form") b = simulate(classical_state_form_from_json(j));
        else throw std::invalid_argument("unsupported strategy kind '" + kind + "'");
        strat = sim_file;
      } else if (sim_strategy == "chsh_ea_bit") {
        b = simulate_classical(chsh_ea_bit());
        strat = sim_strategy;
      } else {
        b = simulate_quantum(builtin_quantum(sim_strategy));
        strat = sim_strategy;
      }
      Witness plain = w;
      plain.constraints.clear();
      json j{{"strategy", strat}, {"witness", w.name}, {"value", evaluate_witness(plain, b)}};
      if (!w.constraints.empty()) j["constraints_satisfied"] = check_constraints(w, b);
      j["behavior"] = to_json(b);
      emit(g, j);
      return 0;
    }
    if (*see) {
      see_cfg.seed = g.seed;
      see_cfg.threads = g.threads;
      const Witness w = see_w.get();
      json j{{"witness", w.name}, {"message", see_msg}, {"d", see_d}, {"D", see_cfg.D}, {"restarts", see_cfg.restarts}, {"seed", g.seed}};
      json strategy;
      if (message_arg(see_msg) == MessageKind::classical) {
        auto r = seesaw_classical(w, see_d, see_cfg);
        j["report"] = report_json(r.report, g);
        j["best_restart"] = r.best_restart;
        strategy = to_json(r.strategy);
      } else {
        auto r = seesaw_quantum(w, see_d, see_cfg);
        j["report"] = report_json(r.report, g);
        j["best_restart"] = r.best_restart;
        strategy = to_json(r.strategy);
      }
      if (!see_strategy_out.empty()) {
        write_json(see_strategy_out, strategy);
        j["strategy_file"] = see_strategy_out;
      } else {
        j["strategy"] = strategy;
      }
      emit(g, j);
      return 0;
    }
    if (*npa_cmd) {
      const Witness w = npa_w.get();
      if (!w.constraints.empty()) throw std::invalid_argument("npa: witness constraints are not supported; use w_frac");
      const npa::LevelSpec level = npa::LevelSpec::parse(npa_level);
      const Functional f = w.functional();
      Scenario s = w.scenario;
      s.d = npa_d;
      json j{{"witness", w.name}, {"message", npa_msg}, {"d", npa_d}, {"level", level.label()}};
      const npa::MomentProblem* mp = nullptr;
      std::optional<npa::BellRelaxation> rc;
      std::optional<npa::HybridRelaxation> rq;
      std::string method;
      if (message_arg(npa_msg) == MessageKind::classical) {
        rc = npa::build_relaxation(s, npa_d, level);
        npa::witness_objective(*rc, f);
        mp = &rc->problem;
        method = "npa_classical";
      } else {
        npa::HybridOptions ho;
        ho.eliminate_last_outcome = !keep_last;
        ho.positivity = !no_positivity;
        rq = npa::build_hybrid(s, npa_d, level, ho);
        npa::hybrid_objective(*rq, f);
        mp = &rq->problem;
        method = "npa_quantum";
      }
      j["matrix_size"] = mp->matrix_size();
      j["moments"] = mp->num_moments();
      j["equalities"] = mp->equalities().size();
      if (!npa_export.empty()) {
        sdp::export_sdpa(mp->to_sdp(), npa_export);
        j["export"] = npa_export;
        emit(g, j);
        return 0;
      }
      auto r = npa::solve_relaxation(*mp, method, level.label());
      j["report"] = report_json(r.report, g);
      j["iterations"] = r.solution.iterations;
      emit(g, j);
      return r.solution.ok() ? 0 : 1;
    }
    if (*hyp) {
      const Witness w = hyp_w.get();
      auto r = hyperbit_upper_bound(w);
      json j{{"witness", w.name}, {"report", report_json(r.report, g)}, {"discarded_inputs", r.discarded}};
      emit(g, j);
      return 0;
    }
    if (*info) {
      Ensemble e;
      int k = 1, d = 1;
      if (!info_file.empty()) {
        const json j = read_json(info_file);
        const std::string kind = j.value("kind", "");
        if (kind == "quantum_state_form") {
          auto s = quantum_state_form_from_json(j);
          e = ensemble_of(s);
          k = schmidt_number_bound(s);
          d = s.d;
        } else if (kind == "classical_state_form") {
          auto s = classical_state_form_from_json(j);
          e = ensemble_of(s);
          d = s.d;
        } else {
          for (const auto& p : j.at("priors")) e.priors.push_back(p.get<double>());
          for (const auto& m : j.at("states")) e.states.emplace_back(matrix_from_json(m));
          d = e.states.empty() ? 1 : e.states.front().dim();
          k = 1;
          if (j.contains("d")) d = j["d"].get<int>();
          if (j.contains("k")) k = j["k"].get<int>();
        }
      } else if (info_strategy == "chsh_ea_bit") {
        auto s = to_state_form(chsh_ea_bit());
        e = ensemble_of(s);
        d = s.d;
      } else if (!info_strategy.empty()) {
        auto s = to_state_form(builtin_quantum(info_strategy));
        e = ensemble_of(s);
        k = schmidt_number_bound(s);
        d = s.d;
      } else {
        throw std::invalid_argument("info: give --ensemble or --strategy");
      }
      const Guessing pg = guessing_probability(e);
      json j{{"P_g", pg.p_guess}, {"I", information(e, pg)}, {"k", k}, {"d", d}, {"bound_log_kd", info_dimension_bound(k, d)}};
      emit(g, j);
      return 0;
    }
    if (*rep) {
      if (rep_list) {
        json rows = json::array();
        for (const auto& t : repro_targets())
          rows.push_back({{"id", t.id}, {"tag", to_string(t.tag)}, {"provenance", to_string(t.provenance)},
                          {"reference", t.reference_value}, {"description", t.description}});
        if (!g.out.empty()) write_json(g.out, rows);
        if (g.format == "json") std::cout << rows.dump(2) << "\n";
        else print_table(std::cout, rows, {"id", "tag", "provenance", "reference", "description"}, g.format);
        return 0;
      }
      ReproContext ctx{g.seed, g.threads};
      auto res = reproduce(rep_id.empty() ? rep_tag : rep_id, ctx);
      json rows = json::array();
      bool ok = true;
      for (const auto& o : res) {
        rows.push_back(to_json(o, g.timing));
        ok = ok && passed(o);
      }
      json j{{"seed", g.seed}, {"threads", g.threads}, {"targets", rows}, {"all_passed", ok}};
      if (!g.out.empty()) write_json(g.out, j);
      if (g.format == "json") {
        std::cout << j.dump(2) << "\n";
      } else {
        std::vector<std::string> cols = {"id", "computed", "reference", "tolerance", "verdict", "provenance"};
        if (g.timing) cols.push_back("wall_time");
        print_table(std::cout, rows, cols, g.format);
      }
      return ok ? 0 : 2;
    }
    if (*exp) {
      json j;
      if (!exp_witness.empty()) j = to_json(catalog(exp_witness, exp_beta));
      else if (exp_strategy == "chsh_ea_bit") j = to_json(chsh_ea_bit());
      else if (!exp_strategy.empty()) j = to_json(builtin_quantum(exp_strategy));
      else throw std::invalid_argument("export: give --witness or --strategy");
      if (!g.out.empty()) write_json(g.out, j);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
