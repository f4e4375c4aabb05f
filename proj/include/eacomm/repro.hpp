#pragma once

// Reproduction targets: named computations with a reference value, a
// comparison rule and a speed tag.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace eacomm {

enum class Provenance { paper_bound, paper_strategy, reference_only };
enum class Tag { fast, slow };
enum class Check { equal, at_least, at_most, within };

std::string to_string(Provenance p);
std::string to_string(Tag t);

struct ReproContext {
  std::uint64_t seed = 7;
  int threads = 1;
};

struct ReproTarget {
  std::string id;
  std::string description;
  std::string method;
  double reference_value = 0.0;
  Provenance provenance = Provenance::paper_bound;
  double tolerance = 1e-3;
  Tag tag = Tag::fast;
  Check check = Check::equal;
  std::optional<double> upper;  // Check::within: [reference - tol, upper + tol]
  std::function<double(const ReproContext&)> run;
};

struct ReproOutcome {
  std::string id;
  std::string description;
  std::string method;
  Provenance provenance = Provenance::paper_bound;
  Tag tag = Tag::fast;
  double reference_value = 0.0;
  double tolerance = 0.0;
  std::optional<double> computed;
  std::string verdict;  // pass, fail, reference_only, error
  std::string message;
  double wall_time = 0.0;
};

const std::vector<ReproTarget>& repro_targets();

// filter: "all", "fast", "slow" or a target id.
std::vector<ReproOutcome> reproduce(const std::string& filter, const ReproContext& ctx);
bool passed(const ReproOutcome& o);  // pass or reference_only

nlohmann::json to_json(const ReproOutcome& o, bool include_time = true);

}  // namespace eacomm
