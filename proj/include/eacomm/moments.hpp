#pragma once

// Words in a noncommutative *-algebra, moment matrices and their conversion
// to real SDPs.
//
// Moments are identified up to adjoint, <w> = <w^dagger>, so every moment is
// a single real variable. This is lossless for problems whose constraints and
// objective have real coefficients: if a complex moment assignment is
// feasible so is its complex conjugate, and their average is real.

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eacomm/qmat.hpp"
#include "eacomm/sdp.hpp"

namespace eacomm::npa {

using Word = std::vector<int>;

struct WordHash {
  size_t operator()(const Word& w) const noexcept;
};

class Algebra {
 public:
  virtual ~Algebra() = default;
  virtual int num_letters() const = 0;
  virtual std::string letter_name(int letter) const = 0;
  virtual char letter_group(int letter) const = 0;
  virtual int adjoint_letter(int letter) const = 0;
  // Rewrites w into normal form; returns false when w is the zero operator.
  virtual bool canonicalize(Word& w) const = 0;

  Word adjoint(const Word& w) const;
  std::string word_name(const Word& w) const;
};

// "2", "1+AB+AA", "0+UM": base word length plus products of letter groups.
struct LevelSpec {
  int base_level = 1;
  std::vector<std::string> extras;

  static LevelSpec parse(const std::string& s);
  std::string label() const;
};

std::vector<Word> generate_basis(const Algebra& alg, const LevelSpec& level);

struct PolyTerm {
  double coef = 0.0;
  Word word;
};
using Polynomial = std::vector<PolyTerm>;

Polynomial poly_product(const Polynomial& a, const Polynomial& b);

// constant + sum_i coef_i * moment_i
struct LinearForm {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  void normalize();
  double evaluate(const std::vector<double>& moments) const;
};

class MomentProblem {
 public:
  explicit MomentProblem(std::shared_ptr<const Algebra> alg);

  const Algebra& algebra() const { return *alg_; }

  static constexpr int kOne = -1;
  static constexpr int kZero = -2;
  // Moment id of a word (kOne / kZero for the identity / zero operator).
  // Returns nullopt when the moment does not exist and create is false.
  std::optional<int> moment(Word w, bool create);
  std::optional<LinearForm> expectation(const Polynomial& p, bool create);

  void set_basis(std::vector<Word> basis);
  const std::vector<Word>& basis() const { return basis_; }
  int matrix_size() const { return static_cast<int>(basis_.size()); }
  int entry(int i, int j) const { return gamma_[static_cast<size_t>(i) * basis_.size() + static_cast<size_t>(j)]; }

  int num_moments() const { return static_cast<int>(words_.size()); }
  const Word& moment_word(int id) const { return words_[static_cast<size_t>(id)]; }

  // <w_i^dagger P w_j> = 0 for all basis pairs whose moments all exist.
  // Returns the number of distinct constraints added.
  int impose_identity(const Polynomial& p);
  void add_equality(LinearForm f);
  void add_nonnegative(LinearForm f);
  void set_objective(LinearForm f) { objective_ = std::move(f); }
  const LinearForm& objective() const { return objective_; }
  const std::vector<LinearForm>& equalities() const { return equalities_; }
  const std::vector<LinearForm>& nonnegatives() const { return nonneg_; }

  sdp::SdpProblem to_sdp() const;
  RealMatrix moment_matrix(const std::vector<double>& moments) const;
  double max_equality_violation(const std::vector<double>& moments) const;
  double min_nonnegative(const std::vector<double>& moments) const;

 private:
  std::shared_ptr<const Algebra> alg_;
  std::unordered_map<Word, int, WordHash> index_;
  std::vector<Word> words_;
  std::vector<Word> basis_;
  std::vector<int> gamma_;
  std::vector<LinearForm> equalities_;
  std::vector<LinearForm> nonneg_;
  std::unordered_map<std::string, int> seen_equalities_;
  LinearForm objective_;
};

// Re <psi| w |psi> for every moment, with letters represented by operators.
std::vector<double> moments_from_operators(const MomentProblem& mp, const std::vector<ComplexMatrix>& letters,
                                           const ComplexVector& psi);

}  // namespace eacomm::npa
