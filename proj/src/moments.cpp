#include "eacomm/moments.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace eacomm::npa {

size_t WordHash::operator()(const Word& w) const noexcept {
  size_t h = 1469598103934665603ULL;
  for (int l : w) {
    h ^= static_cast<size_t>(l) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h ^ w.size();
}

Word Algebra::adjoint(const Word& w) const {
  Word a(w.rbegin(), w.rend());
  for (int& l : a) l = adjoint_letter(l);
  return a;
}

std::string Algebra::word_name(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += letter_name(w[i]);
  }
  return s;
}

LevelSpec LevelSpec::parse(const std::string& s) {
  LevelSpec l;
  std::stringstream ss(s);
  std::string tok;
  bool first = true;
  while (std::getline(ss, tok, '+')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }), tok.end());
    if (tok.empty()) throw std::invalid_argument("LevelSpec: empty component in '" + s + "'");
    if (first) {
      if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw std::invalid_argument("LevelSpec: level must start with a number: '" + s + "'");
      l.base_level = std::stoi(tok);
      first = false;
      continue;
    }
    if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isupper(c); }))
      throw std::invalid_argument("LevelSpec: extra block must be letter groups: '" + tok + "'");
    l.extras.push_back(tok);
  }
  if (first) throw std::invalid_argument("LevelSpec: empty level");
  return l;
}

std::string LevelSpec::label() const {
  std::string s = std::to_string(base_level);
  for (const auto& e : extras) s += "+" + e;
  return s;
}

std::vector<Word> generate_basis(const Algebra& alg, const LevelSpec& level) {
  std::vector<Word> out;
  std::unordered_set<Word, WordHash> seen;
  auto push = [&](Word w) {
    if (!alg.canonicalize(w)) return false;
    if (!seen.insert(w).second) return false;
    out.push_back(std::move(w));
    return true;
  };
  push({});
  std::vector<Word> frontier = {{}};
  for (int len = 1; len <= level.base_level; ++len) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      for (int l = 0; l < alg.num_letters(); ++l) {
        Word v = w;
        v.push_back(l);
        if (push(v)) next.push_back(out.back());
      }
    }
    frontier = std::move(next);
  }
  for (const auto& g : level.extras) {
    std::vector<Word> words = {{}};
    for (char grp : g) {
      std::vector<Word> ext;
      for (const auto& w : words)
        for (int l = 0; l < alg.num_letters(); ++l)
          if (alg.letter_group(l) == grp) {
            Word v = w;
            v.push_back(l);
            ext.push_back(std::move(v));
          }
      words = std::move(ext);
    }
    for (auto& w : words) push(std::move(w));
  }
  return out;
}

Polynomial poly_product(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& s : a)
    for (const auto& t : b) {
      Word w = s.word;
      w.insert(w.end(), t.word.begin(), t.word.end());
      out.push_back({s.coef * t.coef, std::move(w)});
    }
  return out;
}

void LinearForm::normalize() {
  std::sort(terms.begin(), terms.end());
  std::vector<std::pair<int, double>> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().first == t.first) merged.back().second += t.second;
    else merged.push_back(t);
  }
  double mx = 0.0;
  for (const auto& t : merged) mx = std::max(mx, std::abs(t.second));
  merged.erase(std::remove_if(merged.begin(), merged.end(), [&](const auto& t) { return std::abs(t.second) <= 1e-14 * mx; }),
               merged.end());
  terms = std::move(merged);
}

double LinearForm::evaluate(const std::vector<double>& moments) const {
  double s = constant;
  for (const auto& [i, c] : terms) s += c * moments[static_cast<size_t>(i)];
  return s;
}

MomentProblem::MomentProblem(std::shared_ptr<const Algebra> alg) : alg_(std::move(alg)) {}

std::optional<int> MomentProblem::moment(Word w, bool create) {
  if (!alg_->canonicalize(w)) return kZero;
  if (w.empty()) return kOne;
  Word a = alg_->adjoint(w);
  if (!alg_->canonicalize(a)) return kZero;
  const Word& rep = std::min(w, a);
  auto it = index_.find(rep);
  if (it != index_.end()) return it->second;
  if (!create) return std::nullopt;
  const int id = static_cast<int>(words_.size());
  index_.emplace(rep, id);
  words_.push_back(rep);
  return id;
}

std::optional<LinearForm> MomentProblem::expectation(const Polynomial& p, bool create) {
  LinearForm f;
  for (const auto& t : p) {
    auto id = moment(t.word, create);
    if (!id) return std::nullopt;
    if (*id == kOne) f.constant += t.coef;
    else if (*id != kZero) f.terms.emplace_back(*id, t.coef);
  }
  f.normalize();
  return f;
}

void MomentProblem::set_basis(std::vector<Word> basis) {
  basis_ = std::move(basis);
  const size_t n = basis_.size();
  gamma_.assign(n * n, kZero);
  for (size_t i = 0; i < n; ++i) {
    Word wi = alg_->adjoint(basis_[i]);
    for (size_t j = i; j < n; ++j) {
      Word w = wi;
      w.insert(w.end(), basis_[j].begin(), basis_[j].end());
      int id = *moment(std::move(w), true);
      gamma_[i * n + j] = gamma_[j * n + i] = id;
    }
  }
}

namespace {

std::string form_key(const LinearForm& f) {
  std::string key;
  char buf[64];
  const double s = f.terms.empty() ? 1.0 : f.terms.front().second;
  std::snprintf(buf, sizeof buf, "%.12g|", f.constant / s);
  key += buf;
  for (const auto& [i, c] : f.terms) {
    std::snprintf(buf, sizeof buf, "%d:%.12g,", i, c / s);
    key += buf;
  }
  return key;
}

}  // namespace

int MomentProblem::impose_identity(const Polynomial& p) {
  int added = 0;
  const size_t n = basis_.size();
  std::vector<Word> adj(n);
  for (size_t i = 0; i < n; ++i) adj[i] = alg_->adjoint(basis_[i]);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      Polynomial q;
      q.reserve(p.size());
      for (const auto& t : p) {
        Word w = adj[i];
        w.insert(w.end(), t.word.begin(), t.word.end());
        w.insert(w.end(), basis_[j].begin(), basis_[j].end());
        q.push_back({t.coef, std::move(w)});
      }
      auto f = expectation(q, false);
      if (!f) continue;
      if (f->terms.empty() && std::abs(f->constant) < 1e-12) continue;
      if (seen_equalities_.emplace(form_key(*f), 1).second) {
        equalities_.push_back(std::move(*f));
        ++added;
      }
    }
  }
  return added;
}

void MomentProblem::add_equality(LinearForm f) {
  f.normalize();
  if (seen_equalities_.emplace(form_key(f), 1).second) equalities_.push_back(std::move(f));
}

void MomentProblem::add_nonnegative(LinearForm f) {
  f.normalize();
  nonneg_.push_back(std::move(f));
}

sdp::SdpProblem MomentProblem::to_sdp() const {
  sdp::SdpProblem p;
  p.sense = sdp::Sense::maximize;
  p.add_vars(num_moments());
  for (const auto& [i, c] : objective_.terms) p.objective[static_cast<size_t>(i)] += c;
  p.objective_constant = objective_.constant;
  const int n = matrix_size();
  sdp::Block g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      int id = entry(i, j);
      if (id == kOne) g.add_constant(i, j, 1.0);
      else if (id != kZero) g.add(id, i, j, 1.0);
    }
  p.blocks.push_back(std::move(g));
  if (!nonneg_.empty()) {
    sdp::Block lp(static_cast<int>(nonneg_.size()), true);
    for (size_t r = 0; r < nonneg_.size(); ++r) {
      const int row = static_cast<int>(r);
      if (nonneg_[r].constant != 0.0) lp.add_constant(row, row, nonneg_[r].constant);
      for (const auto& [i, c] : nonneg_[r].terms) lp.add(i, row, row, c);
    }
    p.blocks.push_back(std::move(lp));
  }
  for (const auto& f : equalities_) {
    sdp::LinearEquality e;
    e.coeffs = f.terms;
    e.rhs = -f.constant;
    p.equalities.push_back(std::move(e));
  }
  return p;
}

RealMatrix MomentProblem::moment_matrix(const std::vector<double>& moments) const {
  const int n = matrix_size();
  RealMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int id = entry(i, j);
      g(i, j) = id == kOne ? 1.0 : id == kZero ? 0.0 : moments[static_cast<size_t>(id)];
    }
  return g;
}

double MomentProblem::max_equality_violation(const std::vector<double>& moments) const {
  double r = 0.0;
  for (const auto& f : equalities_) r = std::max(r, std::abs(f.evaluate(moments)));
  return r;
}

double MomentProblem::min_nonnegative(const std::vector<double>& moments) const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& f : nonneg_) r = std::min(r, f.evaluate(moments));
  return r;
}

std::vector<double> moments_from_operators(const MomentProblem& mp, const std::vector<ComplexMatrix>& letters,
                                           const ComplexVector& psi) {
  if (static_cast<int>(letters.size()) != mp.algebra().num_letters())
    throw DimensionError("moments_from_operators: one operator per letter required");
  std::vector<double> out(static_cast<size_t>(mp.num_moments()));
  for (int id = 0; id < mp.num_moments(); ++id) {
    const Word& w = mp.moment_word(id);
    ComplexVector v = psi;
    for (auto it = w.rbegin(); it != w.rend(); ++it) v = letters[static_cast<size_t>(*it)] * v;
    out[static_cast<size_t>(id)] = psi.dot(v).real();
  }
  return out;
}

}  // namespace eacomm::npa
