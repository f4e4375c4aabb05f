#include "eacomm/sdp.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace eacomm::sdp {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

// key: (matrix index, block, row, col), all 1-indexed except matrix index.
using EntryMap = std::map<std::tuple<int, int, int, int>, double>;

}  // namespace

void export_sdpa(const SdpProblem& p, std::ostream& os) {
  p.validate();
  const bool maximize = p.sense == Sense::maximize;
  const int nblk = static_cast<int>(p.blocks.size());
  const bool has_eq = !p.equalities.empty();

  EntryMap ent;
  for (int k = 0; k < nblk; ++k) {
    for (const auto& t : p.blocks[static_cast<size_t>(k)].terms) {
      int i = t.var == kConstant ? 0 : t.var + 1;
      double v = t.var == kConstant ? -t.value : t.value;
      ent[{i, k + 1, t.row + 1, t.col + 1}] += v;
    }
  }
  if (has_eq) {
    const int kb = nblk + 1;
    for (size_t e = 0; e < p.equalities.size(); ++e) {
      const auto& eq = p.equalities[e];
      const int r = static_cast<int>(2 * e) + 1;
      for (const auto& [v, a] : eq.coeffs) {
        ent[{v + 1, kb, r, r}] += a;
        ent[{v + 1, kb, r + 1, r + 1}] -= a;
      }
      ent[{0, kb, r, r}] += eq.rhs;
      ent[{0, kb, r + 1, r + 1}] -= eq.rhs;
    }
  }

  os << "* eacomm sdpa export\n";
  os << "* sense " << (maximize ? "max" : "min") << "\n";
  os << "* objective_constant " << fmt(p.objective_constant) << "\n";
  os << "* equality_block " << (has_eq ? nblk + 1 : 0) << "\n";
  os << p.num_vars << "\n";
  os << nblk + (has_eq ? 1 : 0) << "\n";
  for (int k = 0; k < nblk; ++k) {
    const auto& b = p.blocks[static_cast<size_t>(k)];
    if (k) os << ' ';
    os << (b.diagonal ? -b.size : b.size);
  }
  if (has_eq) os << (nblk ? " " : "") << -static_cast<int>(2 * p.equalities.size());
  os << "\n";
  for (int i = 0; i < p.num_vars; ++i) {
    double o = p.objective[static_cast<size_t>(i)];
    if (i) os << ' ';
    os << fmt(maximize ? -o : o);
  }
  os << "\n";
  for (const auto& [key, v] : ent) {
    if (v == 0.0) continue;
    auto [i, k, r, c] = key;
    os << i << ' ' << k << ' ' << r << ' ' << c << ' ' << fmt(v) << "\n";
  }
}

void export_sdpa(const SdpProblem& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("export_sdpa: cannot open " + path);
  export_sdpa(p, f);
  if (!f) throw std::runtime_error("export_sdpa: write failed for " + path);
}

SdpProblem import_sdpa(std::istream& is) {
  SdpProblem p;
  p.sense = Sense::minimize;
  int eq_block = 0;
  std::string line;
  std::stringstream body;
  while (std::getline(is, line)) {
    if (!line.empty() && (line[0] == '*' || line[0] == '"')) {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "sense") {
        std::string s;
        ls >> s;
        p.sense = s == "max" ? Sense::maximize : Sense::minimize;
      } else if (key == "objective_constant") {
        ls >> p.objective_constant;
      } else if (key == "equality_block") {
        ls >> eq_block;
      }
      continue;
    }
    for (char& ch : line)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    body << line << '\n';
  }
  int m = 0, nblk = 0;
  if (!(body >> m >> nblk) || m < 0 || nblk < 0) throw std::runtime_error("import_sdpa: bad header");
  std::vector<int> sizes(static_cast<size_t>(nblk));
  for (auto& s : sizes)
    if (!(body >> s) || s == 0) throw std::runtime_error("import_sdpa: bad block sizes");
  p.add_vars(m);
  std::vector<double> c(static_cast<size_t>(m));
  for (auto& v : c)
    if (!(body >> v)) throw std::runtime_error("import_sdpa: bad objective");
  for (int i = 0; i < m; ++i) p.objective[static_cast<size_t>(i)] = p.sense == Sense::maximize ? -c[static_cast<size_t>(i)] : c[static_cast<size_t>(i)];

  for (int k = 0; k < nblk; ++k) {
    if (k + 1 == eq_block) continue;
    int s = sizes[static_cast<size_t>(k)];
    p.blocks.emplace_back(std::abs(s), s < 0);
  }
  auto block_index = [&](int k) {
    int idx = k - 1;
    if (eq_block && k > eq_block) --idx;
    return idx;
  };
  std::vector<LinearEquality> eqs;
  if (eq_block) eqs.resize(static_cast<size_t>(std::abs(sizes[static_cast<size_t>(eq_block - 1)]) / 2));

  int i, k, r, col;
  double v;
  while (body >> i >> k >> r >> col >> v) {
    if (i < 0 || i > m || k < 1 || k > nblk) throw std::runtime_error("import_sdpa: entry out of range");
    if (k == eq_block) {
      if (r % 2 == 0) continue;  // the mirrored row of each pair
      auto& eq = eqs[static_cast<size_t>((r - 1) / 2)];
      if (i == 0) eq.rhs = v;
      else eq.coeffs.emplace_back(i - 1, v);
      continue;
    }
    Block& b = p.blocks[static_cast<size_t>(block_index(k))];
    if (i == 0) b.add(kConstant, r - 1, col - 1, -v);
    else b.add(i - 1, r - 1, col - 1, v);
  }
  if (!body.eof()) throw std::runtime_error("import_sdpa: malformed entry line");
  p.equalities = std::move(eqs);
  p.validate();
  return p;
}

SdpProblem import_sdpa_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("import_sdpa: cannot open " + path);
  return import_sdpa(f);
}

}  // namespace eacomm::sdp
