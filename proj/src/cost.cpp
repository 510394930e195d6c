#include "msd/cost.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace msd {

Stage Stage::bh(int k) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("BH block size must be even and >= 2");
  return {BH, k};
}

int Stage::n_in() const { return kind == MEK ? 10 : kind == BK15 ? 15 : 3 * k + 8; }
int Stage::n_out() const { return kind == MEK ? 2 : kind == BK15 ? 1 : k; }
int Stage::space() const { return n_in(); }

std::string Stage::str() const { return kind == MEK ? "5" : kind == BK15 ? "15" : std::to_string(k); }

double stage_error(const Stage& s, double eps) {
  if (!(eps > 0 && eps <= 0.05)) throw std::domain_error("stage error map needs eps in (0, 0.05]");
  switch (s.kind) {
    case Stage::MEK: return 9 * eps * eps;
    case Stage::BK15: return 35 * eps * eps * eps;
    case Stage::BH: return (3.0 * s.k + 1) * eps * eps;
  }
  return 0;
}

std::string Chain::str() const {
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) out += (i ? "-" : "") + stages[i].str();
  return out;
}

Chain Chain::parse(const std::string& name, double eps0) {
  Chain c;
  c.eps0 = eps0;
  std::stringstream ss(name);
  std::string tok;
  while (std::getline(ss, tok, '-')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad chain token: " + tok);
    }
    if (used != tok.size()) throw std::invalid_argument("bad chain token: " + tok);
    if (v == 5)
      c.stages.push_back(Stage::mek());
    else if (v == 15)
      c.stages.push_back(Stage::bk15());
    else
      c.stages.push_back(Stage::bh(v));
  }
  if (c.stages.empty()) throw std::invalid_argument("empty chain");
  return c;
}

ChainCost chain_cost(const Chain& chain) {
  if (chain.stages.empty()) throw std::invalid_argument("empty chain");
  ChainCost out;
  double eps = chain.eps0;
  out.t_per_output = 1;
  out.space = 1;
  for (const auto& s : chain.stages) {
    out.t_per_output *= static_cast<double>(s.n_in()) / s.n_out() / (1 - s.n_in() * eps);
    out.space *= s.space();
    out.n_out *= s.n_out();
    eps = stage_error(s, eps);
  }
  out.marginal_error = eps;
  return out;
}

std::vector<Stage> stage_menu(const std::vector<std::string>& tokens, int bh_max) {
  std::vector<Stage> menu;
  for (const auto& t : tokens) {
    if (t == "mek")
      menu.push_back(Stage::mek());
    else if (t == "bk")
      menu.push_back(Stage::bk15());
    else if (t == "bh")
      for (int k = 2; k <= bh_max; k += 2) menu.push_back(Stage::bh(k));
    else
      throw std::invalid_argument("unknown menu entry: " + t);
  }
  if (menu.empty()) throw std::invalid_argument("empty stage menu");
  return menu;
}

namespace {

struct Search {
  const std::vector<Stage>& menu;
  double target;
  int max_len;
  std::vector<Stage> cur;
  std::optional<Chain> best;
  double best_t = std::numeric_limits<double>::infinity();
  double closest = std::numeric_limits<double>::infinity();

  void run(double eps, double t) {
    if (!cur.empty()) {
      closest = std::min(closest, eps);
      if (eps <= target && t < best_t) {
        best_t = t;
        best = Chain{cur, 0};
      }
    }
    if (static_cast<int>(cur.size()) == max_len || t >= best_t) return;
    for (const auto& s : menu) {
      const double acc = 1 - s.n_in() * eps;
      if (acc <= 0 || eps > 0.05) continue;
      cur.push_back(s);
      run(stage_error(s, eps), t * s.n_in() / s.n_out() / acc);
      cur.pop_back();
    }
  }
};

}  // namespace

Chain best_chain(double target, const std::vector<Stage>& menu, double eps0, int max_len) {
  if (!(target > 0)) throw std::invalid_argument("target must be positive");
  Search s{menu, target, max_len, {}, std::nullopt};
  s.run(eps0, 1.0);
  if (!s.best) {
    std::ostringstream os;
    os << "no chain of length <= " << max_len << " reaches " << target << "; best error " << s.closest;
    throw NoChain(os.str());
  }
  Chain c = *s.best;
  c.eps0 = eps0;
  return c;
}

const std::vector<CostRow>& reference_cost_table() {
  static const std::vector<CostRow> rows = {
      {"6-22-54", 1.0e-13, 47, 3.3e5, 7128, false},
      {"15-5", 1.1e-14, 76, 1.5e2, 2, true},
      {"5-34-46", 9.8e-15, 52, 1.6e5, 3128, false},
      {"5-5-54", 8.7e-17, 80, 1.7e4, 216, false},
      {"5-5-5", 4.8e-18, 126, 1.0e3, 8, true},
      {"22-46-54-54", 8.1e-19, 115, 3.1e8, 2950922, false},
      {"15-15", 1.5e-21, 228, 2.3e2, 1, true},
  };
  return rows;
}

}  // namespace msd
