#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msd {

struct Stage {
  enum Kind { MEK, BK15, BH } kind = MEK;
  int k = 0;  // BH only

  int n_in() const;
  int n_out() const;
  int space() const;  // qubits per instance
  std::string str() const;  // "5", "15" or k

  static Stage mek() { return {MEK, 0}; }
  static Stage bk15() { return {BK15, 0}; }
  static Stage bh(int k);  // k even, 2 <= k
};

// Leading-order output error for input error eps in (0, 0.05].
double stage_error(const Stage& s, double eps);

struct Chain {
  std::vector<Stage> stages;
  double eps0 = 1e-3;
  std::string str() const;
  static Chain parse(const std::string& name, double eps0 = 1e-3);  // "6-22-54", "15-5"
};

struct ChainCost {
  double marginal_error = 0;
  double t_per_output = 0;
  double space = 0;
  long long n_out = 1;
};

ChainCost chain_cost(const Chain& chain);

// Menu tokens: "mek", "bk", "bh" (BH with even k in [2, bh_max]).
std::vector<Stage> stage_menu(const std::vector<std::string>& tokens, int bh_max = 54);

class NoChain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cheapest chain (length <= max_len) reaching target; throws NoChain naming the best error reached.
Chain best_chain(double target, const std::vector<Stage>& menu, double eps0 = 1e-3, int max_len = 4);

struct CostRow {
  std::string name;
  double marginal_error;
  double t_per_output;
  double space;
  long long n_out;
  bool mek_bk_only;
};
// The seven reference chains with their published values.
const std::vector<CostRow>& reference_cost_table();

}  // namespace msd
