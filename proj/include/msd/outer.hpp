#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msd/gf2.hpp"

namespace msd {

// Qubit/check incidence plus an ordered measurement schedule.
class OuterCode {
 public:
  OuterCode() = default;
  // Throws on repeated qubits in a check, out-of-range indices, or a schedule
  // that does not cover every check exactly once.
  OuterCode(int n_out, std::vector<std::vector<int>> checks, std::vector<std::vector<int>> schedule);

  int n_out() const { return n_; }
  int n_check() const { return static_cast<int>(checks_.size()); }
  const std::vector<std::vector<int>>& checks() const { return checks_; }
  const std::vector<std::vector<int>>& schedule() const { return schedule_; }
  const std::vector<int>& checks_of(int q) const { return qubit_checks_[q]; }
  int round_of(int check) const { return round_[check]; }
  int num_rounds() const { return static_cast<int>(schedule_.size()); }
  int max_qubit_degree() const;

  // Set when a group of code automorphisms acts transitively on qubits and
  // preserves rounds; enumeration may then root every pattern at qubit 0.
  bool transitive = false;
  // Optional per-check inner code names (graph family); empty when unused.
  std::vector<std::string> inner;

  std::string str() const;
  static OuterCode parse(const std::string& text);

 private:
  int n_ = 0;
  std::vector<std::vector<int>> checks_;
  std::vector<std::vector<int>> schedule_;
  std::vector<std::vector<int>> qubit_checks_;
  std::vector<int> round_;
};

struct Direction {
  enum Kind { Axis, DiagDown, DiagUp } kind = Axis;
  int axis = 0;
  static Direction parse(const std::string& s);  // vertical, horizontal, axis<j>, diag_down, diag_up
  std::string str() const;
};

// Qubit (c0, c1, ...) has index c0 + dims[0]*c1 + ...; axis-j checks have size dims[j].
// Each direction is one round, in the order given.
OuterCode grid_code(const std::vector<int>& dims, const std::vector<Direction>& directions);

using Edge = std::pair<int, int>;

// One qubit per edge, one check per vertex, one vertex per round in index order.
OuterCode graph_code(int n_vertices, const std::vector<Edge>& edges, int girth_expected);

int graph_girth(int n_vertices, const std::vector<Edge>& edges);  // 0 if acyclic
std::uint64_t count_5_cycles(int n_vertices, const std::vector<Edge>& edges);
std::vector<Edge> hoffman_singleton_edges();
std::vector<Edge> read_edge_list(const std::string& path, int* n_vertices);
// "petersen", "hoffman_singleton"; degree-9 and degree-11 graphs throw "unavailable".
std::vector<Edge> named_graph(const std::string& name, int* n_vertices);

// Girth of the qubit-check incidence graph (0 if acyclic).
int tanner_girth(const OuterCode& code);

struct ScheduleInfo {
  // Per check: for each of its qubits, the later checks meeting it in exactly that qubit.
  std::vector<std::vector<std::vector<int>>> later_singletons;
  std::vector<bool> lonely;
  std::vector<bool> once;
  int n_lonely = 0;
  int n_once = 0;
};

ScheduleInfo schedule_info(const OuterCode& code);
std::pair<int, int> lonely_and_once(const OuterCode& code);
bool first_check_not_lonely(const OuterCode& code);

struct SensitivityReport {
  bool distance_ok = false;
  bool sensitivity_ok = false;
  std::optional<BitVector> witness;
  int n_lonely = 0;
  int n_once = 0;
  bool four_cycle_free = false;
  int girth = 0;
};

SensitivityReport verify_distance_sensitivity(const OuterCode& code, int d);

// Connected patterns (in the qubit-check incidence graph) with a qubits and
// per-round violated-check counts b, for which a + 2|b| <= order_cap.
struct PatternKey {
  int a = 0;
  std::vector<int> violated_per_round;
  int violated() const;
  bool operator<(const PatternKey& o) const {
    return a != o.a ? a < o.a : violated_per_round < o.violated_per_round;
  }
};
using Census = std::map<PatternKey, std::uint64_t>;

Census connected_census(const OuterCode& code, int order_cap);

// All patterns (connected or not) up to order_cap.  Throws when two disjoint
// components could fit under the cap.
Census complete_census(const OuterCode& code, int order_cap);

// Number of weight-u patterns violating exactly v checks.  Uses the connected
// census when disconnected patterns provably cannot reach order u+2v, else
// plain enumeration when binom(n,u) is small; throws otherwise.
std::uint64_t c_out(const OuterCode& code, int u, int v);
std::uint64_t c_out_naive(const OuterCode& code, int u, int v);

// Smallest nonempty pattern violating no check, or nullopt if none up to cap.
std::optional<int> outer_distance(const OuterCode& code, int cap);

// Generic connected-pattern search.  vmax(a) must be non-increasing in a; a
// pattern T is reported when |T| <= amax and its violation count <= vmax(|T|).
// Return false from visit to stop early.
void search_patterns(const OuterCode& code, int amax, const std::function<int(int)>& vmax,
                     const std::function<bool(const std::vector<int>&, const std::vector<int>&)>& visit);

}  // namespace msd
