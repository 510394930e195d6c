#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "msd/inner.hpp"
#include "msd/outer.hpp"

namespace msd {

enum class Policy { Terminate, ParallelThenTerminate, PartialRestart };
Policy parse_policy(const std::string& s);
std::string policy_name(Policy p);

struct RoundSpec {
  std::string inner;
  double eps_check = 0.0;
  int m = 0;
  Policy policy = Policy::ParallelThenTerminate;
  std::string source = "raw";  // "raw" or an upstream protocol name such as "MEK"
};

struct Expected {
  std::optional<double> n_out_bar;
  std::optional<double> eps_out_bar;
  std::optional<double> nT_per_out;
};

struct ProtocolSpec {
  std::string name;
  OuterCode outer;
  std::vector<RoundSpec> rounds;  // one per schedule round
  double eps_input = 0.0;
  std::string input_source = "raw";
  bool conservative = false;
  std::uint64_t basis_seed = 1;
  Expected expected;
};

// T gates consumed per magic state delivered by an upstream source.
double source_multiplier(const std::string& source);

// JSON protocol file.  Outer code: {"type":"grid","dims":[..],"directions":[..]},
// {"type":"graph","graph":name} or {"type":"file","path":p}.
ProtocolSpec load_protocol(const std::string& path);
ProtocolSpec parse_protocol(const std::string& json_text, const std::string& base_dir = ".");

class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MarkovRates {
  double p_succ = 1.0;
  double p_repeat = 0.0;
  double p_fail = 0.0;
  double p = 1.0;  // success given the loop ends
};

// Leading-order rates for one inner check with correction order m.
MarkovRates markov_rates(const InnerCode& code, double eps, int m);

// Exact per-attempt probabilities of one check when each of its 2n T gates
// fails independently with probability eps and the measured parity flips with
// the number of second-gate errors.
struct ExactCheckRates {
  double trivial = 0;         // combined error in C⊥
  double trivial_even = 0;    // ... and no parity flip
  double clean_even = 0;      // combined error in C, no flip
  double logical_even = 0;    // combined error in C⊥ \ C, no flip
  double correctable = 0;     // nonzero syndrome with a weight <= m preimage
  double uncorrectable = 0;
  double pass_even = 0;       // eventual pass with even input parity
  double pass_odd = 0;        // eventual pass with odd input parity
};
ExactCheckRates exact_check_rates(const InnerCode& code, double eps, int m);

// One term of ε_out: `count` patterns with `a` input errors and `b` check-level errors.
struct Contribution {
  std::string channel;
  int round = -1;  // -1 for pure input patterns
  int a = 0;
  int b = 0;
  double count = 0.0;
  double probability = 0.0;
};

enum class AnalysisMode { LeadingOrder, Exact };

struct AnalysisOptions {
  AnalysisMode mode = AnalysisMode::LeadingOrder;
  int order_cap = 0;  // 0 = leading outer order + 1
};

struct AnalysisReport {
  int n_out = 0;
  double n_out_bar = 0.0;
  double n_T_bar = 0.0;
  double eps_out = 0.0;            // after the series residual
  double eps_out_uncorrected = 0.0;
  double eps_out_bar = 0.0;
  double nT_per_out() const { return n_T_bar / n_out_bar; }
  double acceptance = 0.0;  // probability of not terminating
  int leading_order = 0;
  int space_lo = 0, space_hi = 0;  // space cost lies in [lo, hi)
  std::vector<Contribution> contributions;
  std::vector<std::string> warnings;
};

AnalysisReport analyze(const ProtocolSpec& spec, const AnalysisOptions& opt = {});

// c_{a,b} with a + b <= max_order (single common rate convention).  Logical
// channels are complete only through order d_inner + 1.
std::map<std::pair<int, int>, double> basic_counts(const ProtocolSpec& spec, int max_order);

// Order of a D-dimensional grid with inner distances d_1 <= ... <= d_D, all checks
// of dimension j using distance d_j.
int grid_order(const std::vector<int>& inner_distances);

// Σ_w c_w ε^w (1-ε)^(N-w) expanded through order d+1, where d is the smallest
// order present and N the number of error locations.
double series_correction(const std::map<int, double>& counts, double eps, int positions);

// Magic basis used by the analysis; cached per (code, seed).
const MagicBasis& analysis_basis(const std::string& inner, std::uint64_t seed);

}  // namespace msd
