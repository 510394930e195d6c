#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "msd/analysis.hpp"
#include "msd/inner.hpp"

namespace msd {

// splitmix64 keyed by (seed, stream); trial t always draws the same numbers.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t s_;
};

struct CheckOutcome {
  bool inner_syndrome_nontrivial = false;
  bool corrected = false;
  bool measured_parity_flip = false;
  BitVector logical_action_applied;
};

// Word-level check model for one inner code, correction order and basis.
class CheckModel {
 public:
  CheckModel(const InnerCode& code, const MagicBasis& basis, int m);
  const InnerCode& code() const { return *code_; }
  int m() const { return table_.order(); }
  struct Result {
    bool nontrivial = false;
    bool corrected = false;
    bool flip = false;
    bool failed = false;  // nontrivial and not correctable
    std::uint64_t action = 0;
  };
  Result run(std::uint64_t e1, std::uint64_t e2) const;

 private:
  const InnerCode* code_;
  std::vector<std::uint64_t> ell_;
  CorrectionTable table_;
};

CheckOutcome simulate_check(const InnerCode& inner, const MagicBasis& basis, const BitVector& e1, const BitVector& e2,
                            bool input_parity, int m);

struct TrialSummary {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  std::uint64_t output_states = 0;
  std::uint64_t output_errors = 0;  // accepted trials with at least one wrong kept output
  double t_gates = 0;               // T gates consumed, sources weighted
  std::uint64_t rng_seed = 0;

  double n_out_bar() const { return static_cast<double>(output_states) / static_cast<double>(trials); }
  double eps_out() const { return static_cast<double>(output_errors) / static_cast<double>(trials); }
  double acceptance() const { return static_cast<double>(accepted) / static_cast<double>(trials); }
  TrialSummary& operator+=(const TrialSummary& o);
};

// Trials [first, first+count) of the stream keyed by seed.
TrialSummary simulate_range(const ProtocolSpec& spec, std::uint64_t first, std::uint64_t count, std::uint64_t seed);
TrialSummary simulate_protocol(const ProtocolSpec& spec, std::uint64_t trials, std::uint64_t seed, int threads = 1);

struct CompareRow {
  std::string quantity;
  double empirical = 0;
  double analytic = 0;
  double stderr_ = 0;  // binomial standard error at the analytic value
  double sigmas = 0;
  bool agree = true;
};

struct CompareReport {
  TrialSummary summary;
  AnalysisReport analysis;
  std::vector<CompareRow> rows;  // acceptance, n_out_bar, eps_out
  bool agree() const;
};

// Exact-rate analysis when available, leading order otherwise.
CompareReport compare(const ProtocolSpec& spec, std::uint64_t trials, std::uint64_t seed, int threads = 1,
                      double max_sigmas = 3.0);
// Simulates one protocol and analyses another (for detecting mismatched models).
CompareReport compare(const ProtocolSpec& simulated, const ProtocolSpec& analysed, std::uint64_t trials,
                      std::uint64_t seed, int threads = 1, double max_sigmas = 3.0);

}  // namespace msd
