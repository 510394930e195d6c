#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "msd/outer.hpp"

namespace msd {

struct SearchConfig {
  int k_inner = 5;
  int alpha = 7;
  std::uint64_t seed = 1;
  long swap_budget = 1'000'000;
  long anneal_steps = 100'000;
  bool allow_added_checks = false;
  int max_added_checks = 2;
};

struct SearchResult {
  OuterCode code;
  int girth = 0;
  int distance_certified = 0;  // 7 when certified, else the smallest unviolated weight found
  int added_checks = 0;
  long iterations_used = 0;
  std::uint64_t seed = 0;
  bool success = false;
};

class SwapStuck : public std::runtime_error {
 public:
  SwapStuck(const std::string& what, int best_girth) : std::runtime_error(what), best_girth(best_girth) {}
  int best_girth;
};

// α disjoint copies of K_{k,3}; qubit degree 3, check degree k.
OuterCode init_bipartite(const SearchConfig& cfg);

// Degree-preserving swaps seeded from 4-cycles until girth >= 6.  Throws SwapStuck.
OuterCode eliminate_4cycles(const OuterCode& code, std::mt19937_64& rng, long budget = 1'000'000,
                            long* used = nullptr);

// Random swaps that never create a 4-cycle.
OuterCode anneal_girth_preserving(const OuterCode& code, std::mt19937_64& rng, long steps);

struct Certificate {
  bool ok = false;
  std::optional<BitVector> witness;
};

// No nonzero pattern of weight <= 6 leaves every check satisfied.
Certificate certify_distance7(const OuterCode& code);

// Adds up to max_added checks of size k that keep the code 4-cycle free and
// violate every surviving weight <= 6 unviolated pattern.
SearchResult augment_checks(const OuterCode& code, std::mt19937_64& rng, int max_added, int k);

// Full pipeline; identical configs give identical results.
SearchResult run_search(const SearchConfig& cfg);

// Recorded seeds: lines "k alpha seed swap_budget anneal_steps added".
struct RecordedSeed {
  SearchConfig config;
};
std::vector<RecordedSeed> load_recorded_seeds(const std::string& path);
std::string default_seed_path();

}  // namespace msd
