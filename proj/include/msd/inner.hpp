#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msd/gf2.hpp"

namespace msd {

// Weakly self-dual CSS code built from a classical cyclic code C with C ⊆ C⊥.
struct InnerCode {
  std::string name;
  int n = 0;
  int k = 0;
  int d = 0;
  BinaryCode css;   // C
  BinaryCode dual;  // C⊥
  std::map<int, std::uint64_t> c_log_table;  // weights d and d+1
};

// `generator` generates C.  Throws "not weakly self-dual" when C ⊄ C⊥.
// An even length is accepted but flagged through `warnings`.
InnerCode build_inner_code(const Poly2& generator, int length, const std::string& name = "",
                           std::vector<std::string>* warnings = nullptr);

// Convenience: the stabilizer polynomial h as printed in catalogs; C is generated by (x^n+1)/h.
InnerCode inner_code_from_stabilizer(const Poly2& h, int length, const std::string& name = "");

// Number of weight-w vectors in C⊥ \ C.  Allowed for w <= d+1.
std::uint64_t c_log(const InnerCode& code, int w);

struct CatalogEntry {
  std::string name;
  int length = 0;
  Poly2 stabilizer;
  int n = 0, k = 0, d = 0;
  std::uint64_t c_log_d = 0;
};

std::vector<CatalogEntry> load_catalog(const std::string& path);
std::string default_catalog_path();
// Built and self-checked against the catalog row; cached per process.
const InnerCode& catalog_code(const std::string& name);
std::vector<std::string> catalog_names();

struct MagicBasis {
  std::vector<BitVector> vectors;
  bool min_coset_weight_ok = false;
  std::uint64_t seed = 0;
  int attempts_used = 0;
};

// Orthonormalizes candidates in order (first odd vector first); nullopt on failure.
std::optional<MagicBasis> orthonormalize(const InnerCode& code, std::vector<BitVector> candidates);

MagicBasis find_magic_basis(const InnerCode& code, std::uint64_t seed, int attempts);

// a_j = v·ℓ⁽ʲ⁾.  Throws "not a logical operator" if v ∉ C⊥.
BitVector logical_action(const InnerCode& code, const MagicBasis& basis, const BitVector& v);

int min_logical_support(const InnerCode& code, const MagicBasis& basis);

// Minimum of |v+s| over s ∈ C by scanning all of C.
int min_coset_weight(const InnerCode& code, const BitVector& v);

// All weight-w vectors of C⊥ \ C (n <= 64).
std::vector<std::uint64_t> logical_words(const InnerCode& code, int w);

// Syndrome lookup for order-m correction against the generators of C.
class CorrectionTable {
 public:
  CorrectionTable(const InnerCode& code, int m);
  int order() const { return m_; }
  std::uint32_t syndrome(std::uint64_t v) const;
  // Correction of weight <= m for syndrome s, if any.
  std::optional<std::uint64_t> lookup(std::uint32_t s) const;
  std::size_t correctable_count() const { return count_; }

 private:
  int m_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::int64_t> table_;  // -1 = uncorrectable
  std::size_t count_ = 0;
};

}  // namespace msd
