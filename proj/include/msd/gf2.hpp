#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace msd {

// Polynomial over GF(2), coefficients stored lowest degree first.
class Poly2 {
 public:
  Poly2() = default;
  explicit Poly2(std::vector<std::uint8_t> coeffs);

  static Poly2 monomial(int degree);
  static Poly2 parse(const std::string& text);

  int degree() const;  // -1 for the zero polynomial
  bool is_zero() const { return coeffs_.empty(); }
  bool coeff(int i) const;
  const std::vector<std::uint8_t>& coeffs() const { return coeffs_; }
  std::string str() const;

  Poly2 operator+(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  bool operator==(const Poly2& o) const { return coeffs_ == o.coeffs_; }

  // Long division; returns {quotient, remainder}.
  std::pair<Poly2, Poly2> divmod(const Poly2& divisor) const;

 private:
  void trim();
  std::vector<std::uint8_t> coeffs_;
};

// Exact quotient; throws std::invalid_argument("not a divisor") on a nonzero remainder.
Poly2 poly_quotient(const Poly2& dividend, const Poly2& divisor);

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n);
  static BitVector from_string(const std::string& bits);
  static BitVector from_word(std::uint64_t w, std::size_t n);
  static BitVector from_support(const std::vector<int>& support, std::size_t n);

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  int weight() const;
  bool any() const;
  bool dot(const BitVector& o) const;  // parity of the overlap
  std::vector<int> support() const;
  std::string str() const;

  std::uint64_t word(std::size_t i) const { return words_[i]; }
  std::size_t num_words() const { return words_.size(); }
  // Low 64 bits; only meaningful for vectors of length <= 64.
  std::uint64_t to_word() const { return words_.empty() ? 0 : words_[0]; }

  BitVector& operator^=(const BitVector& o);
  BitVector operator^(const BitVector& o) const;
  bool operator==(const BitVector& o) const { return n_ == o.n_ && words_ == o.words_; }
  bool operator!=(const BitVector& o) const { return !(*this == o); }
  bool operator<(const BitVector& o) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Linear code over GF(2) in reduced row echelon form with ascending pivots.
class BinaryCode {
 public:
  BinaryCode() = default;
  BinaryCode(std::size_t n, std::vector<BitVector> rows);

  static BinaryCode full_space(std::size_t n);
  static BinaryCode zero_code(std::size_t n);
  static BinaryCode parse(const std::string& text, std::size_t n);

  std::size_t length() const { return n_; }
  int dimension() const { return static_cast<int>(rows_.size()); }
  const std::vector<BitVector>& generators() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }

  bool contains(const BitVector& v) const;
  // Reduces v against the echelon rows; zero iff v is in the code.
  BitVector reduce(const BitVector& v) const;
  bool contains_code(const BinaryCode& other) const;
  // Codeword from coefficient bits (bit i selects generator i); dimension <= 64.
  BitVector encode(std::uint64_t coeffs) const;

  std::string str() const;
  bool operator==(const BinaryCode& o) const { return n_ == o.n_ && rows_ == o.rows_; }

 private:
  std::size_t n_ = 0;
  std::vector<BitVector> rows_;
  std::vector<int> pivots_;
};

BinaryCode cyclic_code(const Poly2& generator, int length);
BinaryCode dual_code(const BinaryCode& code);
int rank_of(std::vector<BitVector> rows);

enum class WeightStrategy { Auto, Codewords, Supports, SupportsCyclic };

// Range of first-support positions (strategy b) or codeword indices (strategy a);
// a partition of the full range can be summed across workers.
struct Shard {
  std::uint64_t begin = 0;
  std::uint64_t end = UINT64_MAX;
};

std::uint64_t count_weight(const BinaryCode& code, int w,
                           WeightStrategy strategy = WeightStrategy::Auto,
                           Shard shard = {});

// Number of shard units for a strategy (2^dim or n).
std::uint64_t shard_extent(const BinaryCode& code, int w, WeightStrategy strategy);

// nullopt means "greater than cap".
std::optional<int> min_weight(const BinaryCode& code, int cap);

// Calls visit(word) on every codeword of weight exactly w (n <= 64 only).
void for_each_weight_word(const BinaryCode& code, int w,
                          const std::function<void(std::uint64_t)>& visit);

bool is_cyclic(const BinaryCode& code);
std::uint64_t binomial(int n, int k);

}  // namespace msd
