#include "msd/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace msd {

// ---------------------------------------------------------------- Poly2

Poly2::Poly2(std::vector<std::uint8_t> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c &= 1u;
  trim();
}

void Poly2::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly2 Poly2::monomial(int degree) {
  std::vector<std::uint8_t> c(static_cast<std::size_t>(degree) + 1, 0);
  c.back() = 1;
  return Poly2(std::move(c));
}

Poly2 Poly2::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  if (s == "0") return Poly2{};
  Poly2 out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('+', pos);
    std::string term = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    int deg = 0;
    if (term == "1") {
      deg = 0;
    } else if (term == "x") {
      deg = 1;
    } else if (term.rfind("x^", 0) == 0 && term.size() > 2) {
      std::size_t used = 0;
      deg = std::stoi(term.substr(2), &used);
      if (used != term.size() - 2 || deg < 0) throw std::invalid_argument("bad term: " + term);
    } else {
      throw std::invalid_argument("bad term: " + term);
    }
    out = out + monomial(deg);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

int Poly2::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

bool Poly2::coeff(int i) const {
  return i >= 0 && i < static_cast<int>(coeffs_.size()) && coeffs_[i];
}

std::string Poly2::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    if (!coeffs_[i]) continue;
    if (!out.empty()) out += "+";
    if (i == 0)
      out += "1";
    else if (i == 1)
      out += "x";
    else
      out += "x^" + std::to_string(i);
  }
  return out;
}

Poly2 Poly2::operator+(const Poly2& o) const {
  std::vector<std::uint8_t> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] ^= coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] ^= o.coeffs_[i];
  return Poly2(std::move(c));
}

Poly2 Poly2::operator*(const Poly2& o) const {
  if (is_zero() || o.is_zero()) return Poly2{};
  std::vector<std::uint8_t> c(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i])
      for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] ^= o.coeffs_[j];
  return Poly2(std::move(c));
}

std::pair<Poly2, Poly2> Poly2::divmod(const Poly2& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
  std::vector<std::uint8_t> rem = coeffs_;
  const int dd = divisor.degree();
  const int nd = degree();
  if (nd < dd) return {Poly2{}, *this};
  std::vector<std::uint8_t> quot(static_cast<std::size_t>(nd - dd) + 1, 0);
  for (int i = nd; i >= dd; --i) {
    if (!rem[i]) continue;
    quot[i - dd] = 1;
    for (int j = 0; j <= dd; ++j) rem[i - dd + j] ^= divisor.coeffs_[j];
  }
  return {Poly2(std::move(quot)), Poly2(std::move(rem))};
}

Poly2 poly_quotient(const Poly2& dividend, const Poly2& divisor) {
  auto [q, r] = dividend.divmod(divisor);
  if (!r.is_zero()) throw std::invalid_argument("not a divisor");
  return q;
}

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

BitVector BitVector::from_string(const std::string& bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set(i);
    else if (bits[i] != '0')
      throw std::invalid_argument("bit string must contain only 0 and 1");
  }
  return v;
}

BitVector BitVector::from_word(std::uint64_t w, std::size_t n) {
  if (n > 64) throw std::invalid_argument("from_word needs n <= 64");
  BitVector v(n);
  if (n > 0) v.words_[0] = n == 64 ? w : (w & ((std::uint64_t{1} << n) - 1));
  return v;
}

BitVector BitVector::from_support(const std::vector<int>& support, std::size_t n) {
  BitVector v(n);
  for (int i : support) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw std::out_of_range("support index");
    v.flip(static_cast<std::size_t>(i));
  }
  return v;
}

void BitVector::set(std::size_t i, bool v) {
  const std::uint64_t m = std::uint64_t{1} << (i & 63);
  if (v)
    words_[i >> 6] |= m;
  else
    words_[i >> 6] &= ~m;
}

int BitVector::weight() const {
  int w = 0;
  for (auto x : words_) w += std::popcount(x);
  return w;
}

bool BitVector::any() const {
  for (auto x : words_)
    if (x) return true;
  return false;
}

bool BitVector::dot(const BitVector& o) const {
  if (n_ != o.n_) throw std::invalid_argument("length mismatch");
  int p = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) p ^= std::popcount(words_[i] & o.words_[i]) & 1;
  return p != 0;
}

std::vector<int> BitVector::support() const {
  std::vector<int> s;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    std::uint64_t x = words_[k];
    while (x) {
      s.push_back(static_cast<int>(k * 64 + std::countr_zero(x)));
      x &= x - 1;
    }
  }
  return s;
}

std::string BitVector::str() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitVector& BitVector::operator^=(const BitVector& o) {
  if (n_ != o.n_) throw std::invalid_argument("length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

BitVector BitVector::operator^(const BitVector& o) const {
  BitVector r = *this;
  r ^= o;
  return r;
}

bool BitVector::operator<(const BitVector& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  return words_ < o.words_;
}

// ---------------------------------------------------------------- BinaryCode

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(std::vector<BitVector>& rows, std::size_t n) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && !rows[sel].get(col)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i].get(col)) rows[i] ^= rows[r];
    pivots.push_back(static_cast<int>(col));
    ++r;
  }
  rows.resize(r);
  return pivots;
}

}  // namespace

BinaryCode::BinaryCode(std::size_t n, std::vector<BitVector> rows) : n_(n), rows_(std::move(rows)) {
  for (const auto& r : rows_)
    if (r.size() != n) throw std::invalid_argument("generator length mismatch");
  pivots_ = rref(rows_, n_);
}

BinaryCode BinaryCode::full_space(std::size_t n) {
  std::vector<BitVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    BitVector v(n);
    v.set(i);
    rows.push_back(v);
  }
  return BinaryCode(n, std::move(rows));
}

BinaryCode BinaryCode::zero_code(std::size_t n) { return BinaryCode(n, {}); }

BinaryCode BinaryCode::parse(const std::string& text, std::size_t n) {
  std::istringstream in(text);
  std::string line;
  std::vector<BitVector> rows;
  while (std::getline(in, line)) {
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
               line.end());
    if (line.empty()) continue;
    if (line.size() != n) throw std::invalid_argument("matrix row has wrong length");
    rows.push_back(BitVector::from_string(line));
  }
  return BinaryCode(n, std::move(rows));
}

BitVector BinaryCode::reduce(const BitVector& v) const {
  BitVector r = v;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (r.get(static_cast<std::size_t>(pivots_[i]))) r ^= rows_[i];
  return r;
}

bool BinaryCode::contains(const BitVector& v) const {
  if (v.size() != n_) return false;
  return !reduce(v).any();
}

bool BinaryCode::contains_code(const BinaryCode& other) const {
  for (const auto& r : other.rows_)
    if (!contains(r)) return false;
  return true;
}

BitVector BinaryCode::encode(std::uint64_t coeffs) const {
  BitVector v(n_);
  for (std::size_t i = 0; i < rows_.size() && i < 64; ++i)
    if ((coeffs >> i) & 1u) v ^= rows_[i];
  return v;
}

std::string BinaryCode::str() const {
  std::string s;
  for (const auto& r : rows_) s += r.str() + "\n";
  return s;
}

BinaryCode cyclic_code(const Poly2& generator, int length) {
  if (length <= 0) throw std::invalid_argument("length must be positive");
  Poly2 xn1 = Poly2::monomial(length) + Poly2::monomial(0);
  auto [q, r] = xn1.divmod(generator);
  if (!r.is_zero()) throw std::invalid_argument("generator does not divide x^n+1");
  const int k = length - generator.degree();
  std::vector<BitVector> rows;
  for (int s = 0; s < k; ++s) {
    BitVector v(static_cast<std::size_t>(length));
    for (int i = 0; i <= generator.degree(); ++i)
      if (generator.coeff(i)) v.set(static_cast<std::size_t>(i + s));
    rows.push_back(v);
  }
  return BinaryCode(static_cast<std::size_t>(length), std::move(rows));
}

BinaryCode dual_code(const BinaryCode& code) {
  const std::size_t n = code.length();
  const auto& rows = code.generators();
  const auto& piv = code.pivots();
  std::vector<char> is_pivot(n, 0);
  for (int p : piv) is_pivot[static_cast<std::size_t>(p)] = 1;
  std::vector<BitVector> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    BitVector v(n);
    v.set(f);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].get(f)) v.set(static_cast<std::size_t>(piv[i]));
    basis.push_back(v);
  }
  return BinaryCode(n, std::move(basis));
}

int rank_of(std::vector<BitVector> rows) {
  if (rows.empty()) return 0;
  return static_cast<int>(rref(rows, rows[0].size()).size());
}

bool is_cyclic(const BinaryCode& code) {
  const std::size_t n = code.length();
  for (const auto& r : code.generators()) {
    BitVector s(n);
    for (std::size_t i = 0; i < n; ++i)
      if (r.get(i)) s.set((i + 1) % n);
    if (!code.contains(s)) return false;
  }
  return true;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return r > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(r);
}

// ---------------------------------------------------------------- enumeration

namespace {

constexpr int kMaxCodewordDim = 28;
constexpr int kMaxSupportWeight = 8;
constexpr int kSyndromeTableBits = 24;

// Codeword enumeration in Gray-code order over indices [begin, end).
template <typename Visit>
void gray_walk(const BinaryCode& code, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
  const int k = code.dimension();
  const std::uint64_t total = std::uint64_t{1} << k;
  end = std::min(end, total);
  if (begin >= end) return;
  const auto& rows = code.generators();
  BitVector cur = code.encode(begin ^ (begin >> 1));
  visit(cur);
  for (std::uint64_t i = begin + 1; i < end; ++i) {
    cur ^= rows[static_cast<std::size_t>(std::countr_zero(i))];
    visit(cur);
  }
}

template <typename Visit>
void gray_walk64(const BinaryCode& code, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
  const int k = code.dimension();
  const std::uint64_t total = std::uint64_t{1} << k;
  end = std::min(end, total);
  if (begin >= end) return;
  std::vector<std::uint64_t> rows;
  for (const auto& r : code.generators()) rows.push_back(r.to_word());
  std::uint64_t g = begin ^ (begin >> 1);
  std::uint64_t cur = 0;
  for (int i = 0; i < k; ++i)
    if ((g >> i) & 1u) cur ^= rows[static_cast<std::size_t>(i)];
  visit(cur);
  for (std::uint64_t i = begin + 1; i < end; ++i) {
    cur ^= rows[static_cast<std::size_t>(std::countr_zero(i))];
    visit(cur);
  }
}

// Fixed-weight support search: words of weight w in the code are exactly the
// supports whose column syndromes XOR to zero.
class SupportSearch {
 public:
  explicit SupportSearch(const BinaryCode& code) : n_(static_cast<int>(code.length())) {
    if (n_ > 64) throw std::invalid_argument("support enumeration needs n <= 64");
    BinaryCode h = dual_code(code);
    r_ = h.dimension();
    col_.assign(static_cast<std::size_t>(n_), 0);
    // Syndromes are computed with respect to the rows of the dual; up to 64 rows fit one word.
    for (int j = 0; j < n_; ++j) {
      std::uint64_t s = 0;
      for (int i = 0; i < r_; ++i)
        if (h.generators()[static_cast<std::size_t>(i)].get(static_cast<std::size_t>(j)))
          s |= std::uint64_t{1} << i;
      col_[static_cast<std::size_t>(j)] = s;
    }
    if (r_ <= kSyndromeTableBits) {
      table_.assign(std::size_t{1} << r_, 0);
      for (int j = 0; j < n_; ++j) table_[col_[static_cast<std::size_t>(j)]] |= std::uint64_t{1} << j;
    }
  }

  // Counts weight-w supports whose smallest element lies in [lo, hi); if
  // fixed0 is set the support must contain position 0 and [lo, hi) ranges
  // over the second element.
  std::uint64_t count(int w, int lo, int hi, bool fixed0) const {
    if (w == 0) return lo == 0 ? 1 : 0;
    std::uint64_t total = 0;
    if (fixed0) {
      if (w == 1) return (lo <= 0 && col_[0] == 0) ? 1 : 0;
      for (int j = std::max(lo, 1); j < hi && j < n_; ++j)
        total += rec(w - 2, j + 1, col_[0] ^ col_[static_cast<std::size_t>(j)]);
      return total;
    }
    for (int j = std::max(lo, 0); j < hi && j < n_; ++j) total += rec(w - 1, j + 1, col_[static_cast<std::size_t>(j)]);
    return total;
  }

  void visit(int w, const std::function<void(std::uint64_t)>& f) const {
    if (w == 0) {
      f(0);
      return;
    }
    walk(w, 0, 0, 0, f);
  }

 private:
  // Number of ways to pick `left` more positions >= start with syndrome XOR s == 0.
  std::uint64_t rec(int left, int start, std::uint64_t s) const {
    if (left == 0) return s == 0 ? 1 : 0;
    if (left == 1) {
      if (!table_.empty()) {
        if (s >= table_.size()) return 0;
        const std::uint64_t m = table_[s];
        const std::uint64_t above = start >= 64 ? 0 : (m & (~std::uint64_t{0} << start));
        return static_cast<std::uint64_t>(std::popcount(above));
      }
      std::uint64_t c = 0;
      for (int j = start; j < n_; ++j) c += col_[static_cast<std::size_t>(j)] == s;
      return c;
    }
    std::uint64_t total = 0;
    for (int j = start; j <= n_ - left; ++j) total += rec(left - 1, j + 1, s ^ col_[static_cast<std::size_t>(j)]);
    return total;
  }

  void walk(int left, int start, std::uint64_t s, std::uint64_t word,
            const std::function<void(std::uint64_t)>& f) const {
    if (left == 0) {
      if (s == 0) f(word);
      return;
    }
    if (left == 1 && !table_.empty()) {
      if (s >= table_.size() || start >= 64) return;
      std::uint64_t m = table_[s] & (~std::uint64_t{0} << start);
      while (m) {
        f(word | (m & (~m + 1)));
        m &= m - 1;
      }
      return;
    }
    for (int j = start; j <= n_ - left; ++j)
      walk(left - 1, j + 1, s ^ col_[static_cast<std::size_t>(j)], word | (std::uint64_t{1} << j), f);
  }

  int n_ = 0;
  int r_ = 0;
  std::vector<std::uint64_t> col_;
  std::vector<std::uint64_t> table_;
};

WeightStrategy resolve(const BinaryCode& code, int w, WeightStrategy s) {
  if (s != WeightStrategy::Auto) return s;
  const int k = code.dimension();
  const int n = static_cast<int>(code.length());
  const bool support_ok = n <= 64 && w <= kMaxSupportWeight;
  if (k <= kMaxCodewordDim) {
    if (!support_ok) return WeightStrategy::Codewords;
    const double cost_a = static_cast<double>(std::uint64_t{1} << k);
    const double cost_b = static_cast<double>(binomial(n, std::max(0, w - 1)));
    if (cost_a <= cost_b) return WeightStrategy::Codewords;
  }
  if (!support_ok) throw std::runtime_error("enumeration too large");
  return is_cyclic(code) && w > 0 ? WeightStrategy::SupportsCyclic : WeightStrategy::Supports;
}

}  // namespace

std::uint64_t shard_extent(const BinaryCode& code, int w, WeightStrategy strategy) {
  strategy = resolve(code, w, strategy);
  if (strategy == WeightStrategy::Codewords) return std::uint64_t{1} << code.dimension();
  return code.length();
}

std::uint64_t count_weight(const BinaryCode& code, int w, WeightStrategy strategy, Shard shard) {
  const int n = static_cast<int>(code.length());
  if (w < 0 || w > n) throw std::invalid_argument("weight out of range");
  const bool partial = shard.begin != 0 || shard.end < static_cast<std::uint64_t>(n);
  const bool automatic = strategy == WeightStrategy::Auto;
  strategy = resolve(code, w, strategy);
  if (strategy == WeightStrategy::SupportsCyclic && partial) {
    if (!automatic) throw std::invalid_argument("cyclic reduction cannot be sharded");
    strategy = WeightStrategy::Supports;
  }
  switch (strategy) {
    case WeightStrategy::Codewords: {
      if (code.dimension() > kMaxCodewordDim) throw std::runtime_error("enumeration too large");
      std::uint64_t c = 0;
      if (n <= 64) {
        gray_walk64(code, shard.begin, shard.end, [&](std::uint64_t v) { c += std::popcount(v) == w; });
      } else {
        gray_walk(code, shard.begin, shard.end, [&](const BitVector& v) { c += v.weight() == w; });
      }
      return c;
    }
    case WeightStrategy::Supports: {
      if (w > kMaxSupportWeight && code.dimension() > kMaxCodewordDim)
        throw std::runtime_error("enumeration too large");
      SupportSearch s(code);
      const int lo = static_cast<int>(std::min<std::uint64_t>(shard.begin, static_cast<std::uint64_t>(n)));
      const int hi = static_cast<int>(std::min<std::uint64_t>(shard.end, static_cast<std::uint64_t>(n)));
      return s.count(w, lo, hi, false);
    }
    case WeightStrategy::SupportsCyclic: {
      if (!is_cyclic(code)) throw std::invalid_argument("code is not cyclic");
      if (w > kMaxSupportWeight && code.dimension() > kMaxCodewordDim)
        throw std::runtime_error("enumeration too large");
      if (w == 0) return shard.begin == 0 ? 1 : 0;
      SupportSearch s(code);
      const int lo = static_cast<int>(std::min<std::uint64_t>(shard.begin, static_cast<std::uint64_t>(n)));
      const int hi = static_cast<int>(std::min<std::uint64_t>(shard.end, static_cast<std::uint64_t>(n)));
      // Every position lies in the same number of weight-w words, so words
      // through position 0 scale to the total by n/w.
      const std::uint64_t through0 = s.count(w, lo, hi, true);
      const unsigned __int128 scaled = static_cast<unsigned __int128>(through0) * static_cast<unsigned>(n);
      return static_cast<std::uint64_t>(scaled / static_cast<unsigned>(w));
    }
    case WeightStrategy::Auto:
      break;
  }
  throw std::logic_error("unresolved strategy");
}

std::optional<int> min_weight(const BinaryCode& code, int cap) {
  for (int w = 1; w <= cap && w <= static_cast<int>(code.length()); ++w)
    if (count_weight(code, w) > 0) return w;
  return std::nullopt;
}

void for_each_weight_word(const BinaryCode& code, int w, const std::function<void(std::uint64_t)>& visit) {
  const int n = static_cast<int>(code.length());
  if (n > 64) throw std::invalid_argument("word visitor needs n <= 64");
  WeightStrategy s = resolve(code, w, WeightStrategy::Auto);
  if (s == WeightStrategy::Codewords) {
    gray_walk64(code, 0, UINT64_MAX, [&](std::uint64_t v) {
      if (std::popcount(v) == w) visit(v);
    });
    return;
  }
  SupportSearch(code).visit(w, visit);
}

}  // namespace msd
