#include "msd/inner.hpp"

#include <bit>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace msd {

namespace {

constexpr int kDistanceCap = 10;

Poly2 xn_plus_1(int n) { return Poly2::monomial(n) + Poly2::monomial(0); }

}  // namespace

InnerCode build_inner_code(const Poly2& generator, int length, const std::string& name,
                           std::vector<std::string>* warnings) {
  InnerCode c;
  c.name = name;
  c.css = cyclic_code(generator, length);
  c.dual = dual_code(c.css);
  if (!c.dual.contains_code(c.css)) throw std::invalid_argument("not weakly self-dual");
  if (length % 2 == 0 && warnings) warnings->push_back("not normal: even length " + std::to_string(length));
  c.n = length;
  c.k = length - 2 * c.css.dimension();
  for (int w = 1; w <= kDistanceCap && c.d == 0; ++w)
    if (count_weight(c.dual, w) > count_weight(c.css, w)) c.d = w;
  if (c.d == 0) throw std::runtime_error("distance exceeds enumeration cap");
  for (int w : {c.d, c.d + 1}) c.c_log_table[w] = count_weight(c.dual, w) - count_weight(c.css, w);
  return c;
}

InnerCode inner_code_from_stabilizer(const Poly2& h, int length, const std::string& name) {
  return build_inner_code(poly_quotient(xn_plus_1(length), h), length, name);
}

std::uint64_t c_log(const InnerCode& code, int w) {
  if (w < 0) throw std::invalid_argument("negative weight");
  if (w < code.d) return 0;
  auto it = code.c_log_table.find(w);
  if (it == code.c_log_table.end()) throw std::out_of_range("weight beyond enumeration budget");
  return it->second;
}

// ---------------------------------------------------------------- catalog

std::string default_catalog_path() { return std::string(MSD_DATA_DIR) + "/data/inner_codes.txt"; }

std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog " + path);
  std::vector<CatalogEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    CatalogEntry e;
    std::string poly;
    if (!(ss >> e.name >> e.length >> poly >> e.n >> e.k >> e.d >> e.c_log_d))
      throw std::runtime_error("malformed catalog line: " + line);
    e.stabilizer = Poly2::parse(poly);
    out.push_back(std::move(e));
  }
  return out;
}

const InnerCode& catalog_code(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, InnerCode> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  for (const auto& e : load_catalog(default_catalog_path())) {
    if (e.name != name) continue;
    InnerCode c = inner_code_from_stabilizer(e.stabilizer, e.length, e.name);
    if (c.n != e.n || c.k != e.k || c.d != e.d || c_log(c, c.d) != e.c_log_d)
      throw std::runtime_error("catalog self-check failed for " + name);
    return cache.emplace(name, std::move(c)).first->second;
  }
  throw std::invalid_argument("unknown inner code " + name);
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& e : load_catalog(default_catalog_path())) names.push_back(e.name);
  return names;
}

// ---------------------------------------------------------------- magic basis

namespace {

// Representatives of C⊥ / C.
std::vector<BitVector> complement_basis(const InnerCode& code) {
  std::vector<BitVector> acc = code.css.generators();
  std::vector<BitVector> out;
  int rank = static_cast<int>(acc.size());
  for (const auto& g : code.dual.generators()) {
    acc.push_back(g);
    int r = rank_of(acc);
    if (r > rank) {
      out.push_back(g);
      rank = r;
    } else {
      acc.pop_back();
    }
  }
  return out;
}

BitVector random_member(const BinaryCode& c, std::mt19937_64& rng) {
  BitVector v(c.length());
  for (const auto& g : c.generators())
    if (rng() & 1) v ^= g;
  return v;
}

// GF(2) Gram-Schmidt: take the first odd vector, clear it from the rest.
std::optional<std::vector<BitVector>> gram_schmidt(const BinaryCode& css, std::vector<BitVector> rest) {
  std::vector<BitVector> out;
  while (!rest.empty()) {
    std::size_t pick = rest.size();
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (rest[i].dot(rest[i])) {
        pick = i;
        break;
      }
    if (pick == rest.size()) return std::nullopt;
    BitVector l = rest[pick];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
    std::vector<BitVector> kept;
    for (auto& r : rest) {
      if (r.dot(l)) r ^= l;
      if (!css.contains(r)) kept.push_back(std::move(r));
    }
    rest = std::move(kept);
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace

std::optional<MagicBasis> orthonormalize(const InnerCode& code, std::vector<BitVector> candidates) {
  auto v = gram_schmidt(code.css, std::move(candidates));
  if (!v || static_cast<int>(v->size()) != code.k) return std::nullopt;
  MagicBasis b;
  b.vectors = std::move(*v);
  b.min_coset_weight_ok = min_logical_support(code, b) >= 2;
  return b;
}

std::vector<std::uint64_t> logical_words(const InnerCode& code, int w) {
  std::vector<std::uint64_t> out;
  for_each_weight_word(code.dual, w, [&](std::uint64_t v) {
    if (!code.css.contains(BitVector::from_word(v, code.css.length()))) out.push_back(v);
  });
  return out;
}

namespace {

int support_with(const std::vector<std::uint64_t>& basis, const std::vector<std::uint64_t>& words) {
  int best = static_cast<int>(basis.size()) + 1;
  for (std::uint64_t v : words) {
    int a = 0;
    for (std::uint64_t l : basis) a += std::popcount(v & l) & 1;
    best = std::min(best, a);
  }
  return best;
}

std::vector<std::uint64_t> as_words(const MagicBasis& b) {
  std::vector<std::uint64_t> out;
  for (const auto& v : b.vectors) out.push_back(v.to_word());
  return out;
}

}  // namespace

MagicBasis find_magic_basis(const InnerCode& code, std::uint64_t seed, int attempts) {
  std::mt19937_64 rng(seed);
  const auto comp = complement_basis(code);
  const auto words = logical_words(code, code.d);
  std::optional<MagicBasis> best;
  int best_support = -1;
  for (int a = 1; a <= attempts; ++a) {
    std::vector<BitVector> cand;
    // Random full-rank combinations of the complement, shifted by random elements of C.
    while (true) {
      cand.clear();
      for (int i = 0; i < code.k; ++i) {
        BitVector v = random_member(code.css, rng);
        for (const auto& g : comp)
          if (rng() & 1) v ^= g;
        cand.push_back(std::move(v));
      }
      std::vector<BitVector> all = code.css.generators();
      all.insert(all.end(), cand.begin(), cand.end());
      if (rank_of(all) == code.css.dimension() + code.k) break;
    }
    auto v = gram_schmidt(code.css, cand);
    if (!v) continue;
    MagicBasis b;
    b.vectors = std::move(*v);
    const int s = words.empty() ? code.k : support_with(as_words(b), words);
    if (s > best_support) {
      best_support = s;
      best = std::move(b);
      best->min_coset_weight_ok = s >= 2;
      best->seed = seed;
      best->attempts_used = a;
      if (s >= 2) break;
    }
  }
  if (!best) throw std::runtime_error("basis search exhausted");
  return *best;
}

BitVector logical_action(const InnerCode& code, const MagicBasis& basis, const BitVector& v) {
  if (!code.dual.contains(v)) throw std::invalid_argument("not a logical operator");
  BitVector a(basis.vectors.size());
  for (std::size_t j = 0; j < basis.vectors.size(); ++j)
    if (v.dot(basis.vectors[j])) a.set(j);
  return a;
}

int min_logical_support(const InnerCode& code, const MagicBasis& basis) {
  const auto words = logical_words(code, code.d);
  if (words.empty()) return code.k;
  return support_with(as_words(basis), words);
}

int min_coset_weight(const InnerCode& code, const BitVector& v) {
  const auto& g = code.css.generators();
  const int r = static_cast<int>(g.size());
  if (r > 30) throw std::runtime_error("enumeration too large");
  BitVector cur = v;
  int best = cur.weight();
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << r); ++i) {
    cur ^= g[static_cast<std::size_t>(std::countr_zero(i))];
    best = std::min(best, cur.weight());
  }
  return best;
}

// ---------------------------------------------------------------- correction

CorrectionTable::CorrectionTable(const InnerCode& code, int m) : m_(m) {
  if (code.n > 64) throw std::invalid_argument("correction table needs n <= 64");
  if (code.css.dimension() > 24) throw std::runtime_error("syndrome table too large");
  for (const auto& g : code.css.generators()) rows_.push_back(g.to_word());
  table_.assign(std::size_t{1} << rows_.size(), -1);
  const int n = code.n;
  auto add = [&](std::uint64_t e) {
    auto& slot = table_[syndrome(e)];
    if (slot < 0) {
      slot = static_cast<std::int64_t>(e);
      ++count_;
    }
  };
  add(0);
  if (m >= 1)
    for (int i = 0; i < n; ++i) add(std::uint64_t{1} << i);
  if (m >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) add((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
  if (m > 2) throw std::invalid_argument("correction order above 2 is not supported");
}

std::uint32_t CorrectionTable::syndrome(std::uint64_t v) const {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) s |= static_cast<std::uint32_t>(std::popcount(v & rows_[i]) & 1) << i;
  return s;
}

std::optional<std::uint64_t> CorrectionTable::lookup(std::uint32_t s) const {
  if (s >= table_.size() || table_[s] < 0) return std::nullopt;
  return static_cast<std::uint64_t>(table_[s]);
}

}  // namespace msd
