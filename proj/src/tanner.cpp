#include "msd/tanner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace msd {

namespace {

// Mutable bipartite graph with a running count of check pairs sharing two or more qubits.
class Graph {
 public:
  explicit Graph(const OuterCode& code) : n_(code.n_out()), m_(code.n_check()) {
    qc_.resize(static_cast<std::size_t>(n_));
    cq_ = code.checks();
    for (int c = 0; c < m_; ++c)
      for (int q : cq_[c]) qc_[q].push_back(c);
    ov_.assign(static_cast<std::size_t>(m_) * m_, 0);
    pos_.assign(static_cast<std::size_t>(m_) * m_, -1);
    for (int q = 0; q < n_; ++q)
      for (int a : qc_[q])
        for (int b : qc_[q])
          if (a < b) bump(a, b, +1);
  }

  int n() const { return n_; }
  long bad() const { return static_cast<long>(bad_.size()); }
  int degree(int q) const { return static_cast<int>(qc_[q].size()); }
  int check_at(int q, int slot) const { return qc_[q][slot]; }
  bool has(int c, int q) const { return std::find(qc_[q].begin(), qc_[q].end(), c) != qc_[q].end(); }

  // A random pair of checks sharing two or more qubits, and one shared qubit.
  std::pair<int, int> random_bad_edge(std::mt19937_64& rng) const {
    auto [a, b] = bad_[rng() % bad_.size()];
    std::vector<int> shared;
    for (int q : cq_[a])
      if (has(b, q)) shared.push_back(q);
    int q = shared[rng() % shared.size()];
    return {q, (rng() & 1) ? a : b};
  }

  bool can_swap(int q, int c, int q2, int c2) const {
    return q != q2 && c != c2 && !has(c2, q) && !has(c, q2);
  }

  void swap(int q, int c, int q2, int c2) {
    move(q, c, c2);
    move(q2, c2, c);
  }

  OuterCode to_code(const std::vector<std::vector<int>>& schedule) const {
    std::vector<std::vector<int>> checks(static_cast<std::size_t>(m_));
    for (int q = 0; q < n_; ++q)
      for (int c : qc_[q]) checks[c].push_back(q);
    return OuterCode(n_, std::move(checks), schedule);
  }

 private:
  void bump(int a, int b, int delta) {
    if (a > b) std::swap(a, b);
    const std::size_t i = static_cast<std::size_t>(a) * m_ + b;
    const int before = ov_[i];
    ov_[i] += delta;
    if (before < 2 && ov_[i] >= 2) {
      pos_[i] = static_cast<int>(bad_.size());
      bad_.push_back({a, b});
    } else if (before >= 2 && ov_[i] < 2) {
      const int p = pos_[i];
      auto last = bad_.back();
      bad_[p] = last;
      pos_[static_cast<std::size_t>(last.first) * m_ + last.second] = p;
      bad_.pop_back();
      pos_[i] = -1;
    }
  }

  void move(int q, int from, int to) {
    for (int d : qc_[q])
      if (d != from) bump(from, d, -1);
    auto& v = qc_[q];
    *std::find(v.begin(), v.end(), from) = to;
    for (int d : qc_[q])
      if (d != to) bump(to, d, +1);
    auto& a = cq_[from];
    a.erase(std::find(a.begin(), a.end(), q));
    cq_[to].push_back(q);
  }

  int n_, m_;
  std::vector<std::vector<int>> qc_, cq_;
  std::vector<int> ov_, pos_;
  std::vector<std::pair<int, int>> bad_;
};

std::vector<std::vector<int>> one_round(int m) {
  std::vector<int> all(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) all[i] = i;
  return {all};
}

// Uniform edge (qubit, slot).
std::pair<int, int> random_edge(const Graph& g, std::mt19937_64& rng) {
  while (true) {
    const int q = static_cast<int>(rng() % static_cast<std::uint64_t>(g.n()));
    if (g.degree(q) == 0) continue;
    return {q, g.check_at(q, static_cast<int>(rng() % static_cast<std::uint64_t>(g.degree(q))))};
  }
}

std::vector<std::vector<int>> unviolated_patterns(const OuterCode& code, int amax) {
  std::vector<std::vector<int>> out;
  search_patterns(code, amax, [](int) { return 0; }, [&](const std::vector<int>& t, const std::vector<int>&) {
    out.push_back(t);
    return true;
  });
  return out;
}

}  // namespace

OuterCode init_bipartite(const SearchConfig& cfg) {
  const int k = cfg.k_inner, a = cfg.alpha;
  if (k < 1 || a < 1) throw std::invalid_argument("k_inner and alpha must be positive");
  std::vector<std::vector<int>> checks;
  for (int copy = 0; copy < a; ++copy)
    for (int j = 0; j < 3; ++j) {
      std::vector<int> ch;
      for (int i = 0; i < k; ++i) ch.push_back(copy * k + i);
      checks.push_back(std::move(ch));
    }
  return OuterCode(a * k, std::move(checks), one_round(3 * a));
}

OuterCode eliminate_4cycles(const OuterCode& code, std::mt19937_64& rng, long budget, long* used) {
  Graph g(code);
  long best = g.bad();
  long it = 0;
  for (; g.bad() > 0 && it < budget; ++it) {
    auto [q, c] = g.random_bad_edge(rng);
    auto [q2, c2] = random_edge(g, rng);
    if (!g.can_swap(q, c, q2, c2)) continue;
    g.swap(q, c, q2, c2);
    best = std::min(best, g.bad());
  }
  if (used) *used = it;
  if (g.bad() > 0) throw SwapStuck("stuck: 4-cycles remain (" + std::to_string(best) + " bad check pairs at best)", 4);
  return g.to_code(code.schedule());
}

OuterCode anneal_girth_preserving(const OuterCode& code, std::mt19937_64& rng, long steps) {
  Graph g(code);
  if (g.bad() > 0) throw std::invalid_argument("anneal needs a 4-cycle free code");
  for (long s = 0; s < steps; ++s) {
    auto [q, c] = random_edge(g, rng);
    auto [q2, c2] = random_edge(g, rng);
    if (!g.can_swap(q, c, q2, c2)) continue;
    g.swap(q, c, q2, c2);
    if (g.bad() > 0) g.swap(q, c2, q2, c);
  }
  return g.to_code(code.schedule());
}

Certificate certify_distance7(const OuterCode& code) {
  Certificate cert;
  search_patterns(code, 6, [](int) { return 0; }, [&](const std::vector<int>& t, const std::vector<int>&) {
    cert.witness = BitVector::from_support(t, static_cast<std::size_t>(code.n_out()));
    return false;
  });
  cert.ok = !cert.witness.has_value();
  return cert;
}

SearchResult augment_checks(const OuterCode& code, std::mt19937_64& rng, int max_added, int k) {
  SearchResult res;
  auto checks = code.checks();
  auto sched = code.schedule();
  auto witnesses = unviolated_patterns(code, 6);
  const int n = code.n_out();

  for (int added = 0; added < max_added && !witnesses.empty(); ++added) {
    std::vector<int> best;
    std::size_t best_hit = 0;
    for (int trial = 0; trial < 4000 && best_hit < witnesses.size(); ++trial) {
      std::vector<int> s;
      std::vector<char> in(static_cast<std::size_t>(n), 0);
      std::vector<int> parity(witnesses.size(), 0);
      std::vector<int> meet(checks.size(), 0);
      while (static_cast<int>(s.size()) < k) {
        int pick = -1;
        long pick_score = -1;
        std::uint64_t pick_tie = 0;
        for (int q = 0; q < n; ++q) {
          if (in[q]) continue;
          // Keep the code 4-cycle free: at most one shared qubit with every existing check.
          bool ok = true;
          for (std::size_t c = 0; c < checks.size() && ok; ++c)
            if (meet[c] && std::binary_search(checks[c].begin(), checks[c].end(), q)) ok = false;
          if (!ok) continue;
          long score = 0;
          for (std::size_t w = 0; w < witnesses.size(); ++w) {
            const bool inw = std::binary_search(witnesses[w].begin(), witnesses[w].end(), q);
            score += (parity[w] ^ static_cast<int>(inw)) & 1;
          }
          const std::uint64_t tie = rng();
          if (score > pick_score || (score == pick_score && tie < pick_tie)) {
            pick = q;
            pick_score = score;
            pick_tie = tie;
          }
        }
        if (pick < 0) break;
        in[pick] = 1;
        s.push_back(pick);
        for (std::size_t w = 0; w < witnesses.size(); ++w)
          if (std::binary_search(witnesses[w].begin(), witnesses[w].end(), pick)) parity[w] ^= 1;
        for (std::size_t c = 0; c < checks.size(); ++c)
          if (std::binary_search(checks[c].begin(), checks[c].end(), pick)) meet[c] = 1;
      }
      if (static_cast<int>(s.size()) != k) continue;
      std::size_t hit = 0;
      for (int p : parity) hit += p;
      if (best.empty() || hit > best_hit) {
        best = s;
        best_hit = hit;
      }
    }
    if (best.empty()) break;
    std::sort(best.begin(), best.end());
    std::vector<std::vector<int>> rest;
    for (auto& w : witnesses) {
      int cnt = 0;
      for (int q : w) cnt += std::binary_search(best.begin(), best.end(), q);
      if (cnt % 2 == 0) rest.push_back(std::move(w));
    }
    witnesses = std::move(rest);
    sched.push_back({static_cast<int>(checks.size())});
    checks.push_back(std::move(best));
    ++res.added_checks;
  }

  res.code = OuterCode(n, checks, sched);
  res.girth = tanner_girth(res.code);
  auto cert = certify_distance7(res.code);
  if (cert.ok) {
    res.distance_certified = 7;
    res.success = verify_distance_sensitivity(res.code, 7).sensitivity_ok;
  } else {
    res.distance_certified = outer_distance(res.code, 6).value_or(7);
  }
  return res;
}

SearchResult run_search(const SearchConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  SearchResult res;
  res.seed = cfg.seed;
  OuterCode code = init_bipartite(cfg);
  long used = 0;
  try {
    code = eliminate_4cycles(code, rng, cfg.swap_budget, &used);
  } catch (const SwapStuck& e) {
    res.code = code;
    res.girth = e.best_girth;
    res.iterations_used = cfg.swap_budget;
    return res;
  }
  code = anneal_girth_preserving(code, rng, cfg.anneal_steps);
  res.iterations_used = used + cfg.anneal_steps;
  auto cert = certify_distance7(code);
  if (cert.ok) {
    res.code = code;
    res.girth = tanner_girth(code);
    res.distance_certified = 7;
    res.success = verify_distance_sensitivity(code, 7).sensitivity_ok;
    return res;
  }
  const int dist = outer_distance(code, 6).value_or(7);
  if (cfg.allow_added_checks && (dist == 5 || dist == 6)) {
    auto aug = augment_checks(code, rng, cfg.max_added_checks, cfg.k_inner);
    aug.seed = cfg.seed;
    aug.iterations_used = res.iterations_used;
    return aug;
  }
  res.code = code;
  res.girth = tanner_girth(code);
  res.distance_certified = dist;
  return res;
}

std::string default_seed_path() { return std::string(MSD_DATA_DIR) + "/data/tanner_seeds.txt"; }

std::vector<RecordedSeed> load_recorded_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open seed file " + path);
  std::vector<RecordedSeed> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    RecordedSeed r;
    int added = 0;
    if (!(ss >> r.config.k_inner >> r.config.alpha >> r.config.seed >> r.config.swap_budget >> r.config.anneal_steps >>
          added))
      throw std::runtime_error("bad seed line: " + line);
    r.config.allow_added_checks = added > 0;
    r.config.max_added_checks = added;
    out.push_back(r);
  }
  return out;
}

}  // namespace msd
