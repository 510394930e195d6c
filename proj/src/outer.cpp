#include "msd/outer.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace msd {

OuterCode::OuterCode(int n_out, std::vector<std::vector<int>> checks, std::vector<std::vector<int>> schedule)
    : n_(n_out), checks_(std::move(checks)), schedule_(std::move(schedule)) {
  if (n_ <= 0) throw std::invalid_argument("n_out must be positive");
  qubit_checks_.assign(static_cast<std::size_t>(n_), {});
  for (std::size_t c = 0; c < checks_.size(); ++c) {
    auto& ch = checks_[c];
    std::sort(ch.begin(), ch.end());
    if (std::adjacent_find(ch.begin(), ch.end()) != ch.end())
      throw std::invalid_argument("check " + std::to_string(c) + " repeats a qubit");
    for (int q : ch) {
      if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
      qubit_checks_[q].push_back(static_cast<int>(c));
    }
  }
  round_.assign(checks_.size(), -1);
  for (std::size_t r = 0; r < schedule_.size(); ++r)
    for (int c : schedule_[r]) {
      if (c < 0 || c >= n_check()) throw std::invalid_argument("schedule names an unknown check");
      if (round_[c] >= 0) throw std::invalid_argument("check scheduled twice");
      round_[c] = static_cast<int>(r);
    }
  for (int r : round_)
    if (r < 0) throw std::invalid_argument("schedule misses a check");
}

int OuterCode::max_qubit_degree() const {
  std::size_t m = 0;
  for (const auto& v : qubit_checks_) m = std::max(m, v.size());
  return static_cast<int>(m);
}

std::string OuterCode::str() const {
  std::ostringstream out;
  out << n_ << " " << checks_.size() << (transitive ? " transitive" : "") << "\n";
  for (const auto& ch : checks_) {
    for (std::size_t i = 0; i < ch.size(); ++i) out << (i ? " " : "") << ch[i];
    out << "\n";
  }
  out << "rounds " << schedule_.size() << "\n";
  for (const auto& r : schedule_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
    out << "\n";
  }
  return out.str();
}

OuterCode OuterCode::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&]() {
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#') return true;
    throw std::invalid_argument("truncated outer code text");
  };
  auto ints = [](const std::string& s) {
    std::istringstream ss(s);
    std::vector<int> v;
    int x;
    while (ss >> x) v.push_back(x);
    return v;
  };
  next_line();
  std::istringstream head(line);
  int n = 0, m = 0;
  std::string flag;
  if (!(head >> n >> m)) throw std::invalid_argument("bad outer code header");
  head >> flag;
  std::vector<std::vector<int>> checks;
  for (int i = 0; i < m; ++i) {
    next_line();
    checks.push_back(ints(line));
  }
  next_line();
  std::istringstream rh(line);
  std::string word;
  int r = 0;
  if (!(rh >> word >> r) || word != "rounds") throw std::invalid_argument("expected rounds line");
  std::vector<std::vector<int>> sched;
  for (int i = 0; i < r; ++i) {
    next_line();
    sched.push_back(ints(line));
  }
  OuterCode c(n, std::move(checks), std::move(sched));
  c.transitive = flag == "transitive";
  return c;
}

// ---------------------------------------------------------------- constructors

Direction Direction::parse(const std::string& s) {
  if (s == "vertical") return {Axis, 0};
  if (s == "horizontal") return {Axis, 1};
  if (s == "diag_down") return {DiagDown, 0};
  if (s == "diag_up") return {DiagUp, 0};
  if (s.rfind("axis", 0) == 0 && s.size() > 4) return {Axis, std::stoi(s.substr(4))};
  throw std::invalid_argument("unknown direction " + s);
}

std::string Direction::str() const {
  switch (kind) {
    case DiagDown:
      return "diag_down";
    case DiagUp:
      return "diag_up";
    case Axis:
      break;
  }
  if (axis == 0) return "vertical";
  if (axis == 1) return "horizontal";
  return "axis" + std::to_string(axis);
}

OuterCode grid_code(const std::vector<int>& dims, const std::vector<Direction>& directions) {
  if (dims.empty()) throw std::invalid_argument("grid needs at least one dimension");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("grid dimension must be positive");
  const int D = static_cast<int>(dims.size());
  std::vector<int> stride(D, 1);
  for (int j = 1; j < D; ++j) stride[j] = stride[j - 1] * dims[j - 1];
  const int n = stride[D - 1] * dims[D - 1];

  std::vector<std::vector<int>> checks, sched;
  for (const auto& dir : directions) {
    std::vector<int> round;
    if (dir.kind == Direction::Axis) {
      const int j = dir.axis;
      if (j < 0 || j >= D) throw std::invalid_argument("axis out of range");
      for (int q = 0; q < n; ++q) {
        if ((q / stride[j]) % dims[j] != 0) continue;
        std::vector<int> ch;
        for (int t = 0; t < dims[j]; ++t) ch.push_back(q + t * stride[j]);
        round.push_back(static_cast<int>(checks.size()));
        checks.push_back(std::move(ch));
      }
    } else {
      if (D != 2 || dims[0] != dims[1]) throw std::invalid_argument("diagonal checks need a square 2-D grid");
      const int k = dims[0];
      for (int z = 0; z < k; ++z) {
        std::vector<int> ch;
        for (int x = 0; x < k; ++x) {
          // diag_down: x + y = z, diag_up: x - y = z (mod k); qubit (y, x) has index y + k x.
          int y = dir.kind == Direction::DiagDown ? ((z - x) % k + k) % k : ((x - z) % k + k) % k;
          ch.push_back(y + k * x);
        }
        round.push_back(static_cast<int>(checks.size()));
        checks.push_back(std::move(ch));
      }
    }
    sched.push_back(std::move(round));
  }
  OuterCode c(n, std::move(checks), std::move(sched));
  c.transitive = true;
  return c;
}

namespace {

std::vector<std::vector<int>> adjacency(int nv, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nv));
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= nv || v >= nv || u == v) throw std::invalid_argument("malformed edge");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

int girth_of(const std::vector<std::vector<int>>& adj) {
  const int nv = static_cast<int>(adj.size());
  int best = 0;
  std::vector<int> dist(nv), parent(nv);
  for (int s = 0; s < nv; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    parent[s] = -1;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      if (best && 2 * dist[u] + 1 >= best) break;
      for (int w : adj[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          q.push(w);
        } else if (w != parent[u]) {
          int len = dist[u] + dist[w] + 1;
          if (!best || len < best) best = len;
        }
      }
    }
  }
  return best;
}

}  // namespace

int graph_girth(int n_vertices, const std::vector<Edge>& edges) { return girth_of(adjacency(n_vertices, edges)); }

OuterCode graph_code(int n_vertices, const std::vector<Edge>& edges, int girth_expected) {
  auto adj = adjacency(n_vertices, edges);
  for (const auto& a : adj)
    if (a.size() != adj[0].size()) throw std::invalid_argument("graph is not regular");
  const int g = girth_of(adj);
  if (g != girth_expected)
    throw std::invalid_argument("girth " + std::to_string(g) + " differs from expected " + std::to_string(girth_expected));
  std::vector<std::vector<int>> checks(static_cast<std::size_t>(n_vertices));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    checks[edges[e].first].push_back(static_cast<int>(e));
    checks[edges[e].second].push_back(static_cast<int>(e));
  }
  std::vector<std::vector<int>> sched;
  for (int v = 0; v < n_vertices; ++v) sched.push_back({v});
  return OuterCode(static_cast<int>(edges.size()), std::move(checks), std::move(sched));
}

std::uint64_t count_5_cycles(int n_vertices, const std::vector<Edge>& edges) {
  auto adj = adjacency(n_vertices, edges);
  std::uint64_t total = 0;
  // Cycles through their smallest vertex s, counted once per direction.
  for (int s = 0; s < n_vertices; ++s)
    for (int a : adj[s]) {
      if (a <= s) continue;
      for (int b : adj[a]) {
        if (b <= s || b == a) continue;
        for (int c : adj[b]) {
          if (c <= s || c == a || c == b) continue;
          for (int d : adj[c]) {
            if (d <= s || d == a || d == b || d == c) continue;
            for (int e : adj[d])
              if (e == s) ++total;
          }
        }
      }
    }
  return total / 2;
}

std::vector<Edge> hoffman_singleton_edges() {
  auto P = [](int h, int j) { return 5 * h + ((j % 5) + 5) % 5; };
  auto Q = [](int i, int j) { return 25 + 5 * i + ((j % 5) + 5) % 5; };
  std::vector<Edge> e;
  for (int h = 0; h < 5; ++h)
    for (int j = 0; j < 5; ++j) {
      e.push_back({P(h, j), P(h, j + 1)});
      e.push_back({Q(h, j), Q(h, j + 2)});
    }
  for (int h = 0; h < 5; ++h)
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 5; ++i) e.push_back({P(h, j), Q(i, h * i + j)});
  return e;
}

std::vector<Edge> read_edge_list(const std::string& path, int* n_vertices) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list " + path);
  std::vector<Edge> edges;
  std::string line;
  int nv = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int u, v;
    if (!(ss >> u >> v)) throw std::runtime_error("bad edge line: " + line);
    edges.push_back({u, v});
    nv = std::max({nv, u + 1, v + 1});
  }
  if (n_vertices) *n_vertices = nv;
  return edges;
}

std::vector<Edge> named_graph(const std::string& name, int* n_vertices) {
  if (name == "petersen") return read_edge_list(std::string(MSD_DATA_DIR) + "/data/petersen.edges", n_vertices);
  if (name == "hoffman_singleton") {
    if (n_vertices) *n_vertices = 50;
    return hoffman_singleton_edges();
  }
  if (name == "degree9_96" || name == "degree11_156")
    throw std::runtime_error("graph " + name + " unavailable: adjacency data not shipped");
  throw std::invalid_argument("unknown graph " + name);
}

int tanner_girth(const OuterCode& code) {
  const int n = code.n_out();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n + code.n_check()));
  for (int c = 0; c < code.n_check(); ++c)
    for (int q : code.checks()[c]) {
      adj[q].push_back(n + c);
      adj[n + c].push_back(q);
    }
  return girth_of(adj);
}

// ---------------------------------------------------------------- schedule scans

ScheduleInfo schedule_info(const OuterCode& code) {
  ScheduleInfo info;
  const int m = code.n_check();
  info.later_singletons.resize(m);
  info.lonely.assign(m, false);
  info.once.assign(m, false);
  std::vector<int> mark(static_cast<std::size_t>(code.n_out()), -1);
  for (int c = 0; c < m; ++c) {
    const auto& ch = code.checks()[c];
    for (int q : ch) mark[q] = c;
    for (int q : ch) {
      std::vector<int> partners;
      for (int c2 : code.checks_of(q)) {
        if (code.round_of(c2) <= code.round_of(c)) continue;
        int overlap = 0;
        for (int q2 : code.checks()[c2]) overlap += mark[q2] == c;
        if (overlap == 1) partners.push_back(c2);
      }
      if (partners.empty()) info.lonely[c] = true;
      if (partners.size() == 1) info.once[c] = true;
      info.later_singletons[c].push_back(std::move(partners));
    }
    info.n_lonely += info.lonely[c];
    info.n_once += info.once[c];
  }
  return info;
}

std::pair<int, int> lonely_and_once(const OuterCode& code) {
  auto s = schedule_info(code);
  return {s.n_lonely, s.n_once};
}

bool first_check_not_lonely(const OuterCode& code) {
  auto s = schedule_info(code);
  for (int q = 0; q < code.n_out(); ++q) {
    int first = -1;
    for (int c : code.checks_of(q))
      if (first < 0 || code.round_of(c) < first) first = code.round_of(c);
    for (int c : code.checks_of(q))
      if (code.round_of(c) == first && s.lonely[c]) return false;
  }
  return true;
}

// ---------------------------------------------------------------- pattern search

namespace {

class PatternDfs {
 public:
  using Visit = std::function<bool(const std::vector<int>&, const std::vector<int>&)>;

  PatternDfs(const OuterCode& code, int amax, const std::function<int(int)>& vmax, const Visit& visit)
      : code_(code), amax_(amax), vmax_(vmax), visit_(visit), maxdeg_(code.max_qubit_degree()) {
    in_.assign(static_cast<std::size_t>(code.n_out()), 0);
    cnt_.assign(static_cast<std::size_t>(code.n_check()), 0);
    frozen_.assign(static_cast<std::size_t>(code.n_check()), 0);
  }

  void run() {
    const int roots = code_.transitive ? 1 : code_.n_out();
    for (int r = 0; r < roots && !stop_; ++r) {
      root_ = r;
      seen_.clear();
      add(r);
      rec();
      remove(r);
    }
  }

 private:
  bool eligible(int q) const {
    if (in_[q]) return false;
    if (!code_.transitive && q < root_) return false;
    for (int c : code_.checks_of(q))
      if (frozen_[c]) return false;
    return true;
  }

  void add(int q) {
    in_[q] = 1;
    set_.push_back(q);
    for (int c : code_.checks_of(q)) ++cnt_[c];
  }
  void remove(int q) {
    in_[q] = 0;
    set_.pop_back();
    for (int c : code_.checks_of(q)) --cnt_[c];
  }

  void rec() {
    if (stop_) return;
    const int a = static_cast<int>(set_.size());
    std::vector<int> violated, open;
    for (int q : set_)
      for (int c : code_.checks_of(q))
        if ((cnt_[c] & 1) && std::find(violated.begin(), violated.end(), c) == violated.end()) {
          violated.push_back(c);
          if (!frozen_[c]) open.push_back(c);
        }
    const int nf = static_cast<int>(violated.size() - open.size());
    const int no = static_cast<int>(open.size());
    bool feasible = false;
    for (int t = a; t <= amax_ && !feasible; ++t)
      feasible = nf + std::max(0, no - maxdeg_ * (t - a)) <= vmax_(t);
    if (!feasible) return;

    if (open.empty()) {
      if (nf <= vmax_(a)) {
        std::vector<int> key = set_;
        std::sort(key.begin(), key.end());
        if (seen_.insert(key).second) {
          std::sort(violated.begin(), violated.end());
          if (!visit_(key, violated)) {
            stop_ = true;
            return;
          }
        }
      }
      if (a >= amax_) return;
      std::vector<int> cand;
      for (int q : set_)
        for (int c : code_.checks_of(q))
          if (!frozen_[c])
            for (int q2 : code_.checks()[c])
              if (eligible(q2)) cand.push_back(q2);
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      for (int q : cand) {
        add(q);
        rec();
        remove(q);
        if (stop_) return;
      }
      return;
    }

    int best = -1;
    std::vector<int> best_cand;
    for (int c : open) {
      std::vector<int> cand;
      for (int q : code_.checks()[c])
        if (eligible(q)) cand.push_back(q);
      if (best < 0 || cand.size() < best_cand.size()) {
        best = c;
        best_cand = std::move(cand);
      }
    }
    if (a < amax_)
      for (int q : best_cand) {
        add(q);
        rec();
        remove(q);
        if (stop_) return;
      }
    if (nf + 1 <= vmax_(a)) {
      frozen_[best] = 1;
      rec();
      frozen_[best] = 0;
    }
  }

  const OuterCode& code_;
  int amax_;
  const std::function<int(int)>& vmax_;
  const Visit& visit_;
  int maxdeg_;
  int root_ = 0;
  bool stop_ = false;
  std::vector<int> set_;
  std::vector<char> in_;
  std::vector<int> cnt_;
  std::vector<char> frozen_;
  std::set<std::vector<int>> seen_;
};

}  // namespace

void search_patterns(const OuterCode& code, int amax, const std::function<int(int)>& vmax,
                     const std::function<bool(const std::vector<int>&, const std::vector<int>&)>& visit) {
  if (amax < 1) return;
  PatternDfs dfs(code, amax, vmax, visit);
  dfs.run();
}

int PatternKey::violated() const { return std::accumulate(violated_per_round.begin(), violated_per_round.end(), 0); }

Census connected_census(const OuterCode& code, int order_cap) {
  Census raw;
  auto vmax = [order_cap](int a) { return (order_cap - a) >= 0 ? (order_cap - a) / 2 : -1; };
  search_patterns(code, order_cap, vmax, [&](const std::vector<int>& t, const std::vector<int>& viol) {
    PatternKey k;
    k.a = static_cast<int>(t.size());
    k.violated_per_round.assign(static_cast<std::size_t>(code.num_rounds()), 0);
    for (int c : viol) ++k.violated_per_round[code.round_of(c)];
    ++raw[k];
    return true;
  });
  if (!code.transitive) return raw;
  Census out;
  for (const auto& [k, through0] : raw) {
    const auto total = static_cast<unsigned __int128>(through0) * static_cast<unsigned>(code.n_out());
    if (total % static_cast<unsigned>(k.a) != 0) throw std::logic_error("orbit count not divisible; code not transitive");
    out[k] = static_cast<std::uint64_t>(total / static_cast<unsigned>(k.a));
  }
  return out;
}

std::uint64_t c_out_naive(const OuterCode& code, int u, int v) {
  const int n = code.n_out();
  if (u > n) return 0;
  if (binomial(n, u) > 400'000'000ULL) throw std::runtime_error("enumeration budget exceeded");
  std::vector<int> idx(static_cast<std::size_t>(u));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> cnt(static_cast<std::size_t>(code.n_check()), 0);
  std::uint64_t total = 0;
  while (true) {
    for (int q : idx)
      for (int c : code.checks_of(q)) cnt[c] ^= 1;
    int viol = 0;
    for (int q : idx)
      for (int c : code.checks_of(q))
        if (cnt[c] == 1) {
          ++viol;
          cnt[c] = 2;  // count once
        }
    total += viol == v;
    for (int q : idx)
      for (int c : code.checks_of(q)) cnt[c] = 0;
    int i = u - 1;
    while (i >= 0 && idx[i] == n - u + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < u; ++j) idx[j] = idx[j - 1] + 1;
  }
  return total;
}

namespace {
bool all_qubits_adjacent(const OuterCode& code) {
  for (int q = 0; q < code.n_out(); ++q) {
    std::vector<char> seen(static_cast<std::size_t>(code.n_out()), 0);
    for (int c : code.checks_of(q))
      for (int r : code.checks()[c]) seen[r] = 1;
    for (char s : seen)
      if (!s) return false;
  }
  return true;
}
}  // namespace

Census complete_census(const OuterCode& code, int order_cap) {
  Census census = connected_census(code, order_cap);
  if (all_qubits_adjacent(code)) return census;
  int min_order = order_cap + 1;
  for (const auto& [k, c] : census) min_order = std::min(min_order, k.a + 2 * k.violated());
  if (2 * min_order <= order_cap)
    throw std::runtime_error("census incomplete: disconnected patterns reach order " + std::to_string(2 * min_order));
  return census;
}

std::uint64_t c_out(const OuterCode& code, int u, int v) {
  if (u < 0 || v < 0) throw std::invalid_argument("negative argument");
  if (u == 0) return v == 0 ? 1 : 0;
  const int cap = u + 2 * v;
  Census census = connected_census(code, cap);
  int min_order = cap + 1;
  for (const auto& [k, c] : census) min_order = std::min(min_order, k.a + 2 * k.violated());
  if (2 * min_order > cap) {
    std::uint64_t total = 0;
    for (const auto& [k, c] : census)
      if (k.a == u && k.violated() == v) total += c;
    return total;
  }
  return c_out_naive(code, u, v);
}

std::optional<int> outer_distance(const OuterCode& code, int cap) {
  std::optional<int> best;
  search_patterns(code, cap, [](int) { return 0; }, [&](const std::vector<int>& t, const std::vector<int>&) {
    const int a = static_cast<int>(t.size());
    if (!best || a < *best) best = a;
    return true;
  });
  return best;
}

SensitivityReport verify_distance_sensitivity(const OuterCode& code, int d) {
  if (d > 8) throw std::invalid_argument("distance check limited to d <= 8");
  SensitivityReport rep;
  auto dist = outer_distance(code, d - 1);
  rep.distance_ok = !dist.has_value();
  auto vmax = [d](int a) { return (d - a + 1) / 2 - 1; };
  search_patterns(code, d - 1, vmax, [&](const std::vector<int>& t, const std::vector<int>&) {
    rep.witness = BitVector::from_support(t, static_cast<std::size_t>(code.n_out()));
    return false;
  });
  rep.sensitivity_ok = !rep.witness.has_value();
  auto [nl, no] = lonely_and_once(code);
  rep.n_lonely = nl;
  rep.n_once = no;
  rep.girth = tanner_girth(code);
  rep.four_cycle_free = rep.girth == 0 || rep.girth >= 6;
  return rep;
}

}  // namespace msd
