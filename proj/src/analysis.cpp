#include "msd/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include <json.hpp>

namespace msd {

Policy parse_policy(const std::string& s) {
  if (s == "terminate") return Policy::Terminate;
  if (s == "parallel_then_terminate") return Policy::ParallelThenTerminate;
  if (s == "partial_restart") return Policy::PartialRestart;
  throw std::invalid_argument("unknown policy: " + s);
}

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::Terminate: return "terminate";
    case Policy::ParallelThenTerminate: return "parallel_then_terminate";
    case Policy::PartialRestart: return "partial_restart";
  }
  return "?";
}

double source_multiplier(const std::string& source) {
  if (source == "raw") return 1.0;
  if (source == "MEK") return 5.0;
  if (source == "BK15") return 15.0;
  throw std::invalid_argument("unknown magic-state source: " + source);
}

namespace {

using nlohmann::json;

OuterCode outer_from_json(const json& j, const std::string& base_dir) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "grid") {
    std::vector<Direction> dirs;
    for (const auto& d : j.at("directions")) dirs.push_back(Direction::parse(d.get<std::string>()));
    return grid_code(j.at("dims").get<std::vector<int>>(), dirs);
  }
  if (type == "graph") {
    int nv = 0;
    auto edges = named_graph(j.at("graph").get<std::string>(), &nv);
    return graph_code(nv, edges, j.value("girth", 0));
  }
  if (type == "file") {
    std::filesystem::path p = j.at("path").get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open outer code file " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return OuterCode::parse(ss.str());
  }
  throw std::invalid_argument("unknown outer code type: " + type);
}

}  // namespace

ProtocolSpec parse_protocol(const std::string& json_text, const std::string& base_dir) {
  const json j = json::parse(json_text, nullptr, true, true);
  ProtocolSpec s;
  s.name = j.value("name", "");
  s.outer = outer_from_json(j.at("outer"), base_dir);
  for (const auto& r : j.at("rounds")) {
    RoundSpec rs;
    rs.inner = r.at("inner").get<std::string>();
    rs.eps_check = r.at("eps_check").get<double>();
    rs.m = r.value("m", 0);
    rs.policy = parse_policy(r.value("policy", std::string("parallel_then_terminate")));
    rs.source = r.value("source", std::string("raw"));
    s.rounds.push_back(rs);
  }
  s.eps_input = j.at("eps_input").get<double>();
  s.input_source = j.value("input_source", std::string("raw"));
  s.conservative = j.value("conservative", false);
  s.basis_seed = j.value("basis_seed", std::uint64_t{1});
  if (j.contains("expected")) {
    const auto& e = j.at("expected");
    if (e.contains("n_out_bar")) s.expected.n_out_bar = e.at("n_out_bar").get<double>();
    if (e.contains("eps_out_bar")) s.expected.eps_out_bar = e.at("eps_out_bar").get<double>();
    if (e.contains("nT_per_out")) s.expected.nT_per_out = e.at("nT_per_out").get<double>();
  }
  return s;
}

ProtocolSpec load_protocol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open protocol file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_protocol(ss.str(), std::filesystem::path(path).parent_path().string());
}

MarkovRates markov_rates(const InnerCode& code, double eps, int m) {
  if (m < 0 || m > 2) throw std::invalid_argument("correction order must be 0, 1 or 2");
  const double n = code.n;
  MarkovRates r;
  r.p_succ = std::pow(1.0 - eps, 2.0 * n);
  if (m == 0) {
    r.p_fail = 1.0 - r.p_succ;
    r.p = r.p_succ;
    return r;
  }
  r.p_repeat = 2.0 * n * eps;
  if (m == 2) r.p_repeat += 4.0 * n * n * eps * eps;
  double fact = 1.0;
  for (int i = 2; i <= m + 1; ++i) fact *= i;
  r.p_fail = n * eps * eps + std::pow(2.0 * n * eps, m + 1) / fact;
  r.p = r.p_succ / (r.p_succ + r.p_fail);
  return r;
}

int grid_order(const std::vector<int>& d) {
  if (d.empty()) throw std::invalid_argument("grid needs at least one dimension");
  if (!std::is_sorted(d.begin(), d.end())) throw std::invalid_argument("inner distances must be non-decreasing");
  const int inf = std::numeric_limits<int>::max() / 4;
  int one = 1, two = inf;  // cheapest pattern violating one / two checks of the current slice
  for (int dj : d) {
    const int n1 = std::min({one + 2, two + 4, dj});
    const int n2 = std::min({2 * two, 2 * one, two + 4, dj});
    one = n1;
    two = n2;
  }
  return std::min(one, two);
}

double series_correction(const std::map<int, double>& counts, double eps, int positions) {
  if (counts.empty()) return 0.0;
  const int d = counts.begin()->first;
  const double cd = counts.begin()->second;
  auto it = counts.find(d + 1);
  const double cd1 = it == counts.end() ? 0.0 : it->second;
  return cd * std::pow(eps, d) + (cd1 - cd * (positions - d)) * std::pow(eps, d + 1);
}

const MagicBasis& analysis_basis(const std::string& inner, std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::uint64_t>, MagicBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(inner, seed);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, find_magic_basis(catalog_code(inner), seed, 2000)).first;
  return it->second;
}

namespace {

// One ε_out term: count · ε_in^a · Π_r ε_r^{b_r}.
struct Term {
  std::string channel;
  int round = -1;
  int a = 0;
  std::vector<int> b;
  double count = 0.0;
  int order() const {
    int o = a;
    for (int x : b) o += x;
    return o;
  }
};

struct RoundData {
  const InnerCode* code = nullptr;
  const MagicBasis* basis = nullptr;
  MarkovRates rates;
  int n_checks = 0;
};

double clog(const InnerCode& c, int w) { return static_cast<double>(c_log(c, w)); }

// #(v, j) with v a weight-w logical whose action is exactly e_j.
double single_action_pairs(const InnerCode& code, const MagicBasis& basis, int w) {
  double total = 0;
  for (std::uint64_t word : logical_words(code, w)) {
    if (logical_action(code, basis, BitVector::from_word(word, static_cast<std::size_t>(code.n))).weight() == 1) total += 1;
  }
  return total;
}

struct Model {
  const ProtocolSpec& spec;
  std::vector<RoundData> rd;
  ScheduleInfo info;
  int leading_outer = 0;
  int cap = 0;
  Census census;
  std::vector<std::string> warnings;

  explicit Model(const ProtocolSpec& s) : spec(s) {}

  int R() const { return static_cast<int>(rd.size()); }
  std::vector<int> zero_b() const { return std::vector<int>(rd.size(), 0); }

  void validate_and_prepare(int order_cap) {
    const OuterCode& oc = spec.outer;
    if (static_cast<int>(spec.rounds.size()) != oc.num_rounds())
      throw Refusal("round count mismatch: protocol lists " + std::to_string(spec.rounds.size()) +
                    " rounds, schedule has " + std::to_string(oc.num_rounds()));
    info = schedule_info(oc);
    bool any_m = false, any_m2 = false;
    for (int r = 0; r < oc.num_rounds(); ++r) {
      const RoundSpec& rs = spec.rounds[r];
      RoundData d;
      d.code = &catalog_code(rs.inner);
      if (rs.m < 0 || rs.m > 2) throw Refusal("correction order m must be 0, 1 or 2");
      if (rs.m >= 1 && !(2 * (d.code->d - rs.m) > d.code->d))
        throw Refusal("correction order too high for " + rs.inner + ": need 2(d-m) > d");
      if (rs.eps_check < 0 || rs.eps_check >= 1) throw Refusal("check error rate out of range");
      any_m = any_m || rs.m >= 1;
      any_m2 = any_m2 || rs.m == 2;
      d.basis = &analysis_basis(rs.inner, spec.basis_seed);
      if (!d.basis->min_coset_weight_ok)
        warnings.push_back("magic basis for " + rs.inner + " has a weight-d logical acting on one qubit");
      d.rates = markov_rates(*d.code, rs.eps_check, rs.m);
      d.n_checks = static_cast<int>(oc.schedule()[r].size());
      for (int c : oc.schedule()[r])
        if (static_cast<int>(oc.checks()[c].size()) != d.code->k)
          throw Refusal("check " + std::to_string(c) + " has " + std::to_string(oc.checks()[c].size()) +
                        " qubits but " + rs.inner + " encodes " + std::to_string(d.code->k));
      rd.push_back(d);
    }
    if (spec.conservative && !any_m2) throw Refusal("conservative variant needs a round with m = 2");
    if (any_m) {
      const int g = tanner_girth(oc);
      if (g != 0 && g < 6) throw Refusal("checks share more than one qubit; correction analysis needs a 4-cycle free code");
    }
    if (spec.eps_input < 0 || spec.eps_input >= 1) throw Refusal("input error rate out of range");

    // Lonely first checks are analysed only when the check is isolated.
    for (int c = 0; c < oc.n_check(); ++c) {
      if (!info.lonely[c]) continue;
      bool is_first_for_some = false, isolated = true;
      for (int q : oc.checks()[c]) {
        int first = oc.num_rounds();
        for (int c2 : oc.checks_of(q)) first = std::min(first, oc.round_of(c2));
        if (first == oc.round_of(c)) is_first_for_some = true;
        if (oc.checks_of(q).size() != 1) isolated = false;
      }
      if (is_first_for_some && !isolated)
        throw Refusal("first check of a qubit is lonely and shares qubits with other checks");
    }

    for (int c0 = 1; c0 <= 12 && leading_outer == 0; ++c0) {
      Census probe = connected_census(oc, c0);
      for (const auto& [k, cnt] : probe)
        if (cnt > 0) {
          const int o = k.a + 2 * k.violated();
          if (leading_outer == 0 || o < leading_outer) leading_outer = o;
        }
    }
    if (leading_outer == 0) throw Refusal("no undetected outer pattern up to order 12");
    cap = order_cap > 0 ? order_cap : leading_outer + 1;
    try {
      census = complete_census(oc, cap);
    } catch (const std::runtime_error& e) {
      throw Refusal(e.what());
    }
  }

  double eps_of(int r) const { return spec.rounds[r].eps_check; }

  // Σ_{f odd} binom(n,f) x^{2f}, expanded per round and truncated at budget.
  void expand_checks(const std::vector<int>& viol, int r, int budget, std::vector<int>& b, double coef,
                     std::vector<std::pair<std::vector<int>, double>>& out) const {
    if (r == R()) {
      out.push_back({b, coef});
      return;
    }
    expand_round(viol, r, viol[r], budget, b, coef, out);
  }

  void expand_round(const std::vector<int>& viol, int r, int left, int budget, std::vector<int>& b, double coef,
                    std::vector<std::pair<std::vector<int>, double>>& out) const {
    if (left == 0) {
      expand_checks(viol, r + 1, budget, b, coef, out);
      return;
    }
    const int n = rd[r].code->n;
    for (int f = 1; 2 * f <= budget && f <= n; f += 2) {
      b[r] += 2 * f;
      expand_round(viol, r, left - 1, budget - 2 * f, b, coef * static_cast<double>(binomial(n, f)), out);
      b[r] -= 2 * f;
    }
  }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    const OuterCode& oc = spec.outer;

    for (const auto& [k, cnt] : census) {
      if (cnt == 0) continue;
      if (k.violated() == 0) {
        out.push_back({"input-pattern", -1, k.a, zero_b(), static_cast<double>(cnt)});
        continue;
      }
      std::vector<std::pair<std::vector<int>, double>> ex;
      std::vector<int> b = zero_b();
      expand_checks(k.violated_per_round, 0, cap - k.a, b, 1.0, ex);
      for (auto& [bv, coef] : ex)
        out.push_back({"incorrect-measurement", -1, k.a, bv, static_cast<double>(cnt) * coef});
    }

    for (int c = 0; c < oc.n_check(); ++c) {
      const int r = oc.round_of(c);
      const RoundData& d = rd[r];
      const InnerCode& ic = *d.code;
      const int dd = ic.d;
      const double two_dm1 = std::ldexp(1.0, dd - 1);
      if (info.lonely[c]) {
        Term t{"logical-in-lonely", r, 0, zero_b(), two_dm1 * clog(ic, dd)};
        t.b[r] = dd;
        out.push_back(t);
        Term t1{"logical-in-lonely", r, 0, zero_b(), 2 * two_dm1 * clog(ic, dd + 1)};
        t1.b[r] = dd + 1;
        out.push_back(t1);
        bool isolated = true;
        for (int q : oc.checks()[c]) isolated = isolated && oc.checks_of(q).size() == 1;
        if (isolated) {
          const double pairs = single_action_pairs(ic, *d.basis, dd);
          Term t2{"logical-with-input", r, 1, zero_b(), two_dm1 * (ic.k * clog(ic, dd) - pairs)};
          t2.b[r] = dd;
          out.push_back(t2);
        }
        continue;
      }
      if (!info.once[c]) continue;
      // Partner: the single later check of some qubit, with the largest n ε².
      int partner_round = -1;
      double best = -1;
      for (const auto& partners : info.later_singletons[c]) {
        if (partners.size() != 1) continue;
        const int r2 = oc.round_of(partners[0]);
        const double w = rd[r2].code->n * eps_of(r2) * eps_of(r2);
        if (w > best) {
          best = w;
          partner_round = r2;
        }
      }
      const double n2 = rd[partner_round].code->n;
      Term t{"logical-once", r, 0, zero_b(), two_dm1 * clog(ic, dd) * n2};
      t.b[r] += dd;
      t.b[partner_round] += 2;
      out.push_back(t);

      const int m = spec.rounds[r].m;
      if (m >= 1 && !spec.conservative && min_logical_support(ic, *d.basis) < 2) {
        Term t1{"logical-from-correction", r, 0, zero_b(), two_dm1 * dd * clog(ic, dd) * n2};
        t1.b[r] += dd - 1;
        t1.b[partner_round] += 2;
        out.push_back(t1);
        if (m == 2) {
          Term t2{"logical-from-correction", r, 0, zero_b(),
                  std::ldexp(1.0, dd - 2) * (dd * (dd - 1) / 2.0) * clog(ic, dd) * n2};
          t2.b[r] += dd - 2;
          t2.b[partner_round] += 2;
          out.push_back(t2);
        }
      }
    }
    return out;
  }

  double probability(const Term& t) const {
    double p = t.count * std::pow(spec.eps_input, t.a);
    for (int r = 0; r < R(); ++r) p *= std::pow(eps_of(r), t.b[r]);
    return p;
  }
};

}  // namespace

std::map<std::pair<int, int>, double> basic_counts(const ProtocolSpec& spec, int max_order) {
  Model model(spec);
  model.validate_and_prepare(max_order);
  std::map<std::pair<int, int>, double> out;
  for (const Term& t : model.terms()) {
    int b = 0;
    for (int x : t.b) b += x;
    if (t.a + b <= max_order && t.count != 0) out[{t.a, b}] += t.count;
  }
  return out;
}

ExactCheckRates exact_check_rates(const InnerCode& code, double eps, int m) {
  const auto& gens = code.css.generators();
  const int dim = static_cast<int>(gens.size());
  if (code.n > 63 || dim > 24) throw Refusal("exact rates need n <= 63 and dim C <= 24");
  const int n = code.n;
  const double B = 2 * eps * (1 - eps), x = 1 - 2 * B;
  std::vector<std::uint64_t> cw(std::size_t{1} << dim, 0);
  for (std::size_t i = 1; i < cw.size(); ++i) {
    const int bit = std::countr_zero(i);
    cw[i] = cw[i & (i - 1)] ^ gens[bit].to_word();
  }
  std::vector<double> xp(n + 1), bp(n + 1);
  for (int w = 0; w <= n; ++w) {
    xp[w] = std::pow(x, w);
    bp[w] = std::pow(B, w) * std::pow(1 - B, n - w);
  }
  const double scale = std::ldexp(1.0, -dim);
  ExactCheckRates r;
  double in_c = 0;
  for (auto c : cw) {
    r.trivial += xp[std::popcount(c)] * scale;
    in_c += bp[std::popcount(c)];
  }
  const double f = std::pow(1 - 2 * eps, n);
  r.trivial_even = (r.trivial + f) / 2;
  r.clean_even = (in_c + f) / 2;
  r.logical_even = r.trivial_even - r.clean_even;
  if (m >= 1) {
    CorrectionTable table(code, m);
    std::vector<char> seen(std::size_t{1} << dim, 0);
    seen[0] = 1;
    auto add = [&](std::uint64_t rep) {
      const auto syn = table.syndrome(rep);
      if (seen[syn]) return;
      seen[syn] = 1;
      double p = 0;
      for (auto c : cw) p += ((std::popcount(rep & c) & 1) ? -1.0 : 1.0) * xp[std::popcount(c)];
      r.correctable += p * scale;
    };
    for (int i = 0; i < n; ++i) add(std::uint64_t{1} << i);
    if (m >= 2)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) add((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
  }
  r.uncorrectable = std::max(0.0, 1 - r.trivial - r.correctable);
  const double trivial_odd = r.trivial - r.trivial_even;
  r.pass_even = r.trivial_even / (r.trivial_even + r.uncorrectable + trivial_odd);
  r.pass_odd = trivial_odd / (trivial_odd + r.uncorrectable + r.trivial_even);
  return r;
}

namespace {

void leading_eps(const Model& model, AnalysisReport& rep) {
  const ProtocolSpec& spec = model.spec;
  // ε_out
  auto terms = model.terms();
  int lead = std::numeric_limits<int>::max();
  for (const Term& t : terms)
    if (t.count > 0) lead = std::min(lead, t.order());
  std::map<std::pair<std::string, int>, Contribution> agg;
  for (const Term& t : terms) {
    const double p = model.probability(t);
    rep.eps_out_uncorrected += p;
    double resid = 0;
    if (t.order() == lead)
      for (int r = 0; r < model.R(); ++r)
        if (spec.rounds[r].m >= 1) resid += t.b[r] * model.eps_of(r);
    rep.eps_out += p * (1.0 - resid);
    int b = 0;
    for (int x : t.b) b += x;
    auto& c = agg[{t.channel, t.round}];
    c.channel = t.channel;
    c.round = t.round;
    c.probability += p;
    if (c.count == 0 || t.a + b < c.a + c.b) {
      c.a = t.a;
      c.b = b;
    }
    c.count += t.count;
  }
  for (auto& [k, c] : agg) rep.contributions.push_back(c);
  std::sort(rep.contributions.begin(), rep.contributions.end(),
            [](const Contribution& x, const Contribution& y) { return x.probability > y.probability; });

}

// Single isolated check without correction: exact sums over C⊥ by (weight, action weight).
void single_check_exact(const Model& model, AnalysisReport& rep) {
  const ProtocolSpec& spec = model.spec;
  const InnerCode& code = *model.rd[0].code;
  const MagicBasis& basis = *model.rd[0].basis;
  const auto& gens = code.dual.generators();
  const int dim = static_cast<int>(gens.size());
  if (dim > 30) throw Refusal("exact single-check sums need dim C⊥ <= 30");
  const int n = code.n, k = code.k;
  std::vector<std::uint64_t> ell;
  for (const auto& l : basis.vectors) ell.push_back(l.to_word());
  std::vector<std::uint64_t> act(static_cast<std::size_t>(dim));
  for (int g = 0; g < dim; ++g)
    for (int j = 0; j < k; ++j) act[g] |= static_cast<std::uint64_t>(std::popcount(gens[g].to_word() & ell[j]) & 1) << j;
  std::vector<std::vector<double>> W(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(k + 1), 0));
  std::uint64_t v = 0, a = 0;
  W[0][0] = 1;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << dim); ++i) {
    const int bit = std::countr_zero(i);
    v ^= gens[bit].to_word();
    a ^= act[bit];
    W[std::popcount(v)][std::popcount(a)] += 1;
  }
  const double eps = spec.rounds[0].eps_check, ei = spec.eps_input;
  const double B = 2 * eps * (1 - eps);
  const double Ee = (1 + std::pow((1 - 2 * eps) / (1 - B), n)) / 2;
  const double Ie = (1 + std::pow(1 - 2 * ei, k)) / 2;
  const double zero = std::pow(1 - B, n);
  double acc = zero * (Ie * Ee + (1 - Ie) * (1 - Ee));
  double clean = zero * std::pow(1 - ei, k) * Ee;
  for (int w = 1; w <= n; ++w)
    for (int t = 0; t <= k; ++t) {
      if (W[w][t] == 0) continue;
      const double pv = W[w][t] * std::pow(B, w) * std::pow(1 - B, n - w) / 2;
      acc += pv;
      clean += pv * std::pow(ei, t) * std::pow(1 - ei, k - t);
    }
  rep.eps_out = rep.eps_out_uncorrected = acc - clean;
  rep.acceptance = acc;
  rep.n_out_bar = k * acc;
  rep.n_T_bar = k * source_multiplier(spec.input_source) + 2.0 * n * source_multiplier(spec.rounds[0].source);
  rep.eps_out_bar = rep.eps_out / rep.n_out_bar;
  rep.contributions.push_back({"exact-single-check", 0, 0, 0, 0, rep.eps_out});
}

// Census and logical channels reweighted by exact per-check pass probabilities;
// returns the relative acceptance gained from accepted error patterns.
double resummed_eps(const Model& model, const std::vector<ExactCheckRates>& ex, AnalysisReport& rep) {
  const ProtocolSpec& spec = model.spec;
  const OuterCode& oc = spec.outer;
  const double ri = spec.eps_input / (1 - spec.eps_input);
  double extra = 0, eps = 0;
  std::map<std::string, Contribution> agg;
  auto add = [&](const std::string& ch, int a, double ratio) {
    auto& c = agg[ch];
    c.channel = ch;
    c.a = a;
    c.probability += ratio;
    eps += ratio;
  };
  for (const auto& [key, cnt] : model.census) {
    double ratio = static_cast<double>(cnt) * std::pow(ri, key.a);
    for (int r = 0; r < model.R(); ++r) ratio *= std::pow(ex[r].pass_odd / ex[r].pass_even, key.violated_per_round[r]);
    extra += ratio;
    add(key.violated() == 0 ? "input-pattern" : "incorrect-measurement", key.a, ratio);
  }
  for (int c = 0; c < oc.n_check(); ++c) {
    const int r = oc.round_of(c);
    const auto& e = ex[r];
    const double logical = e.logical_even * (1 - e.correctable) / e.trivial_even;
    if (model.info.lonely[c]) {
      add("logical-in-lonely", 0, logical);
      continue;
    }
    if (!model.info.once[c]) continue;
    double best = 0;
    for (const auto& partners : model.info.later_singletons[c])
      if (partners.size() == 1) {
        const int r2 = oc.round_of(partners[0]);
        best = std::max(best, ex[r2].pass_odd / ex[r2].pass_even);
      }
    add("logical-once", 0, logical * best);
  }
  rep.eps_out_uncorrected = eps;
  rep.eps_out = eps;
  for (auto& [k, c] : agg) rep.contributions.push_back(c);
  return extra;
}

void fill_yield(const Model& model, AnalysisReport& rep) {
  const ProtocolSpec& spec = model.spec;
  const OuterCode& oc = spec.outer;
  // Yield: discard of qubits left unprotected after a correction.
  const int thr = spec.conservative ? 1 : 0;
  double discard = 0;
  for (int c = 0; c < oc.n_check(); ++c) {
    const int r = oc.round_of(c);
    if (spec.rounds[r].m < 1) continue;
    int weak = 0;
    for (const auto& partners : model.info.later_singletons[c]) weak += static_cast<int>(partners.size()) <= thr;
    discard += model.rd[r].rates.p_repeat * weak;
  }
  double acc = std::pow(1.0 - spec.eps_input, oc.n_out());
  double reach = 1.0;
  double nT = oc.n_out() * source_multiplier(spec.input_source);
  for (int r = 0; r < model.R(); ++r) {
    const RoundSpec& rs = spec.rounds[r];
    const RoundData& d = model.rd[r];
    const double per_check = 2.0 * d.code->n / (1.0 - d.rates.p_repeat) * source_multiplier(rs.source);
    const int N = d.n_checks;
    double factor = std::pow(d.rates.p, N);
    double cost;
    if (rs.policy == Policy::PartialRestart) {
      factor = 1.0;
      cost = N * per_check / d.rates.p;
      if (r == 0) nT /= d.rates.p;
    } else if (rs.policy == Policy::Terminate && d.rates.p < 1.0) {
      cost = per_check * (1.0 - std::pow(d.rates.p, N)) / (1.0 - d.rates.p);
    } else {
      cost = N * per_check;
    }
    nT += reach * cost;
    reach *= factor;
    acc *= factor;
  }
  rep.acceptance = acc;
  rep.n_out_bar = (oc.n_out() - discard) * acc;
  rep.n_T_bar = nT;
}

}  // namespace

AnalysisReport analyze(const ProtocolSpec& spec, const AnalysisOptions& opt) {
  Model model(spec);
  model.validate_and_prepare(opt.order_cap);
  const OuterCode& oc = spec.outer;
  AnalysisReport rep;
  rep.n_out = oc.n_out();
  rep.warnings = model.warnings;
  rep.leading_order = model.leading_outer;
  rep.space_lo = oc.n_out();
  rep.space_hi = 4 * oc.n_out();
  if (opt.mode == AnalysisMode::LeadingOrder) {
    leading_eps(model, rep);
    fill_yield(model, rep);
  } else {
    for (const auto& r : spec.rounds)
      if (r.policy == Policy::PartialRestart) throw Refusal("exact mode does not model partial restart");
    if (oc.n_check() == 1 && spec.rounds[0].m == 0) {
      single_check_exact(model, rep);
      return rep;
    }
    std::vector<ExactCheckRates> ex;
    for (int r = 0; r < model.R(); ++r) {
      ex.push_back(exact_check_rates(*model.rd[r].code, spec.rounds[r].eps_check, spec.rounds[r].m));
      auto& mr = model.rd[r].rates;
      mr.p_repeat = ex[r].correctable;
      mr.p_succ = ex[r].trivial_even;
      mr.p_fail = ex[r].uncorrectable + ex[r].trivial - ex[r].trivial_even;
      mr.p = ex[r].pass_even;
    }
    fill_yield(model, rep);
    const double extra = resummed_eps(model, ex, rep);
    rep.eps_out *= rep.acceptance;
    rep.eps_out_uncorrected = rep.eps_out;
    for (auto& c : rep.contributions) c.probability *= rep.acceptance;
    rep.n_out_bar *= 1 + extra;
    rep.acceptance *= 1 + extra;
  }
  rep.eps_out_bar = rep.eps_out / rep.n_out_bar;
  return rep;
}

}  // namespace msd
