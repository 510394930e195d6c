#include "msd/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <thread>

namespace msd {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : s_(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream * 0xd1b54a32d192ed03ULL + 1)) {}

CounterRng::result_type CounterRng::operator()() {
  s_ += 0x9e3779b97f4a7c15ULL;
  return mix(s_);
}

CheckModel::CheckModel(const InnerCode& code, const MagicBasis& basis, int m) : code_(&code), table_(code, m) {
  if (code.n > 63) throw std::invalid_argument("check model needs n <= 63");
  for (const auto& l : basis.vectors) ell_.push_back(l.to_word());
}

CheckModel::Result CheckModel::run(std::uint64_t e1, std::uint64_t e2) const {
  Result r;
  std::uint64_t v = e1 ^ e2;
  const auto syn = table_.syndrome(v);
  r.flip = std::popcount(e2) & 1;
  if (syn != 0) {
    r.nontrivial = true;
    auto fix = table_.lookup(syn);
    if (!fix) {
      r.failed = true;
      return r;
    }
    v ^= *fix;
    r.corrected = true;
  }
  for (std::size_t j = 0; j < ell_.size(); ++j) r.action |= static_cast<std::uint64_t>(std::popcount(v & ell_[j]) & 1) << j;
  return r;
}

CheckOutcome simulate_check(const InnerCode& inner, const MagicBasis& basis, const BitVector& e1, const BitVector& e2,
                            bool input_parity, int m) {
  if (static_cast<int>(e1.size()) != inner.n || static_cast<int>(e2.size()) != inner.n)
    throw std::invalid_argument("error vectors must have length n_inner");
  static std::mutex mu;
  static std::map<std::tuple<std::string, const MagicBasis*, int>, std::unique_ptr<CheckModel>> cache;
  const CheckModel* model;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{inner.name + "/" + std::to_string(inner.n), &basis, m}];
    if (!slot) slot = std::make_unique<CheckModel>(inner, basis, m);
    model = slot.get();
  }
  const auto r = model->run(e1.to_word(), e2.to_word());
  CheckOutcome out;
  out.inner_syndrome_nontrivial = r.nontrivial;
  out.corrected = r.corrected;
  out.measured_parity_flip = (input_parity ^ r.flip) && !r.failed;
  out.logical_action_applied = BitVector::from_word(r.action, static_cast<std::size_t>(inner.k));
  return out;
}

TrialSummary& TrialSummary::operator+=(const TrialSummary& o) {
  trials += o.trials;
  accepted += o.accepted;
  output_states += o.output_states;
  output_errors += o.output_errors;
  t_gates += o.t_gates;
  return *this;
}

namespace {

// Bernoulli(p) over `len` positions by geometric skips.
struct BitSampler {
  double p;
  std::geometric_distribution<int> geo;
  explicit BitSampler(double p) : p(p), geo(p > 0 ? std::min(p, 1.0 - 1e-12) : 0.5) {}
  template <class F>
  void sample(CounterRng& rng, int len, F&& hit) {
    if (p <= 0) return;
    for (int pos = geo(rng); pos < len; pos += 1 + geo(rng)) hit(pos);
  }
  std::uint64_t word(CounterRng& rng, int len) {
    std::uint64_t w = 0;
    sample(rng, len, [&](int i) { w |= std::uint64_t{1} << i; });
    return w;
  }
};

struct RoundSim {
  std::unique_ptr<CheckModel> model;
  BitSampler sampler;
  double t_per_attempt;
  Policy policy;
};

struct ProtocolSim {
  const ProtocolSpec& spec;
  std::vector<RoundSim> rounds;
  std::vector<char> weak;  // per (check, slot) flattened: no later singleton partner (or <= 1 when conservative)
  std::vector<int> weak_offset;
  double t_input;

  explicit ProtocolSim(const ProtocolSpec& s) : spec(s) {
    const OuterCode& oc = s.outer;
    if (static_cast<int>(s.rounds.size()) != oc.num_rounds()) throw Refusal("round count mismatch");
    for (const auto& r : s.rounds) {
      const auto& code = catalog_code(r.inner);
      const auto& basis = analysis_basis(r.inner, s.basis_seed);
      rounds.push_back({std::make_unique<CheckModel>(code, basis, r.m), BitSampler(r.eps_check),
                        2.0 * code.n * source_multiplier(r.source), r.policy});
    }
    for (int c = 0; c < oc.n_check(); ++c)
      if (static_cast<int>(oc.checks()[c].size()) != rounds[oc.round_of(c)].model->code().k)
        throw Refusal("check size differs from inner k");
    auto info = schedule_info(oc);
    const std::size_t thr = s.conservative ? 1 : 0;
    for (int c = 0; c < oc.n_check(); ++c) {
      weak_offset.push_back(static_cast<int>(weak.size()));
      for (const auto& partners : info.later_singletons[c]) weak.push_back(partners.size() <= thr);
    }
    t_input = source_multiplier(s.input_source);
  }

  // One trial; a terminated trial adds nothing but its count and T gates.
  void trial(CounterRng& rng, std::vector<char>& err, std::vector<char>& low, TrialSummary& out) {
    const OuterCode& oc = spec.outer;
    const int n = oc.n_out();
    BitSampler in_sampler(spec.eps_input);
    std::fill(err.begin(), err.end(), 0);
    std::fill(low.begin(), low.end(), 0);
    in_sampler.sample(rng, n, [&](int q) { err[q] = 1; });
    out.t_gates += n * t_input;
    ++out.trials;
    for (int r = 0; r < oc.num_rounds(); ++r) {
      RoundSim& rs = rounds[r];
      const int ni = rs.model->code().n;
      for (int c : oc.schedule()[r]) {
        const auto& qs = oc.checks()[c];
        bool corrected = false;
        while (true) {
          out.t_gates += rs.t_per_attempt;
          const std::uint64_t e1 = rs.sampler.word(rng, ni), e2 = rs.sampler.word(rng, ni);
          int parity = 0;
          for (int q : qs) parity ^= err[q];
          const auto res = rs.model->run(e1, e2);
          if (!res.failed) {
            for (std::size_t j = 0; j < qs.size(); ++j)
              if ((res.action >> j) & 1) err[qs[j]] ^= 1;
            if (res.corrected) {
              corrected = true;
              continue;
            }
            if ((parity ^ static_cast<int>(res.flip)) == 0) break;
          }
          if (rs.policy != Policy::PartialRestart) return;
          corrected = false;
          for (int q : qs) err[q] = 0;
          in_sampler.sample(rng, static_cast<int>(qs.size()), [&](int j) { err[qs[j]] = 1; });
          out.t_gates += static_cast<double>(qs.size()) * t_input;
        }
        if (corrected)
          for (std::size_t j = 0; j < qs.size(); ++j)
            if (weak[weak_offset[c] + j]) low[qs[j]] = 1;
      }
    }
    ++out.accepted;
    bool bad = false;
    for (int q = 0; q < n; ++q)
      if (!low[q]) {
        ++out.output_states;
        bad = bad || err[q];
      }
    out.output_errors += bad;
  }
};

}  // namespace

TrialSummary simulate_range(const ProtocolSpec& spec, std::uint64_t first, std::uint64_t count, std::uint64_t seed) {
  ProtocolSim sim(spec);
  TrialSummary out;
  out.rng_seed = seed;
  std::vector<char> err(static_cast<std::size_t>(spec.outer.n_out())), low(err.size());
  for (std::uint64_t t = first; t < first + count; ++t) {
    CounterRng rng(seed, t);
    sim.trial(rng, err, low, out);
  }
  return out;
}

TrialSummary simulate_protocol(const ProtocolSpec& spec, std::uint64_t trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::uint64_t>(trials, 256))));
  for (const auto& r : spec.rounds) analysis_basis(r.inner, spec.basis_seed);
  std::vector<TrialSummary> parts(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  const std::uint64_t chunk = trials / threads, extra = trials % threads;
  std::uint64_t start = 0;
  for (int i = 0; i < threads; ++i) {
    const std::uint64_t cnt = chunk + (static_cast<std::uint64_t>(i) < extra ? 1 : 0);
    pool.emplace_back([&, i, start, cnt] { parts[i] = simulate_range(spec, start, cnt, seed); });
    start += cnt;
  }
  for (auto& t : pool) t.join();
  TrialSummary total;
  total.rng_seed = seed;
  for (const auto& p : parts) total += p;
  return total;
}

bool CompareReport::agree() const {
  return std::all_of(rows.begin(), rows.end(), [](const CompareRow& r) { return r.agree; });
}

CompareReport compare(const ProtocolSpec& spec, std::uint64_t trials, std::uint64_t seed, int threads,
                      double max_sigmas) {
  return compare(spec, spec, trials, seed, threads, max_sigmas);
}

CompareReport compare(const ProtocolSpec& simulated, const ProtocolSpec& analysed, std::uint64_t trials,
                      std::uint64_t seed, int threads, double max_sigmas) {
  const ProtocolSpec& spec = simulated;
  CompareReport rep;
  try {
    rep.analysis = analyze(analysed, {AnalysisMode::Exact, 0});
  } catch (const Refusal&) {
    rep.analysis = analyze(analysed);
  }
  rep.summary = simulate_protocol(spec, trials, seed, threads);
  const double N = static_cast<double>(trials);
  // Binomial standard error at the larger of the two estimates, floored at one event.
  auto row = [&](const std::string& name, double emp, double ana, double scale) {
    CompareRow r;
    r.quantity = name;
    r.empirical = emp;
    r.analytic = ana;
    const double p = std::clamp(std::max({emp / scale, ana / scale, 1.0 / N}), 0.0, 1.0);
    r.stderr_ = scale * std::sqrt(std::max(p * (1 - p), 1.0 / N) / N);
    r.sigmas = std::abs(emp - ana) / r.stderr_;
    r.agree = r.sigmas <= max_sigmas;
    rep.rows.push_back(r);
  };
  row("acceptance", rep.summary.acceptance(), rep.analysis.acceptance, 1.0);
  row("n_out_bar", rep.summary.n_out_bar(), rep.analysis.n_out_bar, spec.outer.n_out());
  row("eps_out", rep.summary.eps_out(), rep.analysis.eps_out, 1.0);
  return rep;
}

}  // namespace msd
