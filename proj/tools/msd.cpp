// Command-line front end: msd <subcommand> ...
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "msd/analysis.hpp"
#include "msd/cost.hpp"
#include "msd/inner.hpp"
#include "msd/montecarlo.hpp"
#include "msd/outer.hpp"
#include "msd/tanner.hpp"

using nlohmann::json;
using namespace msd;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kRefused = 3 };

struct Output {
  bool machine = false;
  void record(const json& j) const {
    if (machine) std::cout << j.dump() << "\n";
  }
  void human(const std::string& line) const {
    if (!machine) std::cout << line << "\n";
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string sci(double x) { return fmt("%.2e", x); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int threads_or_default(int t) { return t > 0 ? t : std::max(1u, std::thread::hardware_concurrency()); }

// --- inner ---------------------------------------------------------------

int cmd_inner(const Output& out, const std::vector<std::string>& names, bool basis, std::uint64_t seed) {
  int rc = kOk;
  for (const auto& name : names.empty() ? catalog_names() : names) {
    const InnerCode& c = catalog_code(name);
    json j{{"type", "inner"}, {"name", name}, {"n", c.n}, {"k", c.k}, {"d", c.d}, {"c_log", c_log(c, c.d)}, {"ok", true}};
    std::string line = "[[" + std::to_string(c.n) + "," + std::to_string(c.k) + "," + std::to_string(c.d) +
                       "]] c_log(" + std::to_string(c.d) + ")=" + std::to_string(c_log(c, c.d)) + " OK";
    if (basis) {
      const auto b = find_magic_basis(c, seed, 2000);
      const int sup = min_logical_support(c, b);
      j["basis_seed"] = seed;
      j["min_logical_support"] = sup;
      j["min_coset_weight_ok"] = b.min_coset_weight_ok;
      line += "  basis seed " + std::to_string(seed) + " min support " + std::to_string(sup);
      if (sup < 2) rc = kFail;
    }
    out.record(j);
    out.human(line);
  }
  return rc;
}

// --- outer ---------------------------------------------------------------

int cmd_outer_verify(const Output& out, const std::string& file, int d) {
  const OuterCode code = OuterCode::parse(read_file(file));
  const auto rep = verify_distance_sensitivity(code, d);
  json j{{"type", "outer_verify"},     {"file", file},
         {"n_out", code.n_out()},      {"n_check", code.n_check()},
         {"d", d},                     {"distance_ok", rep.distance_ok},
         {"sensitivity_ok", rep.sensitivity_ok}, {"n_lonely", rep.n_lonely},
         {"n_once", rep.n_once},       {"four_cycle_free", rep.four_cycle_free},
         {"girth", rep.girth}};
  if (rep.witness) j["witness"] = rep.witness->support();
  out.record(j);
  out.human("n_out " + std::to_string(code.n_out()) + ", checks " + std::to_string(code.n_check()) + ", girth " +
            std::to_string(rep.girth));
  out.human(std::string("distance >= ") + std::to_string(d) + ": " + (rep.distance_ok ? "yes" : "no"));
  out.human(std::string("sensitivity: ") + (rep.sensitivity_ok ? "yes" : "no"));
  out.human("lonely " + std::to_string(rep.n_lonely) + ", once " + std::to_string(rep.n_once));
  if (rep.witness) {
    std::string w;
    for (int q : rep.witness->support()) w += " " + std::to_string(q);
    out.human("witness:" + w);
  }
  return rep.distance_ok && rep.sensitivity_ok ? kOk : kFail;
}

// --- search --------------------------------------------------------------

int cmd_search(const Output& out, SearchConfig cfg, const std::string& save) {
  const auto res = run_search(cfg);
  json j{{"type", "search"},         {"k", cfg.k_inner},
         {"alpha", cfg.alpha},       {"seed", cfg.seed},
         {"success", res.success},   {"girth", res.girth},
         {"distance_certified", res.distance_certified}, {"added_checks", res.added_checks},
         {"iterations", res.iterations_used}};
  bool verified = false;
  if (res.success) {
    const auto v = verify_distance_sensitivity(res.code, 7);
    verified = v.distance_ok && v.sensitivity_ok && v.four_cycle_free;
  }
  j["verified"] = verified;
  out.record(j);
  out.human("k " + std::to_string(cfg.k_inner) + " alpha " + std::to_string(cfg.alpha) + " seed " +
            std::to_string(cfg.seed) + ": " + (res.success ? "success" : "no code") + ", girth " +
            std::to_string(res.girth) + ", distance " + std::to_string(res.distance_certified) + ", added checks " +
            std::to_string(res.added_checks) + (verified ? ", independently verified" : ""));
  if (!save.empty() && res.code.n_out() > 0) {
    std::ofstream f(save);
    f << res.code.str();
  }
  return res.success && verified ? kOk : kFail;
}

// --- analyze -------------------------------------------------------------

json report_json(const ProtocolSpec& spec, const AnalysisReport& r) {
  json j{{"type", "analysis"},         {"name", spec.name},         {"n_out", r.n_out},
         {"n_out_bar", r.n_out_bar},   {"n_T_bar", r.n_T_bar},      {"nT_per_out", r.nT_per_out()},
         {"eps_out", r.eps_out},       {"eps_out_bar", r.eps_out_bar}, {"acceptance", r.acceptance},
         {"leading_order", r.leading_order}, {"space", {r.space_lo, r.space_hi}}, {"warnings", r.warnings}};
  for (const auto& c : r.contributions)
    j["contributions"].push_back(
        {{"channel", c.channel}, {"round", c.round}, {"a", c.a}, {"b", c.b}, {"count", c.count}, {"probability", c.probability}});
  return j;
}

void print_report(const Output& out, const ProtocolSpec& spec, const AnalysisReport& r) {
  out.record(report_json(spec, r));
  out.human(spec.name.empty() ? "protocol" : spec.name);
  out.human("  n_out " + std::to_string(r.n_out) + "  n_out_bar " + fmt("%.1f", r.n_out_bar) + "  acceptance " +
            fmt("%.4f", r.acceptance));
  out.human("  eps_out " + sci(r.eps_out) + "  eps_out_bar " + sci(r.eps_out_bar));
  out.human("  n_T_bar " + fmt("%.0f", r.n_T_bar) + "  n_T/n_out " + fmt("%.1f", r.nT_per_out()));
  out.human("  space in [" + std::to_string(r.space_lo) + ", " + std::to_string(r.space_hi) + ")");
  for (const auto& c : r.contributions)
    out.human("    " + c.channel + (c.round >= 0 ? " (round " + std::to_string(c.round) + ")" : "") + ": " +
              sci(c.probability));
  for (const auto& w : r.warnings) out.human("  warning: " + w);
}

int cmd_analyze(const Output& out, const std::string& file, bool exact, int cap) {
  const auto spec = load_protocol(file);
  const auto r = analyze(spec, {exact ? AnalysisMode::Exact : AnalysisMode::LeadingOrder, cap});
  print_report(out, spec, r);
  return kOk;
}

// --- simulate / compare --------------------------------------------------

json summary_json(const TrialSummary& t) {
  return {{"type", "trials"},        {"trials", t.trials},         {"accepted", t.accepted},
          {"output_states", t.output_states}, {"output_errors", t.output_errors}, {"t_gates", t.t_gates},
          {"seed", t.rng_seed},      {"n_out_bar", t.n_out_bar()}, {"eps_out", t.eps_out()}};
}

int cmd_simulate(const Output& out, const std::string& file, std::uint64_t trials, std::uint64_t seed, int threads) {
  const auto spec = load_protocol(file);
  const auto t = simulate_protocol(spec, trials, seed, threads);
  out.record(summary_json(t));
  out.human("trials " + std::to_string(t.trials) + "  accepted " + std::to_string(t.accepted) + "  outputs " +
            std::to_string(t.output_states) + "  erroneous trials " + std::to_string(t.output_errors));
  out.human("  n_out_bar " + fmt("%.4f", t.n_out_bar()) + "  eps_out " + sci(t.eps_out()) + "  T per trial " +
            fmt("%.1f", t.t_gates / static_cast<double>(t.trials)) + "  seed " + std::to_string(seed));
  return kOk;
}

int cmd_compare(const Output& out, const std::string& file, std::uint64_t trials, std::uint64_t seed, int threads,
                double sigmas) {
  const auto spec = load_protocol(file);
  const auto rep = compare(spec, trials, seed, threads, sigmas);
  out.record(summary_json(rep.summary));
  for (const auto& r : rep.rows) {
    out.record({{"type", "compare"}, {"quantity", r.quantity}, {"empirical", r.empirical}, {"analytic", r.analytic},
                {"stderr", r.stderr_}, {"sigmas", r.sigmas}, {"agree", r.agree}});
    out.human(r.quantity + ": empirical " + fmt("%.6g", r.empirical) + "  analytic " +
              fmt("%.6g", r.analytic) + "  +/- " + fmt("%.2g", r.stderr_) + "  (" + fmt("%.2f", r.sigmas) + " sigma) " +
              (r.agree ? "ok" : "DISAGREE"));
  }
  return rep.agree() ? kOk : kFail;
}

// --- cost ----------------------------------------------------------------

bool cost_rows(const Output& out, double tol_err, double tol_err_outlier, double tol_t) {
  bool all = true;
  out.human("chain          marginal (ref)          T/out (ref)     space (ref)");
  for (const auto& row : reference_cost_table()) {
    const auto c = chain_cost(Chain::parse(row.name));
    const double ratio = c.marginal_error / row.marginal_error;
    const double tol = row.name == "22-46-54-54" ? tol_err_outlier : tol_err;
    const bool ok_e = std::max(ratio, 1 / ratio) <= tol;
    const bool ok_t = std::abs(c.t_per_output - row.t_per_output) / row.t_per_output <= tol_t;
    const bool ok_s = std::abs(c.space - row.space) / row.space <= 0.05;
    const bool ok = ok_e && ok_t && ok_s;
    all = all && ok;
    out.record({{"type", "cost"}, {"chain", row.name}, {"marginal_error", c.marginal_error},
                {"ref_marginal_error", row.marginal_error}, {"t_per_output", c.t_per_output},
                {"ref_t_per_output", row.t_per_output}, {"space", c.space}, {"ref_space", row.space},
                {"n_out", c.n_out}, {"pass", ok}});
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s%-12s %.2e (%.1e) %s  %6.1f (%3.0f) %s  %.2e (%.1e) %s", row.mek_bk_only ? "*" : " ",
                  row.name.c_str(), c.marginal_error, row.marginal_error, ok_e ? "ok" : "FAIL", c.t_per_output,
                  row.t_per_output, ok_t ? "ok" : "FAIL", c.space, row.space, ok_s ? "ok" : "FAIL");
    out.human(buf);
  }
  return all;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, sep))
    if (!t.empty()) v.push_back(t);
  return v;
}

int cmd_best_chain(const Output& out, double target, const std::string& menu, double eps0, int max_len) {
  const auto chain = best_chain(target, stage_menu(split(menu, ',')), eps0, max_len);
  const auto c = chain_cost(chain);
  out.record({{"type", "best_chain"}, {"target", target}, {"chain", chain.str()}, {"marginal_error", c.marginal_error},
              {"t_per_output", c.t_per_output}, {"space", c.space}});
  out.human(chain.str() + "  marginal " + sci(c.marginal_error) + "  T/out " + fmt("%.1f", c.t_per_output) +
            "  space " + sci(c.space));
  return kOk;
}

// --- tables --------------------------------------------------------------

struct Tolerances {
  double eps_bar = 0.25, n_out = 0.10, nT = 0.15;
  double cost_err = 1.05, cost_err_outlier = 1.3, cost_t = 0.05;
};

bool table_one(const Output& out) {
  struct Row {
    std::vector<int> d;
    int expect;
  };
  const std::vector<Row> rows = {{{2}, 2}, {{2, 4}, 4}, {{3, 5, 7}, 7}, {{3, 5, 7, 9}, 9}, {{3, 5, 6}, 6}};
  bool all = true;
  out.human("Table I: grid order");
  for (const auto& r : rows) {
    const int got = grid_order(r.d);
    const bool ok = got == r.expect;
    all = all && ok;
    std::string ds;
    for (int x : r.d) ds += (ds.empty() ? "" : ",") + std::to_string(x);
    out.record({{"type", "table1"}, {"d", r.d}, {"order", got}, {"ref", r.expect}, {"pass", ok}});
    out.human("  D=" + std::to_string(r.d.size()) + " d=(" + ds + "): " + std::to_string(got) + " (" +
              std::to_string(r.expect) + ") " + (ok ? "ok" : "FAIL"));
  }
  return all;
}

bool table_two(const Output& out) {
  struct Row {
    std::string name;
    int n, k, d;
    std::uint64_t clog;
  };
  const std::vector<Row> rows = {{"31-21-3", 31, 21, 3, 155}, {"31-11-5", 31, 11, 5, 186}, {"63-45-4", 63, 45, 4, 1260},
                                 {"63-39-5", 63, 39, 5, 1890}, {"63-27-7", 63, 27, 7, 3411}};
  bool all = true;
  out.human("Table II: inner codes");
  for (const auto& r : rows) {
    const auto& c = catalog_code(r.name);
    const bool ok = c.n == r.n && c.k == r.k && c.d == r.d && c_log(c, c.d) == r.clog;
    all = all && ok;
    out.record({{"type", "table2"}, {"name", r.name}, {"n", c.n}, {"k", c.k}, {"d", c.d}, {"c_log", c_log(c, c.d)},
                {"ref_c_log", r.clog}, {"pass", ok}});
    out.human("  [[" + std::to_string(c.n) + "," + std::to_string(c.k) + "," + std::to_string(c.d) + "]] c_log " +
              std::to_string(c_log(c, c.d)) + " (" + std::to_string(r.clog) + ") " + (ok ? "ok" : "FAIL"));
  }
  return all;
}

bool table_three(const Output& out, const Tolerances& tol) {
  bool all = true;
  out.human("Table III: protocols (n_out_bar, eps_out_bar, n_T/n_out_bar; reference in parentheses)");
  for (int row = 1; row <= 9; ++row) {
    const auto spec = load_protocol(std::string(MSD_DATA_DIR) + "/specs/row" + std::to_string(row) + ".cfg");
    const auto r = analyze(spec);
    const auto& e = spec.expected;
    auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
    const bool ok_n = rel(r.n_out_bar, *e.n_out_bar) <= tol.n_out;
    const bool ok_e = rel(r.eps_out_bar, *e.eps_out_bar) <= tol.eps_bar;
    const bool ok_t = rel(r.nT_per_out(), *e.nT_per_out) <= tol.nT;
    const bool ok = ok_n && ok_e && ok_t;
    all = all && ok;
    out.record({{"type", "table3"}, {"row", row}, {"name", spec.name}, {"n_out_bar", r.n_out_bar},
                {"ref_n_out_bar", *e.n_out_bar}, {"eps_out_bar", r.eps_out_bar}, {"ref_eps_out_bar", *e.eps_out_bar},
                {"nT_per_out", r.nT_per_out()}, {"ref_nT_per_out", *e.nT_per_out}, {"pass", ok}});
    char buf[240];
    std::snprintf(buf, sizeof buf, "  %d %-62s %7.1f (%4.0f) %s  %.2e (%.1e) %s  %5.1f (%4.1f) %s", row,
                  spec.name.c_str(), r.n_out_bar, *e.n_out_bar, ok_n ? "ok" : "FAIL", r.eps_out_bar, *e.eps_out_bar,
                  ok_e ? "ok" : "FAIL", r.nT_per_out(), *e.nT_per_out, ok_t ? "ok" : "FAIL");
    out.human(buf);
  }
  return all;
}

int cmd_tables(const Output& out, const std::string& which, const Tolerances& tol) {
  bool all = true;
  for (const auto& w : split(which, ',')) {
    if (w == "I")
      all = table_one(out) && all;
    else if (w == "II")
      all = table_two(out) && all;
    else if (w == "III")
      all = table_three(out, tol) && all;
    else if (w == "IV") {
      out.human("Table IV: concatenated chains (* = MEK and BK only)");
      all = cost_rows(out, tol.cost_err, tol.cost_err_outlier, tol.cost_t) && all;
    } else
      throw CLI::ValidationError("--which", "unknown table " + w);
  }
  out.human(all ? "all cells pass" : "some cells FAIL");
  return all ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magic state distillation with inner and outer codes"};
  app.require_subcommand(1);
  std::string format = "human";
  std::uint64_t seed = 1;
  int threads = 0;
  app.add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  std::vector<std::string> inner_names;
  bool inner_basis = false;
  auto* inner = app.add_subcommand("inner", "inner code parameters checked against the catalog");
  inner->add_option("name", inner_names, "catalog names (default: all)");
  inner->add_flag("--basis", inner_basis, "also search a magic basis");

  auto* outer = app.add_subcommand("outer", "outer code tools");
  outer->require_subcommand(1);
  std::string outer_file;
  int outer_d = 4;
  auto* verify = outer->add_subcommand("verify", "distance and sensitivity check");
  verify->add_option("file", outer_file)->required()->check(CLI::ExistingFile);
  verify->add_option("--d", outer_d, "target distance")->required();

  SearchConfig scfg;
  std::string search_out;
  auto* search = app.add_subcommand("search", "randomized Tanner graph search");
  search->add_option("--k", scfg.k_inner)->required();
  search->add_option("--alpha", scfg.alpha)->required();
  search->add_option("--budget", scfg.swap_budget, "swap budget");
  search->add_option("--anneal", scfg.anneal_steps, "annealing steps");
  int added = 0;
  search->add_option("--added", added, "allow up to N added checks");
  search->add_option("--out", search_out, "write the code here");

  std::string spec_file;
  bool exact = false;
  int order_cap = 0;
  auto* an = app.add_subcommand("analyze", "analytic estimates for a protocol file");
  an->add_option("spec", spec_file)->required()->check(CLI::ExistingFile);
  an->add_flag("--exact", exact, "exact per-check rates");
  an->add_option("--order-cap", order_cap, "outer pattern order cap");

  std::uint64_t trials = 100000;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo trials");
  sim->add_option("spec", spec_file)->required()->check(CLI::ExistingFile);
  sim->add_option("--trials", trials);

  double sigmas = 3.0;
  auto* cmp = app.add_subcommand("compare", "Monte Carlo against analysis");
  cmp->add_option("spec", spec_file)->required()->check(CLI::ExistingFile);
  cmp->add_option("--trials", trials);
  cmp->add_option("--sigmas", sigmas, "disagreement threshold");

  Tolerances tol;
  auto* cost = app.add_subcommand("cost-table", "concatenated chain costs");

  double target = 1e-13, eps0 = 1e-3;
  std::string menu = "bh,mek,bk";
  int max_len = 4;
  auto* best = app.add_subcommand("best-chain", "cheapest chain reaching a target error");
  best->add_option("--target", target)->required();
  best->add_option("--menu", menu, "comma list of bh, mek, bk");
  best->add_option("--eps0", eps0);
  best->add_option("--max-len", max_len);

  std::string which = "I,II,III,IV";
  auto* tables = app.add_subcommand("tables", "regenerate the reference tables with pass/fail per cell");
  tables->add_option("--which", which, "comma list of I, II, III, IV");
  tables->add_option("--tol-eps", tol.eps_bar, "relative tolerance on eps_out_bar");
  tables->add_option("--tol-nout", tol.n_out, "relative tolerance on n_out_bar");
  tables->add_option("--tol-nt", tol.nT, "relative tolerance on n_T/n_out_bar");
  tables->add_option("--tol-cost-err", tol.cost_err, "factor tolerance on chain errors");
  tables->add_option("--tol-cost-t", tol.cost_t, "relative tolerance on chain T counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Output out;
  out.machine = format == "machine";
  const bool randomized = search->parsed() || sim->parsed() || cmp->parsed() || (inner->parsed() && inner_basis);
  if (out.machine && randomized && seed_opt->count() == 0) {
    std::cerr << "machine output needs an explicit --seed\n";
    return kUsage;
  }
  scfg.seed = seed;
  scfg.allow_added_checks = added > 0;
  scfg.max_added_checks = added;
  const int nthreads = threads_or_default(threads);

  try {
    if (inner->parsed()) return cmd_inner(out, inner_names, inner_basis, seed);
    if (verify->parsed()) return cmd_outer_verify(out, outer_file, outer_d);
    if (search->parsed()) return cmd_search(out, scfg, search_out);
    if (an->parsed()) return cmd_analyze(out, spec_file, exact, order_cap);
    if (sim->parsed()) return cmd_simulate(out, spec_file, trials, seed, nthreads);
    if (cmp->parsed()) return cmd_compare(out, spec_file, trials, seed, nthreads, sigmas);
    if (cost->parsed()) return cost_rows(out, tol.cost_err, tol.cost_err_outlier, tol.cost_t) ? kOk : kFail;
    if (best->parsed()) return cmd_best_chain(out, target, menu, eps0, max_len);
    if (tables->parsed()) return cmd_tables(out, which, tol);
  } catch (const Refusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const NoChain& e) {
    std::cerr << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
