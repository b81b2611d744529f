// SPDX-License-Identifier: Apache-2.0
#include "symcap/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "symcap/degeneracy.hpp"
#include "symcap/optimizer.hpp"
#include "symcap/oracle.hpp"
#include "symcap/parallel.hpp"
#include "symcap/serialization.hpp"

namespace symcap {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string channel;
  std::optional<double> p;
  std::optional<int> n;
  std::string n_range;
  double delta = 0.05;
  std::optional<std::uint64_t> seed;
  int restarts = 20;
  int iters = 2000;
  std::string out;
  std::string csv;
  std::string cache;
  std::string precision = "double";
  std::string state;
  std::string warm;
  std::optional<double> p_lo;
  std::optional<double> p_hi;
  int cases = 200;
  std::string method = "lbfgs";
  std::string gradient = "analytic";
  bool no_timing = false;
};

struct Context {
  Options opt;
  std::ostream& out;
  std::ostream& err;
  std::uint64_t seed = 0;
  int threads = 1;
};

FamilyKind family_of(const Options& o) {
  if (o.channel.empty()) throw ConfigError("--channel is required");
  const auto f = parse_family(o.channel);
  if (!f) throw ConfigError("unknown channel '" + o.channel + "' (dep, xz, 2pauli)");
  return *f;
}

double require_p(const Options& o) {
  if (!o.p) throw ConfigError("--p is required");
  return *o.p;
}

int require_n(const Options& o) {
  if (!o.n) throw ConfigError("--n is required");
  if (*o.n < 1) throw ConfigError("--n must be at least 1");
  return *o.n;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto sep = text.find_first_of(":-");
  try {
    if (sep == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    const int a = std::stoi(text.substr(0, sep));
    const int b = std::stoi(text.substr(sep + 1));
    if (a < 1 || b < a) throw ConfigError("--n-range must be non-empty with n >= 1");
    return {a, b};
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError("cannot parse --n-range '" + text + "' (use a:b)");
  }
}

std::pair<double, double> bracket_of(const Options& o, FamilyKind f) {
  const std::pair<double, double> def = f == FamilyKind::depolarizing ? std::pair{0.05, 0.08} : std::pair{0.09, 0.14};
  return {o.p_lo.value_or(def.first), o.p_hi.value_or(def.second)};
}

OptimizerConfig optimizer_config(const Context& ctx) {
  OptimizerConfig c;
  c.restarts = ctx.opt.restarts;
  c.max_iterations = ctx.opt.iters;
  c.seed = ctx.seed;
  c.threads = ctx.threads;
  c.method = ctx.opt.method == "ascent" ? OptimizerMethod::ascent : OptimizerMethod::lbfgs;
  c.gradient = ctx.opt.gradient == "central"      ? GradientMode::central
               : ctx.opt.gradient == "five-point" ? GradientMode::five_point
                                                  : GradientMode::analytic;
  c.validate();
  return c;
}

Json optimizer_json(const OptimizerConfig& c) {
  Json j;
  j["restarts"] = c.restarts;
  j["max_iterations"] = c.max_iterations;
  j["method"] = c.method == OptimizerMethod::lbfgs ? "lbfgs" : "ascent";
  j["gradient"] = c.gradient == GradientMode::analytic ? "analytic"
                  : c.gradient == GradientMode::central ? "central"
                                                        : "five-point";
  j["bisection_restarts"] = c.bisection_restarts;
  j["perturbations"] = c.perturbations;
  j["hop_rounds"] = c.hop_rounds;
  return j;
}

void emit(const Context& ctx, const Json& j) {
  if (!ctx.opt.out.empty()) write_file_atomic(ctx.opt.out, j.dump(2) + "\n");
}

// Accepts a bare state, an optimize result ({input}) or a threshold record ({best_input}).
SymmetricInput load_state(const std::string& file) {
  const Json j = parse_json_file(file);
  if (j.is_object() && j.contains("input")) return input_from_json(j["input"], "/input");
  if (j.is_object() && j.contains("best_input")) return input_from_json(j["best_input"], "/best_input");
  return input_from_json(j, "");
}

Precomputation build_pre(const Context& ctx, const PauliChannel& ch, int n) {
  PrecomputeOptions po;
  po.threads = ctx.threads;
  return precompute<double>(ch, n, choose_spanning_states(n, ctx.seed), po);
}

// Cache when given, else (channel, p) at size n.
Precomputation obtain_pre(const Context& ctx, std::optional<int> n) {
  if (!ctx.opt.cache.empty()) {
    LoadedCache lc = load_precomputation(ctx.opt.cache);
    if (n && *n != lc.pre.n) {
      throw SchemaError(ctx.opt.cache, "cache has n=" + std::to_string(lc.pre.n) + ", state has n=" + std::to_string(*n));
    }
    if (!ctx.opt.channel.empty() && lc.meta.value("family", "") != std::string(family_name(family_of(ctx.opt)))) {
      throw SchemaError(ctx.opt.cache, "cache was built for a different channel family");
    }
    if (ctx.opt.p && lc.meta.value("p", -1.0) != *ctx.opt.p) {
      throw SchemaError(ctx.opt.cache, "cache was built for a different p");
    }
    ctx.err << "using cache " << ctx.opt.cache << "\n";
    return std::move(lc.pre);
  }
  const FamilyKind f = family_of(ctx.opt);
  const PauliChannel ch = ChannelFamily{f, require_p(ctx.opt)}.channel();
  return build_pre(ctx, ch, n ? *n : require_n(ctx.opt));
}

std::string lambda_text(const Partition& l) { return "[" + std::to_string(l[0]) + "," + std::to_string(l[1]) + "]"; }

int cmd_precompute(Context& ctx) {
  const FamilyKind f = family_of(ctx.opt);
  const double p = require_p(ctx.opt);
  const int n = require_n(ctx.opt);
  if (ctx.opt.cache.empty()) throw ConfigError("--cache is required");
  const PauliChannel ch = ChannelFamily{f, p}.channel();
  Json cfg{{"command", "precompute"}, {"family", family_name(f)}, {"p", p}, {"n", n}, {"seed", ctx.seed}};
  const std::string hash = config_hash(cfg);
  if (auto meta = peek_cache_meta(ctx.opt.cache)) {
    if (meta->contains("provenance") && (*meta)["provenance"].value("config_hash", "") == hash) {
      ctx.err << "cache hit: " << ctx.opt.cache << "\n";
      ctx.out << "cache " << ctx.opt.cache << " hit " << hash << "\n";
      return kExitOk;
    }
  }
  const Precomputation pre = build_pre(ctx, ch, n);
  Json meta;
  meta["provenance"] = provenance(ctx.seed, hash);
  meta["family"] = family_name(f);
  meta["p"] = p;
  save_precomputation(ctx.opt.cache, pre, meta);
  ctx.out << "cache " << ctx.opt.cache << " written " << hash << "\n";
  return kExitOk;
}

int cmd_ci(Context& ctx) {
  if (ctx.opt.state.empty()) throw ConfigError("--state is required");
  const SymmetricInput input = load_state(ctx.opt.state);
  const Precomputation pre = obtain_pre(ctx, input.n);
  const bool extended = ctx.opt.precision == "extended";
  CiReport rep;
  if (extended) {
    PrecomputeOptions po;
    po.threads = ctx.threads;
    rep = evaluate_ci_report<long double>(input, precompute<long double>(pre.channel, pre.n, pre.basis, po));
  } else {
    rep = evaluate_ci_report<double>(input, pre);
  }
  const double rate = rep.total / input.n;
  ctx.out << "ci_total " << format_real(rep.total) << "\n";
  ctx.out << "ci_rate " << format_real(rate) << "\n";
  ctx.out << "lambda c S(sigma) S(omega)\n";
  Json blocks = Json::array();
  for (const auto& b : rep.blocks) {
    if (b.skipped) {
      ctx.out << lambda_text(b.lambda) << " " << format_real(b.c) << " skipped\n";
    } else {
      ctx.out << lambda_text(b.lambda) << " " << format_real(b.c) << " " << format_real(b.s_sigma) << " "
              << format_real(b.s_omega) << "\n";
    }
    blocks.push_back({{"lambda", {b.lambda[0], b.lambda[1]}},
                      {"c", b.c},
                      {"s_sigma", b.s_sigma},
                      {"s_omega", b.s_omega},
                      {"skipped", b.skipped}});
  }
  Json cfg{{"command", "ci"},    {"channel", to_json(pre.channel)}, {"n", input.n},
           {"seed", ctx.seed},   {"precision", ctx.opt.precision},   {"state", to_json(input)}};
  Json j;
  j["provenance"] = provenance(ctx.seed, config_hash(cfg));
  j["channel"] = to_json(pre.channel);
  j["n"] = input.n;
  j["precision"] = ctx.opt.precision;
  j["ci_total"] = rep.total;
  j["ci_rate"] = rate;
  j["blocks"] = std::move(blocks);
  emit(ctx, j);
  return kExitOk;
}

int cmd_optimize(Context& ctx) {
  std::optional<SymmetricInput> warm;
  if (!ctx.opt.warm.empty()) warm = load_state(ctx.opt.warm);
  std::optional<int> n = ctx.opt.n;
  if (warm) {
    if (n && *n != warm->n) throw ConfigError("--warm state has a different n");
    n = warm->n;
  }
  const Precomputation pre = obtain_pre(ctx, n);
  const OptimizerConfig oc = optimizer_config(ctx);
  const MaximizeResult r = maximize_ci(pre, oc, warm);
  ctx.out << "ci " << format_real(r.ci) << "\n";
  ctx.out << "ci_rate " << format_real(r.ci / pre.n) << "\n";
  ctx.out << "best_restart " << r.best_restart << "\n";
  Json cfg{{"command", "optimize"}, {"channel", to_json(pre.channel)}, {"n", pre.n}, {"seed", ctx.seed},
           {"optimizer", optimizer_json(oc)}};
  if (warm) cfg["warm"] = to_json(*warm);
  Json j;
  j["provenance"] = provenance(ctx.seed, config_hash(cfg));
  j["channel"] = to_json(pre.channel);
  j["n"] = pre.n;
  j["ci"] = r.ci;
  j["best_restart"] = r.best_restart;
  j["converged"] = r.converged;
  j["input"] = to_json(r.best);
  emit(ctx, j);
  return kExitOk;
}

ProgressFn progress_to(std::ostream& err) {
  return [&err](const std::string& line) { err << line << "\n" << std::flush; };
}

int cmd_threshold(Context& ctx) {
  const FamilyKind f = family_of(ctx.opt);
  const int n = require_n(ctx.opt);
  const auto [lo, hi] = bracket_of(ctx.opt, f);
  std::optional<SymmetricInput> warm;
  if (!ctx.opt.warm.empty()) warm = load_state(ctx.opt.warm);
  const OptimizerConfig oc = optimizer_config(ctx);
  ThresholdRecord rec = threshold_search(f, n, oc, lo, hi, warm, progress_to(ctx.err));
  if (ctx.opt.no_timing) rec.wall_time_s = 0.0;
  ctx.out << "p_star " << format_real(rec.p_star) << "\n";
  ctx.out << "p_upper " << format_real(rec.p_upper) << "\n";
  ctx.out << "ci_lo " << format_real(rec.ci_lo) << "\n";
  ctx.out << "ci_hi " << format_real(rec.ci_hi) << "\n";
  Json cfg{{"command", "threshold"}, {"family", family_name(f)}, {"n", n},       {"p_lo", lo},
           {"p_hi", hi},             {"seed", ctx.seed},         {"optimizer", optimizer_json(oc)}};
  if (warm) cfg["warm"] = to_json(*warm);
  Json j = to_json(rec);
  j["provenance"] = provenance(ctx.seed, config_hash(cfg));
  emit(ctx, j);
  return kExitOk;
}

int cmd_sweep(Context& ctx) {
  const FamilyKind f = family_of(ctx.opt);
  if (ctx.opt.n_range.empty()) throw ConfigError("--n-range is required");
  if (ctx.opt.out.empty()) throw ConfigError("--out is required");
  const auto [n_lo, n_hi] = parse_range(ctx.opt.n_range);
  const auto [lo, hi] = bracket_of(ctx.opt, f);
  const OptimizerConfig oc = optimizer_config(ctx);
  // The n range is not hashed so a sweep can be extended in place.
  Json cfg{{"command", "sweep"}, {"family", family_name(f)}, {"p_lo", lo}, {"p_hi", hi},
           {"seed", ctx.seed},   {"optimizer", optimizer_json(oc)}};
  const std::string hash = config_hash(cfg);

  SweepFile file;
  file.provenance = provenance(ctx.seed, hash);
  if (fs::exists(ctx.opt.out)) {
    std::ifstream in(ctx.opt.out, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    SweepFile old = parse_sweep_file(ss.str(), ctx.opt.out);
    if (old.provenance.value("config_hash", "") != hash) {
      throw SchemaError(ctx.opt.out, "existing sweep was written with a different configuration");
    }
    file.rows = std::move(old.rows);
  }
  bool failed = false;
  for (int n = n_lo; n <= n_hi; ++n) {
    const bool done = std::any_of(file.rows.begin(), file.rows.end(), [&](const SweepRow& r) {
      return r.family == f && r.n == n && r.seed == ctx.seed;
    });
    if (done) {
      ctx.err << "n=" << n << " already in " << ctx.opt.out << ", skipped\n";
      continue;
    }
    try {
      const ThresholdRecord rec = threshold_search(f, n, oc, lo, hi, std::nullopt, progress_to(ctx.err));
      SweepRow row{f, n, rec.p_star, rec.ci_lo, rec.ci_hi, ctx.seed, oc.restarts,
                   ctx.opt.no_timing ? 0.0 : rec.wall_time_s};
      file.rows.push_back(row);
      std::sort(file.rows.begin(), file.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.n < b.n; });
      write_file_atomic(ctx.opt.out, format_sweep_file(file));
      ctx.out << format_sweep_row(row) << "\n";
    } catch (const BracketError& e) {
      ctx.err << "n=" << n << " failed: " << e.what() << "\n";
      failed = true;
    }
  }
  if (!fs::exists(ctx.opt.out)) write_file_atomic(ctx.opt.out, format_sweep_file(file));
  return failed ? kExitFailure : kExitOk;
}

int cmd_degeneracy(Context& ctx) {
  const FamilyKind f = family_of(ctx.opt);
  const double p = require_p(ctx.opt);
  const int n = require_n(ctx.opt);
  if (n > kMaxIrrepN) throw ConfigError("--n exceeds " + std::to_string(kMaxIrrepN));
  if (!(ctx.opt.delta > 0.0)) throw ConfigError("--delta must be positive");
  const PauliChannel ch = ChannelFamily{f, p}.channel();
  const auto probs = ch.probabilities();

  Json cfg{{"command", "degeneracy-report"}, {"family", family_name(f)}, {"p", p}, {"n", n}, {"delta", ctx.opt.delta}};
  Json j;
  j["provenance"] = provenance(ctx.seed, config_hash(cfg));
  j["family"] = family_name(f);
  j["p"] = p;
  j["n"] = n;
  j["delta"] = ctx.opt.delta;
  const double two_row = two_row_probability(ch, n);
  j["two_row_probability"] = two_row;
  if (f == FamilyKind::depolarizing && p < 0.5) {
    j["two_row_scaled"] = two_row / (static_cast<double>(n) * n * std::pow(1.0 - 2.0 * p, n));
  }
  try {
    j["two_row_rank_bound"] = two_row_rank_bound(n);
  } catch (const std::overflow_error&) {
    j["two_row_rank_bound"] = nullptr;
  }
  Json dist = Json::array();
  std::string csv = "# " + j["provenance"].dump() + "\nlambda1,lambda2,lambda3,lambda4,probability\n";
  // Descending partitions, as enumerate_partitions orders them.
  const auto distribution = irrep_measurement_distribution(ch, n);
  for (auto it = distribution.rbegin(); it != distribution.rend(); ++it) {
    const auto& [lambda, prob] = *it;
    dist.push_back({{"lambda", lambda.parts()}, {"probability", prob}});
    for (int k = 0; k < 4; ++k) csv += std::to_string(lambda[k]) + ",";
    csv += format_real(prob) + "\n";
  }
  if (!ctx.opt.csv.empty()) write_file_atomic(ctx.opt.csv, csv);
  j["irrep_distribution"] = std::move(dist);
  const TypicalSetStats ts = typical_set_stats(ch, n, ctx.opt.delta);
  j["typical_set"] = {{"mass", ts.mass}, {"count", ts.count}, {"min_prob", ts.min_prob}, {"max_prob", ts.max_prob}};
  const double delta = ctx.opt.delta;
  const AnnihilationCounts ac = annihilation_counts(n, [&](const WeightVector& w) {
    for (int k = 0; k < 4; ++k) {
      if (w[k] > 0 && probs[static_cast<std::size_t>(k)] == 0.0) return false;
    }
    return is_strongly_typical(w, probs, delta);
  });
  j["annihilation"] = {{"total_in_span", ac.total_in_span}, {"non_annihilating", ac.non_annihilating}};
  ctx.out << j.dump(2) << "\n";
  emit(ctx, j);
  return kExitOk;
}

int cmd_oracle(Context& ctx) {
  OracleSuiteConfig sc;
  const auto [a, b] = parse_range(ctx.opt.n_range.empty() ? "1:8" : ctx.opt.n_range);
  sc.n_min = a;
  sc.n_max = b;
  sc.cases_per_n = ctx.opt.cases;
  sc.seed = ctx.seed;
  sc.threads = ctx.threads;
  if (!ctx.opt.channel.empty()) sc.families = {family_of(ctx.opt)};
  if (ctx.opt.p) sc.p_values = {*ctx.opt.p};
  if (sc.cases_per_n < 1) throw ConfigError("--cases must be at least 1");
  const OracleSuiteResult r = run_oracle_suite(sc);
  ctx.out << "cases " << r.cases << "\n";
  ctx.out << "failures " << r.failures << "\n";
  ctx.out << "max_diff " << format_real(r.max_diff) << "\n";
  ctx.out << "worst " << r.worst << "\n";
  ctx.out << (r.passed() ? "PASS" : "FAIL") << "\n";
  Json cfg{{"command", "oracle-check"}, {"n_min", a}, {"n_max", b}, {"cases", sc.cases_per_n}, {"seed", ctx.seed}};
  Json j;
  j["provenance"] = provenance(ctx.seed, config_hash(cfg));
  j["cases"] = r.cases;
  j["failures"] = r.failures;
  j["max_diff"] = r.max_diff;
  j["worst"] = r.worst;
  j["passed"] = r.passed();
  emit(ctx, j);
  return r.passed() ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent information of Pauli channels over permutation-invariant inputs", "symcap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Options o;

  auto channel = [&](CLI::App* c) {
    c->add_option("--channel", o.channel, "Channel family: dep, xz or 2pauli");
  };
  auto p = [&](CLI::App* c) { c->add_option("--p", o.p, "Noise parameter"); };
  auto n = [&](CLI::App* c) { c->add_option("--n", o.n, "Number of channel uses"); };
  auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "RNG seed (drawn and logged when absent)"); };
  auto outp = [&](CLI::App* c) { c->add_option("--out", o.out, "Output file"); };
  auto optim = [&](CLI::App* c) {
    c->add_option("--restarts", o.restarts, "Restarts per p")->check(CLI::PositiveNumber);
    c->add_option("--iters", o.iters, "Iteration cap per restart")->check(CLI::PositiveNumber);
    c->add_option("--method", o.method, "Local optimizer")->check(CLI::IsMember({"lbfgs", "ascent"}));
    c->add_option("--gradient", o.gradient, "Gradient")->check(CLI::IsMember({"analytic", "central", "five-point"}));
  };
  auto bracket = [&](CLI::App* c) {
    c->add_option("--p-lo", o.p_lo, "Lower end of the p bracket");
    c->add_option("--p-hi", o.p_hi, "Upper end of the p bracket");
    c->add_flag("--no-timing", o.no_timing, "Record wall time as 0");
  };

  auto* pre = app.add_subcommand("precompute", "Build and cache the ND blocks for (channel, p, n)");
  channel(pre), p(pre), n(pre), seed(pre);
  pre->add_option("--cache", o.cache, "Cache file")->required();

  auto* ci = app.add_subcommand("ci", "Coherent information of a state file");
  channel(ci), p(ci), seed(ci), outp(ci);
  ci->add_option("--state", o.state, "State JSON")->required();
  ci->add_option("--cache", o.cache, "Cache file from precompute");
  ci->add_option("--precision", o.precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));

  auto* opt = app.add_subcommand("optimize", "Maximize CI at fixed (channel, p, n)");
  channel(opt), p(opt), n(opt), seed(opt), outp(opt), optim(opt);
  opt->add_option("--cache", o.cache, "Cache file from precompute");
  opt->add_option("--warm", o.warm, "Warm-start state JSON");

  auto* thr = app.add_subcommand("threshold", "Bisect for the positivity threshold at one n");
  channel(thr), n(thr), seed(thr), outp(thr), optim(thr), bracket(thr);
  thr->add_option("--warm", o.warm, "Warm-start state JSON");

  auto* sw = app.add_subcommand("sweep", "Thresholds over a range of n into a resumable CSV");
  channel(sw), seed(sw), outp(sw), optim(sw), bracket(sw);
  sw->add_option("--n-range", o.n_range, "a:b");

  auto* deg = app.add_subcommand("degeneracy-report", "Irrep distribution, rank bound and typical-set statistics");
  channel(deg), p(deg), n(deg), seed(deg), outp(deg);
  deg->add_option("--delta", o.delta, "Typicality window");
  deg->add_option("--csv", o.csv, "CSV of P(lambda) rows");

  auto* orc = app.add_subcommand("oracle-check", "Fast path against the dense oracle, n <= 8");
  channel(orc), p(orc), seed(orc), outp(orc);
  orc->add_option("--n-range", o.n_range, "a:b (default 1:8)");
  orc->add_option("--cases", o.cases, "Random inputs per (family, p, n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context ctx{o, out, err};
  if (o.seed) {
    ctx.seed = *o.seed;
  } else {
    ctx.seed = std::random_device{}();
    err << "seed " << ctx.seed << "\n";
  }
  ctx.threads = default_worker_count();
  try {
    if (pre->parsed()) return cmd_precompute(ctx);
    if (ci->parsed()) return cmd_ci(ctx);
    if (opt->parsed()) return cmd_optimize(ctx);
    if (thr->parsed()) return cmd_threshold(ctx);
    if (sw->parsed()) return cmd_sweep(ctx);
    if (deg->parsed()) return cmd_degeneracy(ctx);
    if (orc->parsed()) return cmd_oracle(ctx);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BracketError& e) {
    err << "bracket error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace symcap
