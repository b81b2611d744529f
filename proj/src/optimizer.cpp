// SPDX-License-Identifier: Apache-2.0
#include "symcap/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <ceres/ceres.h>

#include "symcap/parallel.hpp"

namespace symcap {

void OptimizerConfig::validate() const {
  if (restarts < 1) throw ConfigError("optimizer: restarts must be at least 1");
  if (max_iterations < 1) throw ConfigError("optimizer: max_iterations must be at least 1");
  if (!(gradient_step > 0.0)) throw ConfigError("optimizer: gradient_step must be positive");
  if (!(initial_step > 0.0) || !(min_step > 0.0)) throw ConfigError("optimizer: step sizes must be positive");
  if (!(step_growth >= 1.0) || !(step_shrink > 0.0 && step_shrink < 1.0)) {
    throw ConfigError("optimizer: need step_growth >= 1 and 0 < step_shrink < 1");
  }
  if (!(tolerance > 0.0)) throw ConfigError("optimizer: tolerance must be positive");
  if (stall_iterations < 1) throw ConfigError("optimizer: stall_iterations must be at least 1");
  if (bisection_restarts < 0) throw ConfigError("optimizer: bisection_restarts must be non-negative");
  if (perturbations < 0) throw ConfigError("optimizer: perturbations must be non-negative");
  if (hop_rounds < 0) throw ConfigError("optimizer: hop_rounds must be non-negative");
  if (!(perturbation_scale > 0.0)) throw ConfigError("optimizer: perturbation_scale must be positive");
}

SymmetricInput repetition_input(int n, double theta, double phi) {
  const QubitState u{std::complex<double>(std::cos(theta / 2), 0.0), std::polar(std::sin(theta / 2), phi)};
  const QubitState v{-std::conj(u.c1), std::conj(u.c0)};
  Eigen::MatrixXcd alpha(2, n + 1);
  for (int k = 0; k <= n; ++k) {
    alpha(0, k) = dicke_overlap(n, k, u);
    alpha(1, k) = dicke_overlap(n, k, v);
  }
  return SymmetricInput::normalized(std::move(alpha));
}

SymmetricInput restart_seed(int n, int index, std::uint64_t seed) {
  if (index == 0) return repetition_input(n);
  if (index == 1) {
    Eigen::MatrixXcd alpha = Eigen::MatrixXcd::Zero(2, n + 1);
    alpha(0, 0) = 1.0;
    alpha(1, n) = 1.0;
    return SymmetricInput::make(std::move(alpha));
  }
  std::seed_seq seq{seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(n)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  switch ((index - 2) % 4) {
    case 1: {
      // Repetition pair in a random basis.
      const double theta = std::acos(1.0 - 2.0 * uni(rng));
      const double phi = 2.0 * std::numbers::pi * uni(rng);
      return repetition_input(n, theta, phi);
    }
    case 3: {
      // Few random Dicke components per row.
      std::normal_distribution<double> g(0.0, 1.0);
      std::uniform_int_distribution<int> pick(0, n);
      Eigen::MatrixXcd alpha = Eigen::MatrixXcd::Zero(2, n + 1);
      for (int i = 0; i < 2; ++i) {
        const int terms = 1 + static_cast<int>(uni(rng) * 3.0);
        for (int t = 0; t < terms; ++t) {
          const double re = g(rng);
          const double im = g(rng);
          alpha(i, pick(rng)) += std::complex<double>(re, im);
        }
        if (alpha.row(i).norm() == 0.0) alpha(i, pick(rng)) = 1.0;
      }
      return SymmetricInput::normalized(std::move(alpha));
    }
    default:
      return random_symmetric_input(n, rng);
  }
}

SymmetricInput perturbed_seed(const SymmetricInput& warm, int index, double scale, std::uint64_t seed) {
  std::seed_seq seq{seed, std::uint64_t{0x70657274}, static_cast<std::uint64_t>(index),
                    static_cast<std::uint64_t>(warm.n)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd alpha = warm.alpha;
  for (Eigen::Index k = 0; k < alpha.cols(); ++k) {
    for (Eigen::Index i = 0; i < 2; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      alpha(i, k) += scale * std::complex<double>(re, im);
    }
  }
  return SymmetricInput::normalized(std::move(alpha));
}

CiGradient finite_difference_gradient(const SymmetricInput& input, const Precomputation& pre, double h,
                                      bool five_point) {
  auto f = [&](const Eigen::MatrixXcd& a) { return evaluate_ci<double>(SymmetricInput::normalized(a), pre); };
  Eigen::MatrixXcd g(2, input.n + 1);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k <= input.n; ++k) {
      double parts[2];
      for (int part = 0; part < 2; ++part) {
        const std::complex<double> e = part == 0 ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 1.0);
        auto shifted = [&](double s) {
          Eigen::MatrixXcd a = input.alpha;
          a(i, k) += s * h * e;
          return f(a);
        };
        if (five_point) {
          parts[part] = (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) + shifted(-2)) / (12 * h);
        } else {
          parts[part] = (shifted(1) - shifted(-1)) / (2 * h);
        }
      }
      g(i, k) = {parts[0], parts[1]};
    }
  }
  return {evaluate_ci<double>(input, pre), tangent_projection(input.alpha, g)};
}

CiGradient ci_gradient(const SymmetricInput& input, const Precomputation& pre, const OptimizerConfig& config) {
  switch (config.gradient) {
    case GradientMode::analytic: return evaluate_ci_gradient(input, pre);
    case GradientMode::central: return finite_difference_gradient(input, pre, config.gradient_step, false);
    case GradientMode::five_point: return finite_difference_gradient(input, pre, config.gradient_step, true);
  }
  return evaluate_ci_gradient(input, pre);
}

namespace {

struct AscentResult {
  SymmetricInput input;
  double ci = 0.0;
  bool converged = false;
  int evaluations = 0;
};

Eigen::MatrixXcd renormalize(Eigen::MatrixXcd a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.row(i) /= a.row(i).norm();
  return a;
}

AscentResult ascend(const SymmetricInput& start, const Precomputation& pre, const OptimizerConfig& cfg) {
  AscentResult out;
  CiGradient cur = ci_gradient(start, pre, cfg);
  out.evaluations = 1;
  SymmetricInput x = start;
  double eta = cfg.initial_step;
  int stall = 0;
  const bool value_first = cfg.gradient != GradientMode::analytic;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (!(cur.grad.norm() > 1e-15)) {
      out.converged = true;
      break;
    }
    const SymmetricInput trial = SymmetricInput::make(renormalize(x.alpha + eta * cur.grad));
    CiGradient next;
    if (value_first) {
      next.value = evaluate_ci<double>(trial, pre);
    } else {
      next = evaluate_ci_gradient(trial, pre);
    }
    ++out.evaluations;
    if (next.value > cur.value) {
      const double gain = next.value - cur.value;
      if (value_first) next = ci_gradient(trial, pre, cfg);
      x = trial;
      cur = std::move(next);
      eta *= cfg.step_growth;
      stall = gain < cfg.tolerance ? stall + 1 : 0;
      if (stall >= cfg.stall_iterations) {
        out.converged = true;
        break;
      }
    } else {
      eta *= cfg.step_shrink;
      if (eta < cfg.min_step) {
        out.converged = true;
        break;
      }
    }
  }
  out.input = std::move(x);
  out.ci = cur.value;
  return out;
}

// -CI as a function of the 4(n+1) real components of the unnormalized rows.
// Row normalization makes the gradient the tangent gradient over the row norm.
class NegativeCi final : public ceres::FirstOrderFunction {
 public:
  NegativeCi(const Precomputation& pre, const OptimizerConfig& cfg, int* evaluations)
      : pre_(pre), cfg_(cfg), evaluations_(evaluations) {}

  int NumParameters() const override { return 4 * (pre_.n + 1); }

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    const int cols = pre_.n + 1;
    Eigen::MatrixXcd a(2, cols);
    double norms[2];
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < cols; ++k) a(i, k) = {x[2 * (i * cols + k)], x[2 * (i * cols + k) + 1]};
      norms[i] = a.row(i).norm();
      if (!(norms[i] > 0.0) || !std::isfinite(norms[i])) return false;
      a.row(i) /= norms[i];
    }
    const SymmetricInput in = SymmetricInput::make(std::move(a));
    ++*evaluations_;
    if (gradient == nullptr) {
      *cost = -evaluate_ci<double>(in, pre_);
      return std::isfinite(*cost);
    }
    const CiGradient g = ci_gradient(in, pre_, cfg_);
    *cost = -g.value;
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < cols; ++k) {
        const std::complex<double> d = -g.grad(i, k) / norms[i];
        gradient[2 * (i * cols + k)] = d.real();
        gradient[2 * (i * cols + k) + 1] = d.imag();
      }
    }
    return std::isfinite(*cost);
  }

 private:
  const Precomputation& pre_;
  const OptimizerConfig& cfg_;
  int* evaluations_;
};

AscentResult lbfgs(const SymmetricInput& start, const Precomputation& pre, const OptimizerConfig& cfg) {
  AscentResult out;
  const int cols = pre.n + 1;
  std::vector<double> x(static_cast<std::size_t>(4 * cols));
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < cols; ++k) {
      x[static_cast<std::size_t>(2 * (i * cols + k))] = start.alpha(i, k).real();
      x[static_cast<std::size_t>(2 * (i * cols + k) + 1)] = start.alpha(i, k).imag();
    }
  }
  ceres::GradientProblem problem(new NegativeCi(pre, cfg, &out.evaluations));
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.max_num_iterations = cfg.max_iterations;
  opts.function_tolerance = 1e-15;
  opts.gradient_tolerance = cfg.tolerance;
  opts.parameter_tolerance = 1e-15;
  opts.logging_type = ceres::SILENT;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, x.data(), &summary);

  Eigen::MatrixXcd a(2, cols);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < cols; ++k) {
      a(i, k) = {x[static_cast<std::size_t>(2 * (i * cols + k))], x[static_cast<std::size_t>(2 * (i * cols + k) + 1)]};
    }
  }
  out.input = SymmetricInput::normalized(std::move(a));
  // Re-evaluate rather than trust the solver's cached cost.
  out.ci = evaluate_ci<double>(out.input, pre);
  out.converged = summary.termination_type == ceres::CONVERGENCE;
  const double ci0 = evaluate_ci<double>(start, pre);
  if (out.ci < ci0) {
    out.input = start;
    out.ci = ci0;
  }
  return out;
}

AscentResult local_maximize(const SymmetricInput& start, const Precomputation& pre, const OptimizerConfig& cfg) {
  return cfg.method == OptimizerMethod::lbfgs ? lbfgs(start, pre, cfg) : ascend(start, pre, cfg);
}

// Local optimum from the warm start, then rounds of perturbed restarts around
// the current optimum; a round that finds nothing better ends the search.
AscentResult basin_hop(const SymmetricInput& warm, const Precomputation& pre, const OptimizerConfig& cfg) {
  AscentResult base = local_maximize(warm, pre, cfg);
  const auto kicks = static_cast<std::size_t>(cfg.perturbations);
  for (int round = 0; round < cfg.hop_rounds && kicks > 0; ++round) {
    std::vector<AscentResult> runs(kicks);
    parallel_for(kicks, cfg.threads, [&](std::size_t j) {
      const int index = round * cfg.perturbations + static_cast<int>(j);
      runs[j] = local_maximize(perturbed_seed(base.input, index, cfg.perturbation_scale, cfg.seed), pre, cfg);
    });
    std::size_t best = 0;
    int evaluations = base.evaluations;
    for (std::size_t j = 0; j < kicks; ++j) {
      evaluations += runs[j].evaluations;
      if (runs[j].ci > runs[best].ci) best = j;
    }
    const bool improved = runs[best].ci > base.ci;
    if (improved) base = std::move(runs[best]);
    base.evaluations = evaluations;
    if (!improved) break;
  }
  return base;
}

MaximizeResult maximize_slots(const Precomputation& pre, const OptimizerConfig& config,
                              const std::optional<SymmetricInput>& warm_start, int restarts) {
  const int n = pre.n;
  if (warm_start && warm_start->n != n) throw InputError("maximize_ci: warm start has the wrong n");
  // Slot 0 is the warm start (with basin hopping) when given, then the restart seeds.
  const std::size_t offset = warm_start ? 1 : 0;
  const std::size_t slots = static_cast<std::size_t>(restarts) + offset;
  std::vector<AscentResult> runs(slots);
  if (warm_start) runs[0] = basin_hop(*warm_start, pre, config);
  parallel_for(slots - offset, config.threads, [&](std::size_t s) {
    runs[s + offset] = local_maximize(restart_seed(n, static_cast<int>(s), config.seed), pre, config);
  });
  // Highest CI wins; ties go to the lower slot.
  std::size_t best = 0;
  MaximizeResult res;
  for (std::size_t s = 0; s < slots; ++s) {
    res.evaluations += runs[s].evaluations;
    if (runs[s].ci > runs[best].ci) best = s;
  }
  res.best = runs[best].input;
  res.ci = runs[best].ci;
  res.best_restart = static_cast<int>(best);
  res.converged = runs[best].converged;
  return res;
}

}  // namespace

MaximizeResult maximize_ci(const Precomputation& pre, const OptimizerConfig& config,
                           const std::optional<SymmetricInput>& warm_start) {
  config.validate();
  return maximize_slots(pre, config, warm_start, config.restarts);
}

MaximizeResult maximize_ci(const PauliChannel& channel, int n, const OptimizerConfig& config,
                           const std::optional<SymmetricInput>& warm_start) {
  const SpanningBasis basis = choose_spanning_states(n, config.seed);
  PrecomputeOptions opts;
  opts.threads = config.threads;
  return maximize_ci(precompute<double>(channel, n, basis, opts), config, warm_start);
}

ThresholdRecord threshold_search(FamilyKind family, int n, const OptimizerConfig& config, double p_lo, double p_hi,
                                 const std::optional<SymmetricInput>& warm_start, const ProgressFn& progress) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  if (!(p_lo < p_hi)) throw ConfigError("threshold_search: need p_lo < p_hi");
  if (p_lo < 0.0 || p_hi > family_p_max(family)) throw ConfigError("threshold_search: bracket outside the family range");

  const SpanningBasis basis = choose_spanning_states(n, config.seed);
  PrecomputeOptions opts;
  opts.threads = config.threads;
  auto run = [&](double p, int restarts, const std::optional<SymmetricInput>& warm) {
    const Precomputation pre = precompute<double>(make_channel(family, p), n, basis, opts);
    MaximizeResult r = maximize_slots(pre, config, warm, warm ? restarts : std::max(restarts, 1));
    if (progress) {
      std::ostringstream os;
      os.precision(10);
      os << family_short_name(family) << " n=" << n << " p=" << p << " ci=" << r.ci;
      progress(os.str());
    }
    return r;
  };

  const MaximizeResult lo = run(p_lo, config.restarts, warm_start);
  if (lo.ci < kPositivity) {
    throw BracketError("threshold_search: CI at p_lo=" + std::to_string(p_lo) + " is below the positivity criterion");
  }
  const MaximizeResult hi = run(p_hi, config.restarts, lo.best);
  if (hi.ci >= kPositivity) {
    throw BracketError("threshold_search: CI at p_hi=" + std::to_string(p_hi) + " is still positive");
  }
  ThresholdRecord rec;
  rec.family = family;
  rec.n = n;
  rec.seed = config.seed;
  rec.restarts = config.restarts;
  rec.best_input = lo.best;
  rec.ci_lo = lo.ci;
  rec.ci_hi = hi.ci;
  while (p_hi - p_lo > kBisectionWidth) {
    const double mid = 0.5 * (p_lo + p_hi);
    const MaximizeResult r = run(mid, config.bisection_restarts, rec.best_input);
    if (r.ci >= kPositivity) {
      p_lo = mid;
      rec.best_input = r.best;
      rec.ci_lo = r.ci;
    } else {
      p_hi = mid;
      rec.ci_hi = r.ci;
    }
  }
  rec.p_star = p_lo;
  rec.p_upper = p_hi;
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace symcap
