// SPDX-License-Identifier: Apache-2.0
#pragma once

// Multi-start maximization of the coherent information over rank-two
// symmetric inputs, and bisection for the positivity threshold in p.

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "symcap/basis.hpp"
#include "symcap/channel.hpp"
#include "symcap/coherent_info.hpp"

namespace symcap {

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A threshold is certified when the optimized CI reaches this value.
inline constexpr double kPositivity = 1e-7;
inline constexpr double kBisectionWidth = 1e-6;

enum class GradientMode { analytic, central, five_point };

// lbfgs: quasi-Newton on the unnormalized rows (Ceres line search).
// ascent: plain gradient ascent with backtracking, renormalizing every step.
enum class OptimizerMethod { lbfgs, ascent };

struct OptimizerConfig {
  int restarts = 20;
  int max_iterations = 2000;
  OptimizerMethod method = OptimizerMethod::lbfgs;
  GradientMode gradient = GradientMode::analytic;
  double gradient_step = 1e-6;  // finite-difference h
  double initial_step = 0.05;
  double step_growth = 1.2;
  double step_shrink = 0.5;
  double min_step = 1e-12;
  double tolerance = 1e-13;  // stop when an accepted step gains less than this
  int stall_iterations = 25;  // ... this many times in a row
  std::uint64_t seed = 1;
  int threads = 1;
  // Threshold search: restarts at the bracket ends and at interior points.
  int bisection_restarts = 2;
  // Basin hopping around the warm start: each round kicks the current
  // optimum with complex Gaussian noise `perturbations` times.
  int perturbations = 4;
  double perturbation_scale = 0.05;
  int hop_rounds = 3;

  void validate() const;
};

struct MaximizeResult {
  SymmetricInput best;
  double ci = 0.0;
  int best_restart = 0;
  bool converged = false;  // best restart stopped before max_iterations
  int evaluations = 0;
};

/// Local maximization on `pre` from config.restarts seeds, plus basin hopping
/// from the warm start when given (reported as restart 0; seeds then start at
/// 1). Seeds cycle through structured inputs and random Gaussian rows.
MaximizeResult maximize_ci(const Precomputation& pre, const OptimizerConfig& config,
                           const std::optional<SymmetricInput>& warm_start = std::nullopt);

/// Builds the spanning basis (config.seed) and precomputation, then ascends.
MaximizeResult maximize_ci(const PauliChannel& channel, int n, const OptimizerConfig& config,
                           const std::optional<SymmetricInput>& warm_start = std::nullopt);

/// Restart seed for slot `index` (the warm start, if any, is not counted).
SymmetricInput restart_seed(int n, int index, std::uint64_t seed);

/// Warm start plus i.i.d. complex Gaussian noise of size `scale`, rows renormalized.
SymmetricInput perturbed_seed(const SymmetricInput& warm, int index, double scale, std::uint64_t seed);

/// Input 1/2(|u><u|^n + |u_perp><u_perp|^n) for u = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
SymmetricInput repetition_input(int n, double theta = std::numbers::pi / 2, double phi = 0.0);

/// Gradient of the renormalized objective by finite differences, projected on
/// the tangent space. `five_point` uses the fourth-order stencil.
CiGradient finite_difference_gradient(const SymmetricInput& input, const Precomputation& pre, double h,
                                      bool five_point);

CiGradient ci_gradient(const SymmetricInput& input, const Precomputation& pre, const OptimizerConfig& config);

struct ThresholdRecord {
  FamilyKind family = FamilyKind::depolarizing;
  int n = 0;
  double p_star = 0.0;
  double p_upper = 0.0;
  double ci_lo = 0.0;  // optimized CI at p_star
  double ci_hi = 0.0;  // optimized CI at p_upper
  SymmetricInput best_input;
  std::uint64_t seed = 0;
  int restarts = 0;
  double wall_time_s = 0.0;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Bisection on p over [p_lo, p_hi] until the width is at most kBisectionWidth.
/// Throws BracketError unless CI(p_lo) >= kPositivity > CI(p_hi).
ThresholdRecord threshold_search(FamilyKind family, int n, const OptimizerConfig& config, double p_lo, double p_hi,
                                 const std::optional<SymmetricInput>& warm_start = std::nullopt,
                                 const ProgressFn& progress = {});

}  // namespace symcap
