// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "symcap/optimizer.hpp"
#include "symcap/oracle.hpp"

using namespace symcap;

namespace {

OptimizerConfig small_config(int restarts = 4) {
  OptimizerConfig c;
  c.restarts = restarts;
  c.max_iterations = 500;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  auto bad = [](auto mutate) {
    OptimizerConfig c;
    mutate(c);
    return c;
  };
  CHECK_NOTHROW(OptimizerConfig{}.validate());
  CHECK_THROWS_AS(bad([](auto& c) { c.restarts = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](auto& c) { c.max_iterations = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](auto& c) { c.gradient_step = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](auto& c) { c.tolerance = -1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](auto& c) { c.step_shrink = 1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](auto& c) { c.perturbations = -1; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](auto& c) { c.perturbation_scale = 0.0; }).validate(), ConfigError);
}

TEST_CASE("restart seeds") {
  for (int n : {1, 4, 9}) {
    const SymmetricInput rep = restart_seed(n, 0, 1);
    const SymmetricInput expect = repetition_input(n);
    CHECK((rep.alpha - expect.alpha).norm() == 0.0);
    for (int i = 0; i < 12; ++i) {
      const SymmetricInput a = restart_seed(n, i, 5);
      const SymmetricInput b = restart_seed(n, i, 5);
      CHECK(a.alpha == b.alpha);
      CHECK(a.alpha.row(0).norm() == doctest::Approx(1.0));
      CHECK(a.alpha.row(1).norm() == doctest::Approx(1.0));
    }
    if (n > 1) CHECK((restart_seed(n, 2, 5).alpha - restart_seed(n, 2, 6).alpha).norm() > 1e-6);
  }
  // The repetition pair spans |+>^n and |->^n.
  const SymmetricInput r = repetition_input(3);
  CHECK(std::abs(r.alpha(0, 0)) == doctest::Approx(std::sqrt(1.0 / 8.0)));
  CHECK(std::abs(r.alpha.row(0).dot(r.alpha.row(1))) <= 1e-12);
}

TEST_CASE("perturbed seeds stay near the warm start") {
  const SymmetricInput w = repetition_input(6);
  const SymmetricInput a = perturbed_seed(w, 3, 0.01, 9);
  const SymmetricInput b = perturbed_seed(w, 3, 0.01, 9);
  CHECK(a.alpha == b.alpha);
  CHECK((a.alpha - w.alpha).norm() < 0.1);
  CHECK((a.alpha - w.alpha).norm() > 0.0);
  CHECK((perturbed_seed(w, 4, 0.01, 9).alpha - a.alpha).norm() > 0.0);
}

TEST_CASE("single use optimum is the hashing value") {
  for (FamilyKind f : {FamilyKind::depolarizing, FamilyKind::independent_xz, FamilyKind::two_pauli}) {
    const PauliChannel ch = make_channel(f, 0.05);
    const MaximizeResult r = maximize_ci(ch, 1, small_config());
    CHECK(r.ci == doctest::Approx(hashing_ci(ch)).epsilon(1e-9));
  }
}

TEST_CASE("optimizer results are deterministic and thread-independent") {
  const PauliChannel ch = make_channel(FamilyKind::depolarizing, 0.06);
  OptimizerConfig c = small_config(6);
  const MaximizeResult a = maximize_ci(ch, 4, c);
  const MaximizeResult b = maximize_ci(ch, 4, c);
  c.threads = 3;
  const MaximizeResult t = maximize_ci(ch, 4, c);
  CHECK(a.ci == b.ci);
  CHECK(a.best.alpha == b.best.alpha);
  CHECK(a.ci == t.ci);
  CHECK(a.best.alpha == t.best.alpha);
  CHECK(a.best_restart == t.best_restart);
}

TEST_CASE("warm start at the optimum does not lose ground") {
  auto rng = test::rng_for(61);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const PauliChannel ch = make_channel(FamilyKind::depolarizing, 0.055 + 0.01 * std::uniform_real_distribution<double>(0, 1)(rng));
    const SpanningBasis basis = choose_spanning_states(n, 1);
    const Precomputation pre = precompute<double>(ch, n, basis);
    const MaximizeResult first = maximize_ci(pre, small_config(3));
    const MaximizeResult again = maximize_ci(pre, small_config(1), first.best);
    CHECK(again.ci >= first.ci - 1e-12);
  }
}

TEST_CASE("more restarts never lower the optimum") {
  auto rng = test::rng_for(62);
  for (int trial = 0; trial < 4; ++trial) {
    const FamilyKind f = test::random_family(rng);
    const double p = f == FamilyKind::depolarizing ? 0.06 : 0.105;
    const int n = 2 + static_cast<int>(rng() % 3);
    const Precomputation pre = precompute<double>(make_channel(f, p), n, choose_spanning_states(n, 1));
    double prev = -1e300;
    for (int r : {1, 2, 4, 7}) {
      const double ci = maximize_ci(pre, small_config(r)).ci;
      CHECK(ci >= prev);
      prev = ci;
    }
  }
}

TEST_CASE("local methods and gradient modes agree") {
  const Precomputation pre =
      precompute<double>(make_channel(FamilyKind::depolarizing, 0.05), 3, choose_spanning_states(3, 1));
  OptimizerConfig base = small_config(3);
  const double lbfgs = maximize_ci(pre, base).ci;
  OptimizerConfig central = base;
  central.gradient = GradientMode::central;
  OptimizerConfig five = base;
  five.gradient = GradientMode::five_point;
  five.gradient_step = 1e-4;
  OptimizerConfig ascent = base;
  ascent.method = OptimizerMethod::ascent;
  ascent.max_iterations = 4000;
  CHECK(maximize_ci(pre, central).ci == doctest::Approx(lbfgs).epsilon(1e-6));
  CHECK(maximize_ci(pre, five).ci == doctest::Approx(lbfgs).epsilon(1e-6));
  CHECK(maximize_ci(pre, ascent).ci == doctest::Approx(lbfgs).epsilon(1e-5));
}

TEST_CASE("central and five-point gradients agree") {
  auto rng = test::rng_for(63);
  const Precomputation pre =
      precompute<double>(make_channel(FamilyKind::two_pauli, 0.1), 5, choose_spanning_states(5, 1));
  const SymmetricInput in = random_symmetric_input(5, rng);
  const CiGradient c = finite_difference_gradient(in, pre, 1e-5, false);
  const CiGradient f = finite_difference_gradient(in, pre, 1e-3, true);
  CHECK((c.grad - f.grad).norm() <= 1e-6 * std::max(1.0, f.grad.norm()));
}

TEST_CASE("threshold search at n = 1 finds the hashing threshold") {
  OptimizerConfig c = small_config(3);
  const ThresholdRecord rec = threshold_search(FamilyKind::depolarizing, 1, c, 0.05, 0.08);
  CHECK(std::abs(rec.p_star - 0.063096) <= 1e-5);
  CHECK(rec.p_upper - rec.p_star <= kBisectionWidth);
  CHECK(rec.p_upper > rec.p_star);
  CHECK(rec.ci_lo >= kPositivity);
  CHECK(rec.ci_hi < kPositivity);
  CHECK(rec.best_input.n == 1);
  CHECK(evaluate_ci<double>(rec.best_input, precompute<double>(make_channel(FamilyKind::depolarizing, rec.p_star), 1,
                                                               choose_spanning_states(1, 1))) >= kPositivity);
}

TEST_CASE("threshold bracket violations") {
  const OptimizerConfig c = small_config(2);
  CHECK_THROWS_AS(threshold_search(FamilyKind::depolarizing, 2, c, 0.07, 0.08), BracketError);
  CHECK_THROWS_AS(threshold_search(FamilyKind::depolarizing, 2, c, 0.01, 0.02), BracketError);
  CHECK_THROWS_AS(threshold_search(FamilyKind::depolarizing, 2, c, 0.08, 0.07), ConfigError);
  CHECK_THROWS_AS(threshold_search(FamilyKind::depolarizing, 2, c, 0.05, 0.4), ConfigError);
}

TEST_CASE("threshold search reports progress") {
  std::vector<std::string> lines;
  threshold_search(FamilyKind::independent_xz, 1, small_config(2), 0.1, 0.12, std::nullopt,
                   [&](const std::string& s) { lines.push_back(s); });
  REQUIRE(lines.size() >= 3);
  CHECK(lines.front().find("xz n=1 p=0.1 ") == 0);
}
