// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "tableaux.hpp"
#include "symcap/degeneracy.hpp"
#include "symcap/oracle.hpp"

using namespace symcap;
using namespace symcap::test;

namespace {

std::array<double, 4> random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> x{};
  for (auto& v : x) v = u(rng);
  if (rng() % 3 == 0) x[2] = x[3] = x[1];  // repeated variables
  return x;
}

}  // namespace

TEST_CASE("schur polynomial against the tableau sum") {
  auto rng = test::rng_for(71);
  for (int n = 1; n <= 8; ++n) {
    for (const Partition& lambda : enumerate_partitions(n, 4)) {
      CHECK(schur_polynomial(lambda, {1, 1, 1, 1}) == doctest::Approx(static_cast<double>(weyl_dim(lambda, 4))).epsilon(1e-12));
      for (int trial = 0; trial < 3; ++trial) {
        const auto x = random_point(rng);
        const double ref = ssyt_schur(lambda, x);
        CHECK(std::abs(schur_polynomial(lambda, x) - ref) <= 1e-10 * ref);
        CHECK(std::abs(schur_polynomial_branching(lambda, x) - ref) <= 1e-10 * ref);
      }
    }
  }
  const auto lam = Partition::make({1}, 4);
  CHECK(schur_polynomial(lam, {0.1, 0.2, 0.3, 0.4}) == doctest::Approx(1.0));
  const auto x = std::array<double, 4>{0.7, 0.1, 0.1, 0.1};
  CHECK(schur_polynomial(Partition::make({2, 1}, 4), x) == doctest::Approx(ssyt_schur(Partition::make({2, 1}, 4), x)));
}

TEST_CASE("schur branching stays accurate for long shapes") {
  // Both routes agree where the determinant is still well conditioned.
  const std::array<double, 4> x{0.7, 0.1, 0.1, 0.1};
  for (int n = 1; n <= 10; ++n) {
    for (const Partition& lambda : enumerate_partitions(n, 4)) {
      const double b = schur_polynomial_branching(lambda, x);
      CHECK(std::abs(schur_polynomial(lambda, x) - b) <= 1e-13);
      CHECK(b >= 0.0);
    }
  }
}

TEST_CASE("kostka numbers") {
  for (int n = 1; n <= 7; ++n) {
    for (const Partition& lambda : enumerate_partitions(n, 4)) {
      std::uint64_t sum = 0;
      for (const WeightVector& w : enumerate_weights(n)) {
        const std::uint64_t k = kostka_number(lambda, w);
        CHECK(k == ssyt_count(lambda, &w.w));
        if (lambda.rows() == 1) CHECK(k == 1);
        sum += k;
      }
      CHECK(sum == weyl_dim(lambda, 4));
    }
  }
  CHECK(kostka_number(Partition::make({2, 1}, 4), WeightVector::make(1, 1, 1, 0)) == 2);
  CHECK(enumerate_weights(3).size() == 20);
  CHECK(multinomial(WeightVector::make(2, 1, 1, 0)) == 12.0);
}

TEST_CASE("irrep distribution against dense isotypic projectors") {
  // Distinct probabilities so that every weight class has its own eigenvalue.
  const PauliChannel generic = PauliChannel::make(0.55, 0.2, 0.15, 0.1);
  for (const PauliChannel& ch : {make_channel(FamilyKind::depolarizing, 0.1), generic,
                                 make_channel(FamilyKind::two_pauli, 0.12)}) {
    for (int n = 1; n <= 4; ++n) {
      const Eigen::MatrixXcd rho = test::kron_power(choi(ch), n);
      const auto dist = irrep_measurement_distribution(ch, n);
      double total = 0.0;
      for (const auto& [lambda, prob] : dist) {
        const Eigen::MatrixXcd proj = isotypic_projector(lambda);
        const Eigen::MatrixXcd block = proj * rho * proj;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
        const double brute = es.eigenvalues().sum();
        CHECK(std::abs(prob - brute) <= 1e-9);
        total += prob;
        if (&ch != &generic) continue;
        // The block spectrum is the (lambda, w) measure with multiplicities.
        std::vector<double> expect;
        for (const MeasureEntry& e : choi_eigenvalue_measure(ch, n).entries) {
          if (e.lambda != lambda) continue;
          const double value = string_probability(ch.probabilities(), e.weight);
          for (std::uint64_t m = 0; m < e.multiplicity; ++m) expect.push_back(value);
        }
        std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(got.rbegin(), got.rend());
        std::sort(expect.rbegin(), expect.rend());
        REQUIRE(expect.size() <= got.size());
        for (std::size_t i = 0; i < expect.size(); ++i) CHECK(std::abs(got[i] - expect[i]) <= 1e-9);
        for (std::size_t i = expect.size(); i < got.size(); ++i) CHECK(std::abs(got[i]) <= 1e-9);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  const auto dep2 = irrep_measurement_distribution(make_channel(FamilyKind::depolarizing, 0.1), 2);
  const auto x = make_channel(FamilyKind::depolarizing, 0.1).probabilities();
  double h2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) h2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
  }
  CHECK(dep2.at(Partition::make({2}, 4)) == doctest::Approx(h2).epsilon(1e-14));
}

TEST_CASE("distribution sums to one") {
  for (FamilyKind f : {FamilyKind::depolarizing, FamilyKind::independent_xz, FamilyKind::two_pauli}) {
    for (int n : {1, 2, 7, 20, 40}) {
      double total = 0.0;
      for (const auto& [lambda, prob] : irrep_measurement_distribution(make_channel(f, 0.1), n)) {
        CHECK(prob >= 0.0);
        total += prob;
      }
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
  }
  CHECK(irrep_measurement_distribution(make_channel(FamilyKind::depolarizing, 0.2), 1).at(Partition::make({1}, 4)) ==
        doctest::Approx(1.0));
}

TEST_CASE("two-row probability decays like n^2 (1-2p)^n") {
  CHECK(two_row_probability(make_channel(FamilyKind::depolarizing, 0.1), 1) == doctest::Approx(1.0));
  CHECK(two_row_probability(PauliChannel::identity(), 2) == doctest::Approx(1.0));
  for (double p : {0.05, 0.1, 0.15}) {
    const PauliChannel ch = make_channel(FamilyKind::depolarizing, p);
    double first = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 4; n <= 40; ++n) {
      const double ratio = two_row_probability(ch, n) / (n * n * std::pow(1 - 2 * p, n));
      if (n == 4) first = ratio;
      // Bounded by its starting value and shrinking thereafter.
      CHECK(ratio <= first);
      CHECK(ratio <= prev);
      prev = ratio;
    }
  }
}

TEST_CASE("choi eigenvalue measure") {
  const PauliChannel dep = make_channel(FamilyKind::depolarizing, 0.1);
  const EigenvalueMeasure one = choi_eigenvalue_measure(dep, 1);
  REQUIRE(one.entries.size() == 4);
  for (const MeasureEntry& e : one.entries) {
    int j = 0;
    while (e.weight[j] == 0) ++j;
    CHECK(e.probability_mass == doctest::Approx(dep.probabilities()[static_cast<std::size_t>(j)]));
  }
  auto rng = test::rng_for(72);
  for (int n = 1; n <= 12; ++n) {
    const FamilyKind f = test::random_family(rng);
    const PauliChannel ch = make_channel(f, test::random_p(rng, f));
    const auto p = ch.probabilities();
    const EigenvalueMeasure m = choi_eigenvalue_measure(ch, n);
    CHECK(std::abs(m.total_mass() - 1.0) <= 1e-9);
    std::map<Partition, double> by_lambda;
    std::map<WeightVector, double> by_weight;
    for (const MeasureEntry& e : m.entries) {
      CHECK(e.multiplicity == specht_dim(e.lambda) * kostka_number(e.lambda, e.weight));
      CHECK(e.probability_mass == doctest::Approx(e.multiplicity * string_probability(p, e.weight)));
      if (p[2] == 0.0 && e.weight[2] > 0) CHECK(e.probability_mass == 0.0);
      by_lambda[e.lambda] += e.probability_mass;
      by_weight[e.weight] += e.probability_mass;
    }
    for (const auto& [lambda, prob] : irrep_measurement_distribution(ch, n)) {
      CHECK(std::abs(by_lambda[lambda] - prob) <= 1e-12);
    }
    for (const auto& [w, mass] : by_weight) {
      CHECK(mass == doctest::Approx(multinomial(w) * string_probability(p, w)).epsilon(1e-10));
    }
  }
}

TEST_CASE("annihilation counts") {
  auto all = [](const WeightVector&) { return true; };
  const AnnihilationCounts one = annihilation_counts(1, all);
  CHECK(one.total_in_span == 4.0);
  CHECK(one.non_annihilating == 4.0);
  for (int n = 2; n <= 14; ++n) {
    const AnnihilationCounts c = annihilation_counts(n, all);
    CHECK(c.total_in_span == std::pow(4.0, n));
    CHECK(c.non_annihilating == static_cast<double>(two_row_rank_bound(n)));
  }
  // Typical strings that do not annihilate the symmetric subspace thin out.
  const auto p = make_channel(FamilyKind::depolarizing, 0.1).probabilities();
  auto typical = [&](const WeightVector& w) { return is_strongly_typical(w, p, 0.05); };
  double prev = 1.0;
  for (int n = 8; n <= 30; ++n) {
    const AnnihilationCounts c = annihilation_counts(n, typical);
    if (c.total_in_span == 0.0) continue;
    const double frac = c.non_annihilating / c.total_in_span;
    CHECK(frac < prev);
    prev = frac;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("two-row rank bound from tableau counts") {
  for (int n = 1; n <= 8; ++n) {
    std::uint64_t expect = 0;
    for (const Partition& lambda : enumerate_partitions(n, 2)) {
      const Partition wide = Partition::make(lambda.parts(), 4);
      expect += syt_count(lambda.parts()) * ssyt_count(wide);
    }
    CHECK(two_row_rank_bound(n) == expect);
  }
  CHECK(two_row_rank_bound(1) == 4);
  CHECK(two_row_rank_bound(3) == 60);
}

TEST_CASE("complementary rank on symmetric inputs") {
  auto rng = test::rng_for(73);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const FamilyKind f = static_cast<FamilyKind>(trial % 3);
      const PauliChannel ch = make_channel(f, test::random_p(rng, f));
      const RankCheck rc = complementary_rank_check(test::random_input(rng, n), ch);
      CHECK(rc.two_row_bound == two_row_rank_bound(n));
      CHECK(rc.observed_rank >= 1);
      CHECK(rc.holds());
    }
  }
  const RankCheck one = complementary_rank_check(test::random_input(rng, 1), make_channel(FamilyKind::depolarizing, 0.1));
  CHECK(one.observed_rank <= 4);
  CHECK(one.two_row_bound == 4);
  // Without the symmetric restriction the bound fails.
  const RankCheck mixed =
      complementary_rank_check(Eigen::MatrixXcd::Identity(8, 8) / 8.0, make_channel(FamilyKind::depolarizing, 0.1));
  CHECK(mixed.observed_rank == 64);
  CHECK_FALSE(mixed.holds());
}

TEST_CASE("strong typicality") {
  const std::array<double, 4> d{0.7, 0.1, 0.1, 0.1};
  CHECK(is_strongly_typical(WeightVector::make(7, 1, 1, 1), d, 1e-6));
  CHECK_FALSE(is_strongly_typical(WeightVector::make(10, 0, 0, 0), d, 0.05));
  CHECK(is_strongly_typical(WeightVector::make(0, 0, 0, 10), d, 1.0));
  // Boundary classes count as typical.
  CHECK(is_strongly_typical(WeightVector::make(13, 3, 2, 2), d, 0.05));
  CHECK_THROWS(is_strongly_typical(WeightVector::make(1, 0, 0, 0), d, 0.0));
}

TEST_CASE("typical set statistics") {
  for (FamilyKind f : {FamilyKind::depolarizing, FamilyKind::two_pauli}) {
    const TypicalSetStats s = typical_set_stats(make_channel(f, 0.1), 6, 1.0);
    CHECK(s.mass == doctest::Approx(1.0));
    CHECK(s.count == std::pow(f == FamilyKind::two_pauli ? 3.0 : 4.0, 6));
  }
  // Against enumeration of every string at n = 6.
  const PauliChannel ch = PauliChannel::make(0.6, 0.2, 0.15, 0.05);
  const auto p = ch.probabilities();
  for (double delta : {0.05, 0.1, 0.2}) {
    double mass = 0.0;
    double count = 0.0;
    for (int s = 0; s < 4096; ++s) {
      std::array<int, 4> w{};
      double prob = 1.0;
      for (int k = 0; k < 6; ++k) {
        const int j = (s >> (2 * k)) & 3;
        ++w[static_cast<std::size_t>(j)];
        prob *= p[static_cast<std::size_t>(j)];
      }
      bool ok = true;
      for (int j = 0; j < 4; ++j) ok = ok && std::abs(w[static_cast<std::size_t>(j)] / 6.0 - p[static_cast<std::size_t>(j)]) <= delta + 1e-12;
      if (ok) {
        mass += prob;
        count += 1.0;
      }
    }
    const TypicalSetStats st = typical_set_stats(ch, 6, delta);
    CHECK(st.mass == doctest::Approx(mass).epsilon(1e-12));
    CHECK(st.count == count);
  }
}

TEST_CASE("typical mass grows and the windows hold") {
  const PauliChannel ch = make_channel(FamilyKind::depolarizing, 0.1);
  const auto p = ch.probabilities();
  double prev = 0.0;
  for (int n : {10, 20, 40, 80, 160}) {
    const TypicalSetStats s = typical_set_stats(ch, n, 0.05);
    CHECK(s.mass > prev);
    prev = s.mass;
    CHECK(s.min_prob * s.count <= s.mass * (1 + 1e-12));
    CHECK(s.mass <= s.max_prob * s.count * (1 + 1e-12));
  }
  const std::vector<int> ns{10, 20, 40, 80};
  const TypicalityFit fit = fit_typicality_constants(ch, 0.05, ns);
  const double h = shannon_bits(p);
  CHECK(fit.entropy == doctest::Approx(h));
  double worst = 0.0;
  for (double q : p) worst += -std::log2(q);
  CHECK(fit.c_equipart <= worst);
  for (int n : ns) {
    const TypicalSetStats s = typical_set_stats(ch, n, 0.05);
    CHECK(std::abs(std::log2(s.count) / n - h) <= fit.c_count * 0.05 * (1 + 1e-12));
    CHECK(std::abs(-std::log2(s.min_prob) / n - h) <= fit.c_equipart * 0.05 * (1 + 1e-12));
    CHECK(std::abs(-std::log2(s.max_prob) / n - h) <= fit.c_equipart * 0.05 * (1 + 1e-12));
  }
}
