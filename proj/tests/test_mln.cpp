#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "vsearch/detection.hpp"
#include "vsearch/errors.hpp"
#include "vsearch/mln.hpp"

using namespace vsearch;

namespace {

std::vector<double> random_dist(std::mt19937_64& gen, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  for (double& v : p) v = e(gen);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= s;
  return p;
}

MixtureOutput random_mixture(std::mt19937_64& gen, std::size_t J, std::size_t C) {
  std::vector<std::vector<double>> mu;
  for (std::size_t j = 0; j < J; ++j) mu.push_back(random_dist(gen, C));
  return MixtureOutput(random_dist(gen, J), mu);
}

}  // namespace

TEST_SUITE("mln") {
  TEST_CASE("mixture outputs must be distributions") {
    CHECK_THROWS_AS(MixtureOutput({0.5, 0.6}, {{0.5, 0.5}, {0.5, 0.5}}), DomainError);
    CHECK_THROWS_AS(MixtureOutput({1.0}, {{0.7, 0.7}}), DomainError);
    CHECK_THROWS_AS(MixtureOutput({1.0}, {{1.0}}), DomainError);  // C >= 2
    CHECK_THROWS_AS(MixtureOutput({0.5, 0.5}, {{0.5, 0.5}}), DomainError);
    CHECK_NOTHROW(MixtureOutput({1.0}, {{0.25, 0.75}}));
  }

  TEST_CASE("epistemic special cases") {
    CHECK(epistemic(MixtureOutput({1.0}, {{0.2, 0.3, 0.5}})) == 0.0);
    CHECK(epistemic(MixtureOutput({0.5, 0.5}, {{1.0, 0.0}, {0.0, 1.0}})) == doctest::Approx(0.5));
    CHECK(epistemic(MixtureOutput({0.2, 0.3, 0.5}, {{0.1, 0.9}, {0.1, 0.9}, {0.1, 0.9}})) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }

  TEST_CASE("epistemic vanishes only when weighted rows agree") {
    // A zero-weight row may differ without creating disagreement.
    CHECK(epistemic(MixtureOutput({1.0, 0.0}, {{0.3, 0.7}, {0.9, 0.1}})) == doctest::Approx(0.0));
    std::mt19937_64 gen(21);
    for (int k = 0; k < 200; ++k) CHECK(epistemic(random_mixture(gen, 2 + k % 4, 2 + k % 5)) > 0.0);
  }

  TEST_CASE("aleatoric special cases") {
    CHECK(aleatoric(MixtureOutput({0.4, 0.6}, {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}})) == 0.0);
    for (std::size_t c = 2; c < 10; ++c)
      CHECK(aleatoric(MixtureOutput({1.0}, {std::vector<double>(c, 1.0 / c)})) ==
            doctest::Approx(std::log(static_cast<double>(c))));
    CHECK(aleatoric(MixtureOutput({0.5, 0.5}, {{1.0, 0.0}, {0.5, 0.5}})) == doctest::Approx(0.5 * std::log(2.0)));
  }

  TEST_CASE("aleatoric lies between zero and ln C") {
    std::mt19937_64 gen(22);
    for (int k = 0; k < 300; ++k) {
      const std::size_t C = 2 + k % 6;
      const double a = aleatoric(random_mixture(gen, 1 + k % 5, C));
      CHECK(a >= 0.0);
      CHECK(a <= std::log(static_cast<double>(C)) + 1e-12);
    }
  }

  TEST_CASE("both uncertainties ignore how mixtures are ordered") {
    std::mt19937_64 gen(23);
    for (int k = 0; k < 100; ++k) {
      const MixtureOutput m = random_mixture(gen, 4, 3);
      std::vector<std::size_t> perm{0, 1, 2, 3};
      std::shuffle(perm.begin(), perm.end(), gen);
      std::vector<double> pi;
      std::vector<std::vector<double>> mu;
      for (std::size_t j : perm) pi.push_back(m.pi()[j]), mu.push_back(m.mu()[j]);
      const MixtureOutput p(pi, mu);
      CHECK(epistemic(p) == doctest::Approx(epistemic(m)));
      CHECK(aleatoric(p) == doctest::Approx(aleatoric(m)));
    }
  }

  TEST_CASE("uncertainties match the brute-force formulas") {
    std::mt19937_64 gen(24);
    for (int k = 0; k < 300; ++k) {
      const MixtureOutput m = random_mixture(gen, 1 + k % 6, 2 + k % 7);
      CHECK(std::abs(epistemic(m) - oracle::epistemic(m.pi(), m.mu())) <= 1e-9);
      CHECK(std::abs(aleatoric(m) - oracle::aleatoric(m.pi(), m.mu())) <= 1e-9);
      const std::size_t c = k % m.classes();
      CHECK(std::abs(mln_loss(m, c) - oracle::mln_loss(m.pi(), m.mu(), c)) <= 1e-9);
    }
  }

  TEST_CASE("mixture loss special cases") {
    CHECK(mln_loss(MixtureOutput({1.0}, {{0.0, 1.0, 0.0}}), 1) == 0.0);
    CHECK(mln_loss(MixtureOutput({1.0}, {std::vector<double>(4, 0.25)}), 2) == doctest::Approx(std::log(4.0)));
    const MixtureOutput m({0.3, 0.7}, {{0.5, 0.5, 0.0}, {0.25, 0.5, 0.25}});
    CHECK(mln_loss(m, 0) == doctest::Approx(0.3 * std::log(2.0) + 0.7 * std::log(4.0)));
    CHECK(mln_loss(m, 0) == doctest::Approx(1.1783).epsilon(1e-4));
    CHECK_THROWS_AS(mln_loss(m, 2), DegenerateLossError);
    CHECK_THROWS_AS(mln_loss(m, 3), DomainError);
  }

  TEST_CASE("from_logits softmaxes weights and rows") {
    const std::vector<double> scores{0.0, 0.0};
    const MixtureOutput m = MixtureOutput::from_logits(scores, {{0.0, 0.0}, {std::log(3.0), 0.0}});
    CHECK(m.pi()[0] == doctest::Approx(0.5));
    CHECK(m.mu()[1][0] == doctest::Approx(0.75));
  }

  TEST_CASE("calibration statistics") {
    const auto s = calibrate(std::vector<double>{1.0, 1.0, 3.0, 3.0});
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.std == doctest::Approx(std::sqrt(4.0 / 3.0)));
    CHECK(s.std == doctest::Approx(1.1547).epsilon(1e-4));
    CHECK(s.n == 4);
    const auto t = calibrate(std::vector<double>{0.0, 2.0});
    CHECK(t.mean == doctest::Approx(1.0));
    CHECK(t.std == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(calibrate(std::vector<double>{4.0, 4.0, 4.0}), CalibrationError);
    CHECK_THROWS_AS(calibrate(std::vector<double>{4.0}), CalibrationError);
  }

  TEST_CASE("relabeling above the calibrated quantile") {
    const UncertaintyStats stats{1.0, 0.5, 10};
    const ClassLabel sofa = ClassLabel::known(1);
    CHECK(relabel_unknown(sofa, 1.0, stats) == sofa);
    CHECK(normal_cdf(2.0) == doctest::Approx(0.97725).epsilon(1e-5));
    CHECK(relabel_unknown(sofa, 2.0, stats).is_unknown());
    CHECK(normal_cdf(1.0) == doctest::Approx(0.84134).epsilon(1e-5));
    CHECK(relabel_unknown(sofa, 1.5, stats) == sofa);
  }

  TEST_CASE("relabeling is monotone in total uncertainty") {
    const UncertaintyStats stats{0.8, 0.3, 50};
    bool triggered = false;
    for (double u = 0.0; u < 3.0; u += 0.001) {
      const bool now = exceeds_uncertainty_quantile(u, stats);
      if (triggered) CHECK(now);
      triggered = triggered || now;
    }
    CHECK(triggered);
  }
}
