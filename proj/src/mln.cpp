#include <algorithm>
#include <cmath>
#include <limits>

#include "vsearch/detection.hpp"
#include "vsearch/errors.hpp"
#include "vsearch/mln.hpp"

namespace vsearch {

namespace {

constexpr double kSumTolerance = 1e-9;

void check_distribution(std::span<const double> p, const char* what) {
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " has a negative or non-finite entry");
    s += v;
  }
  if (std::abs(s - 1.0) > kSumTolerance) throw DomainError(std::string(what) + " does not sum to 1");
}

}  // namespace

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) throw DomainError("softmax of an empty vector");
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - top);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return out;
}

MixtureOutput::MixtureOutput(std::vector<double> pi, std::vector<std::vector<double>> mu)
    : pi_(std::move(pi)), mu_(std::move(mu)) {
  if (pi_.empty()) throw DomainError("mixture output needs J >= 1");
  if (mu_.size() != pi_.size()) throw DomainError("mu must have one row per mixture");
  check_distribution(pi_, "pi");
  const std::size_t c = mu_.front().size();
  if (c < 2) throw DomainError("mixture output needs C >= 2 classes");
  for (const auto& row : mu_) {
    if (row.size() != c) throw DomainError("mu rows differ in length");
    check_distribution(row, "mu row");
  }
}

MixtureOutput MixtureOutput::from_logits(std::span<const double> mixture_scores,
                                         const std::vector<std::vector<double>>& logits) {
  std::vector<std::vector<double>> mu;
  mu.reserve(logits.size());
  for (const auto& row : logits) mu.push_back(softmax(row));
  return MixtureOutput(softmax(mixture_scores), std::move(mu));
}

double epistemic(const MixtureOutput& m) {
  const auto& pi = m.pi();
  const auto& mu = m.mu();
  std::vector<double> mean(m.classes(), 0.0);
  for (std::size_t j = 0; j < pi.size(); ++j)
    for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += pi[j] * mu[j][c];
  double out = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    double sq = 0.0;
    for (std::size_t c = 0; c < mean.size(); ++c) {
      const double d = mu[j][c] - mean[c];
      sq += d * d;
    }
    out += pi[j] * sq;
  }
  return out;
}

double aleatoric(const MixtureOutput& m) {
  double out = 0.0;
  for (std::size_t j = 0; j < m.mixtures(); ++j) {
    double h = 0.0;
    for (double p : m.mu()[j])
      if (p > 0.0) h -= p * std::log(p);
    out += m.pi()[j] * h;
  }
  return out;
}

double mln_loss(const MixtureOutput& m, std::size_t c_star) {
  if (c_star >= m.classes()) throw DomainError("c_star out of range");
  double out = 0.0;
  for (std::size_t j = 0; j < m.mixtures(); ++j) {
    const double p = m.mu()[j][c_star];
    if (p <= 0.0) throw DegenerateLossError("mixture " + std::to_string(j) + " assigns zero mass to the true class");
    out += m.pi()[j] * -std::log(p);
  }
  return out;
}

UncertaintyStats calibrate(std::span<const double> samples) {
  if (samples.size() < 2) throw CalibrationError("calibration needs at least two samples");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(samples.size() - 1);
  if (!(var > 0.0)) throw CalibrationError("calibration samples have zero variance");
  return {mean, std::sqrt(var), samples.size()};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

bool exceeds_uncertainty_quantile(double total_uncert, const UncertaintyStats& stats) {
  return normal_cdf((total_uncert - stats.mean) / stats.std) > kRelabelQuantile;
}

ClassLabel relabel_unknown(ClassLabel label, double total_uncert, const UncertaintyStats& stats) {
  return exceeds_uncertainty_quantile(total_uncert, stats) ? ClassLabel::unknown() : label;
}

}  // namespace vsearch
