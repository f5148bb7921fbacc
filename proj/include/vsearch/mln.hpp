#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vsearch {

/// Output of a mixture-of-logits classification head: J mixture weights and a
/// J x C matrix of per-mixture class probabilities (softmaxed logits).
class MixtureOutput {
 public:
  MixtureOutput() = default;
  /// Throws DomainError unless pi and every row of mu are distributions.
  MixtureOutput(std::vector<double> pi, std::vector<std::vector<double>> mu);

  /// Softmax of mixture scores and of each logit row.
  static MixtureOutput from_logits(std::span<const double> mixture_scores,
                                   const std::vector<std::vector<double>>& logits);

  std::size_t mixtures() const { return pi_.size(); }
  std::size_t classes() const { return mu_.empty() ? 0 : mu_.front().size(); }
  const std::vector<double>& pi() const { return pi_; }
  const std::vector<std::vector<double>>& mu() const { return mu_; }

  friend bool operator==(const MixtureOutput&, const MixtureOutput&) = default;

 private:
  std::vector<double> pi_;
  std::vector<std::vector<double>> mu_;
};

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> scores);

/// Disagreement of mixtures: sum_j pi_j sum_c (mu_j^c - sum_m pi_m mu_m^c)^2.
double epistemic(const MixtureOutput& m);

/// Expected per-mixture entropy: sum_j pi_j H(mu_j), with 0 log 0 = 0.
double aleatoric(const MixtureOutput& m);

inline double total_uncertainty(const MixtureOutput& m) { return epistemic(m) + aleatoric(m); }

/// Mixture-weighted cross entropy against class c_star. Throws
/// DegenerateLossError when some mu_j^(c_star) is zero.
double mln_loss(const MixtureOutput& m, std::size_t c_star);

struct UncertaintyStats {
  double mean = 0.0;
  double std = 1.0;
  std::size_t n = 0;
};

/// Sample mean and (n-1) standard deviation. Throws CalibrationError for
/// fewer than two samples or zero variance.
UncertaintyStats calibrate(std::span<const double> samples);

/// Standard normal CDF via erfc.
double normal_cdf(double z);

inline constexpr double kRelabelQuantile = 0.9;

/// True when the calibrated CDF of total_uncert exceeds 0.9.
bool exceeds_uncertainty_quantile(double total_uncert, const UncertaintyStats& stats);

}  // namespace vsearch
