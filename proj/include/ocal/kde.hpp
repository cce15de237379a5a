#pragma once

#include <array>
#include <span>
#include <vector>

#include "ocal/dataset.hpp"

namespace ocal {

// Product-Gaussian kernel density estimate with one bandwidth per dimension.
class KdeModel {
 public:
  KdeModel(Matrix points, std::vector<double> bandwidth);

  const Matrix& points() const { return points_; }
  const std::vector<double>& bandwidth() const { return bandwidth_; }
  std::size_t dim() const { return bandwidth_.size(); }

  double density(std::span<const double> x) const;
  // log density(x), computed with log-sum-exp so it stays finite where the
  // density itself underflows.
  double log_density(std::span<const double> x) const;

 private:
  Matrix points_;
  std::vector<double> bandwidth_;
  double log_norm_;  // -sum_j log(h_j sqrt(2 pi)) - log n
};

inline constexpr double kMinBandwidth = 1e-6;

// Silverman's rule per dimension: h_j = 1.06 * sd_j * n^(-1/5), floored at 1e-6.
KdeModel fit_kde(const Matrix& x);

// Prior grid {0.1, 0.2, ..., 1.0} over the target-class proportion.
inline constexpr std::array<double, 10> kPriorGrid{0.1, 0.2, 0.3, 0.4, 0.5,
                                                   0.6, 0.7, 0.8, 0.9, 1.0};

// clip(delta * p_t / max(p_u, 1e-12), 0, 1).
double posterior(double p_t, double p_u, double delta);

// Mean over the prior grid of |2 posterior - 1|. Low = uncertain.
double expected_margin_score(double p_t, double p_u);

// Mean over the prior grid of the binary entropy of the posterior. High = uncertain.
double entropy_score(double p_t, double p_u);

}  // namespace ocal
