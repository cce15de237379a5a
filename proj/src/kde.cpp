#include "ocal/kde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ocal/error.hpp"

namespace ocal {

KdeModel::KdeModel(Matrix points, std::vector<double> bandwidth)
    : points_(std::move(points)), bandwidth_(std::move(bandwidth)), log_norm_(0.0) {
  if (points_.rows() < 1) throw ContractError("KDE needs at least one point");
  if (static_cast<std::size_t>(points_.cols()) != bandwidth_.size()) {
    throw ContractError("KDE bandwidth length does not match dimension");
  }
  for (double h : bandwidth_) {
    if (!(h > 0.0)) throw ContractError("KDE bandwidths must be positive");
    log_norm_ -= std::log(h * std::sqrt(2.0 * std::numbers::pi));
  }
  log_norm_ -= std::log(static_cast<double>(points_.rows()));
}

double KdeModel::log_density(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw ContractError("dimension mismatch: KDE has " + std::to_string(dim()) + ", sample has " +
                        std::to_string(x.size()));
  }
  const auto n = static_cast<std::size_t>(points_.rows());
  const std::size_t d = dim();
  std::vector<double> expo(n);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = points_.data() + i * d;
    double e = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double z = (x[j] - p[j]) / bandwidth_[j];
      e -= 0.5 * z * z;
    }
    expo[i] = e;
    top = std::max(top, e);
  }
  double s = 0.0;
  for (double e : expo) s += std::exp(e - top);
  return log_norm_ + top + std::log(s);
}

double KdeModel::density(std::span<const double> x) const { return std::exp(log_density(x)); }

KdeModel fit_kde(const Matrix& x) {
  if (x.rows() < 1 || x.cols() < 1) throw ContractError("KDE needs a non-empty sample");
  const auto n = static_cast<double>(x.rows());
  const double factor = 1.06 * std::pow(n, -0.2);
  std::vector<double> h(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double sd = 0.0;
    if (x.rows() > 1) {
      const double mean = x.col(j).mean();
      sd = std::sqrt((x.col(j).array() - mean).square().sum() / (n - 1.0));
    }
    h[static_cast<std::size_t>(j)] = sd > 0.0 ? std::max(factor * sd, kMinBandwidth) : kMinBandwidth;
  }
  return KdeModel(x, std::move(h));
}

double posterior(double p_t, double p_u, double delta) {
  const double p = delta * p_t / std::max(p_u, 1e-12);
  return std::clamp(p, 0.0, 1.0);
}

double expected_margin_score(double p_t, double p_u) {
  double s = 0.0;
  for (double delta : kPriorGrid) s += std::abs(2.0 * posterior(p_t, p_u, delta) - 1.0);
  return s / static_cast<double>(kPriorGrid.size());
}

namespace {

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

}  // namespace

double entropy_score(double p_t, double p_u) {
  double s = 0.0;
  for (double delta : kPriorGrid) s += binary_entropy(posterior(p_t, p_u, delta));
  return s / static_cast<double>(kPriorGrid.size());
}

}  // namespace ocal
