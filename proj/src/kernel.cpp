#include "ocal/kernel.hpp"

#include <cmath>
#include <string>

#include "ocal/error.hpp"

namespace ocal {

KernelParams::KernelParams(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ContractError("kernel gamma must be positive and finite, got " + std::to_string(gamma));
  }
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()));
  }
  const std::size_t d = x.size();
  if (d <= 64) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double t = x[j] - y[j];
      s += t * t;
    }
    return s;
  }
  double s = 0.0;
  double c = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double t = (x[j] - y[j]) * (x[j] - y[j]);
    const double u = s + t;
    c += std::abs(s) >= std::abs(t) ? (s - u) + t : (t - u) + s;
    s = u;
  }
  return s + c;
}

double rbf(std::span<const double> x, std::span<const double> y, const KernelParams& p) {
  return std::exp(-p.gamma() * squared_distance(x, y));
}

Matrix gram(const Matrix& x, const Matrix& y, const KernelParams& p) {
  if (x.cols() != y.cols()) {
    throw ContractError("dimension mismatch: " + std::to_string(x.cols()) + " vs " +
                        std::to_string(y.cols()));
  }
  const auto d = static_cast<std::size_t>(x.cols());
  Matrix k(x.rows(), y.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::span<const double> xi(x.data() + i * x.cols(), d);
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      k(i, j) = rbf(xi, std::span<const double>(y.data() + j * y.cols(), d), p);
    }
  }
  return k;
}

}  // namespace ocal
