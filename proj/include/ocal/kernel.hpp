#pragma once

#include <span>

#include "ocal/dataset.hpp"

namespace ocal {

// Parameters of the Gaussian RBF kernel k(x, y) = exp(-gamma * |x - y|^2).
class KernelParams {
 public:
  explicit KernelParams(double gamma);

  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

// |x - y|^2. Above 64 dimensions the sum is Neumaier-compensated.
double squared_distance(std::span<const double> x, std::span<const double> y);

double rbf(std::span<const double> x, std::span<const double> y, const KernelParams& p);

// (i, j) -> rbf(X_i, Y_j). Rows of X and Y are samples.
Matrix gram(const Matrix& x, const Matrix& y, const KernelParams& p);

}  // namespace ocal
