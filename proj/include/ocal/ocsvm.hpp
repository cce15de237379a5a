#pragma once

#include <cstddef>
#include <list>
#include <span>
#include <vector>

#include <json.hpp>

#include "ocal/dataset.hpp"
#include "ocal/kernel.hpp"

namespace ocal {

// Row access to a symmetric PSD matrix Q for the dual solver.
class QMatrix {
 public:
  virtual ~QMatrix() = default;
  virtual std::size_t size() const = 0;
  virtual double diag(std::size_t i) const = 0;
  // The returned span stays valid until the next call to row().
  virtual std::span<const double> row(std::size_t i) = 0;
};

// Q given explicitly (tests, small problems).
class DenseQ final : public QMatrix {
 public:
  explicit DenseQ(Matrix q);
  std::size_t size() const override { return static_cast<std::size_t>(q_.rows()); }
  double diag(std::size_t i) const override;
  std::span<const double> row(std::size_t i) override;

 private:
  Matrix q_;
};

// Q_ij = rbf(x_i, x_j), rows computed on demand and kept in an LRU cache.
class RbfQ final : public QMatrix {
 public:
  RbfQ(const Matrix& x, const KernelParams& params, std::size_t cache_bytes = std::size_t{256} << 20);
  std::size_t size() const override { return static_cast<std::size_t>(x_.rows()); }
  double diag(std::size_t) const override { return 1.0; }
  std::span<const double> row(std::size_t i) override;

 private:
  const Matrix& x_;
  KernelParams params_;
  std::size_t max_rows_;
  std::vector<std::vector<double>> rows_;
  std::list<std::size_t> lru_;
  std::vector<std::list<std::size_t>::iterator> where_;
};

struct SolverOptions {
  double tolerance = 1e-6;             // on the maximal KKT violation
  std::size_t max_updates = 10'000'000;
};

struct DualSolution {
  std::vector<double> alpha;
  std::vector<double> gradient;  // Q alpha
  double objective = 0.0;        // 0.5 alpha' Q alpha
  double max_violation = 0.0;    // max_{a_i<C} -G_i - min_{a_j>0} -G_j
  std::size_t updates = 0;
  bool converged = false;
};

// Minimises 0.5 a'Qa subject to 0 <= a_i <= upper and sum(a) = 1 with
// two-variable working-set descent (maximal-gain pair selection). Ties in
// the selection go to the lowest index.
DualSolution solve_one_class_dual(QMatrix& q, double upper, const SolverOptions& opts = {});

// Trained nu-one-class SVM. Decision values follow the convention
// DV(x) = rho - sum_i alpha_i k(x, sv_i): negative inside the learned region,
// positive outside.
class OcsvmModel {
 public:
  OcsvmModel(Matrix sv, std::vector<double> alpha, double rho, KernelParams params, double nu,
             std::size_t n_train);

  const Matrix& support_vectors() const { return sv_; }
  const std::vector<double>& alpha() const { return alpha_; }
  double rho() const { return rho_; }
  const KernelParams& params() const { return params_; }
  double nu() const { return nu_; }
  std::size_t n_train() const { return n_train_; }
  std::size_t dim() const { return static_cast<std::size_t>(sv_.cols()); }

  double decision_value(std::span<const double> x) const;
  std::vector<double> decision_values(const Matrix& x) const;
  // Outlier side iff DV > 0.
  bool is_outlier(std::span<const double> x) const { return decision_value(x) > 0.0; }

  nlohmann::json to_json() const;
  static OcsvmModel from_json(const nlohmann::json& j);

 private:
  Matrix sv_;
  std::vector<double> alpha_;
  double rho_;
  KernelParams params_;
  double nu_;
  std::size_t n_train_;
};

struct OcsvmFit {
  OcsvmModel model;
  DualSolution dual;
};

inline constexpr double kAlphaPruneThreshold = 1e-9;

// Trains on the rows of x. Coefficients at or below kAlphaPruneThreshold are
// dropped; rho is the mean of sum_j alpha_j k(x_i, x_j) over free support
// vectors, or over all support vectors when none is free.
OcsvmFit fit_ocsvm(const Matrix& x, double nu, const KernelParams& params,
                   const SolverOptions& opts = {});

inline OcsvmModel train(const Matrix& x, double nu, const KernelParams& params) {
  return fit_ocsvm(x, nu, params).model;
}

}  // namespace ocal
