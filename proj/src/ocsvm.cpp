#include "ocal/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ocal/error.hpp"

namespace ocal {

DenseQ::DenseQ(Matrix q) : q_(std::move(q)) {
  if (q_.rows() != q_.cols()) throw ContractError("Q must be square");
}

double DenseQ::diag(std::size_t i) const {
  return q_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
}

std::span<const double> DenseQ::row(std::size_t i) {
  return {q_.data() + i * size(), size()};
}

RbfQ::RbfQ(const Matrix& x, const KernelParams& params, std::size_t cache_bytes)
    : x_(x),
      params_(params),
      max_rows_(std::max<std::size_t>(2, cache_bytes / (sizeof(double) * std::max<std::size_t>(1, size())))),
      rows_(size()),
      where_(size(), lru_.end()) {}

std::span<const double> RbfQ::row(std::size_t i) {
  if (where_[i] != lru_.end()) {
    lru_.splice(lru_.begin(), lru_, where_[i]);
    return rows_[i];
  }
  if (lru_.size() >= max_rows_) {
    const std::size_t victim = lru_.back();
    lru_.pop_back();
    where_[victim] = lru_.end();
    std::vector<double>().swap(rows_[victim]);
  }
  const std::size_t n = size();
  const auto d = static_cast<std::size_t>(x_.cols());
  std::vector<double>& r = rows_[i];
  r.resize(n);
  std::span<const double> xi(x_.data() + i * d, d);
  for (std::size_t j = 0; j < n; ++j) {
    r[j] = j == i ? 1.0 : rbf(xi, std::span<const double>(x_.data() + j * d, d), params_);
  }
  lru_.push_front(i);
  where_[i] = lru_.begin();
  return r;
}

DualSolution solve_one_class_dual(QMatrix& q, double upper, const SolverOptions& opts) {
  const std::size_t n = q.size();
  if (n == 0) throw ContractError("dual problem has no variables");
  if (!(upper * static_cast<double>(n) >= 1.0 - 1e-12)) {
    throw ConfigError("box bound " + std::to_string(upper) + " cannot reach sum(alpha) = 1 with " +
                      std::to_string(n) + " variables");
  }

  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  sol.gradient.assign(n, 0.0);
  auto& alpha = sol.alpha;
  auto& grad = sol.gradient;

  // Feasible start: fill coefficients to the bound in index order.
  double remaining = 1.0;
  for (std::size_t i = 0; i < n && remaining > 0.0; ++i) {
    alpha[i] = std::min(upper, remaining);
    remaining -= alpha[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == 0.0) continue;
    const auto qi = q.row(i);
    for (std::size_t t = 0; t < n; ++t) grad[t] += alpha[i] * qi[t];
  }

  constexpr double kTau = 1e-12;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  while (true) {
    // i: steepest ascent candidate among coefficients that can still grow.
    std::size_t i = n;
    double g_max = -kInf;
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha[t] < upper && -grad[t] > g_max) {
        g_max = -grad[t];
        i = t;
      }
    }
    double g_min = kInf;
    std::size_t j = n;
    double best_gain = kInf;
    if (i != n) {
      const auto qi = q.row(i);
      const double qii = q.diag(i);
      for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] <= 0.0) continue;
        g_min = std::min(g_min, -grad[t]);
        const double b = g_max + grad[t];
        if (b <= 0.0) continue;
        double a = qii + q.diag(t) - 2.0 * qi[t];
        if (a <= 0.0) a = kTau;
        const double gain = -(b * b) / a;
        if (gain < best_gain) {
          best_gain = gain;
          j = t;
        }
      }
    }
    sol.max_violation = (i == n || g_min == kInf) ? 0.0 : std::max(0.0, g_max - g_min);
    if (sol.max_violation < opts.tolerance || j == n) {
      sol.converged = sol.max_violation < opts.tolerance;
      break;
    }
    if (sol.updates >= opts.max_updates) break;

    // Move mass delta from j to i.
    const auto qi = q.row(i);
    const double qij = qi[j];
    double a = q.diag(i) + q.diag(j) - 2.0 * qij;
    if (a <= 0.0) a = kTau;
    double delta = (grad[j] - grad[i]) / a;
    bool i_at_bound = false;
    bool j_at_zero = false;
    if (delta >= upper - alpha[i]) {
      delta = upper - alpha[i];
      i_at_bound = true;
    }
    if (delta >= alpha[j]) {
      delta = alpha[j];
      j_at_zero = true;
      i_at_bound = false;
    }
    alpha[i] = i_at_bound ? upper : alpha[i] + delta;
    alpha[j] = j_at_zero ? 0.0 : alpha[j] - delta;

    std::vector<double> qi_copy(qi.begin(), qi.end());
    const auto qj = q.row(j);
    for (std::size_t t = 0; t < n; ++t) grad[t] += delta * (qi_copy[t] - qj[t]);
    ++sol.updates;
  }

  double obj = 0.0;
  for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * grad[t];
  sol.objective = 0.5 * obj;
  return sol;
}

OcsvmModel::OcsvmModel(Matrix sv, std::vector<double> alpha, double rho, KernelParams params,
                       double nu, std::size_t n_train)
    : sv_(std::move(sv)),
      alpha_(std::move(alpha)),
      rho_(rho),
      params_(params),
      nu_(nu),
      n_train_(n_train) {
  if (static_cast<std::size_t>(sv_.rows()) != alpha_.size()) {
    throw ContractError("support vector count does not match coefficient count");
  }
  if (alpha_.empty()) throw ContractError("model has no support vectors");
  if (!(nu_ > 0.0 && nu_ <= 1.0)) throw ConfigError("nu must lie in (0, 1]");
  if (!std::isfinite(rho_)) throw NumericError("non-finite offset rho");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ContractError("coefficients must be positive");
  }
}

double OcsvmModel::decision_value(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw ContractError("dimension mismatch: model has " + std::to_string(dim()) +
                        ", sample has " + std::to_string(x.size()));
  }
  const std::size_t d = dim();
  double s = 0.0;
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    s += alpha_[i] * rbf(x, std::span<const double>(sv_.data() + i * d, d), params_);
  }
  return rho_ - s;
}

std::vector<double> OcsvmModel::decision_values(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != dim()) {
    throw ContractError("dimension mismatch: model has " + std::to_string(dim()) +
                        ", samples have " + std::to_string(x.cols()));
  }
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    out[static_cast<std::size_t>(r)] =
        decision_value(std::span<const double>(x.data() + r * x.cols(), dim()));
  }
  return out;
}

nlohmann::json OcsvmModel::to_json() const {
  nlohmann::json sv = nlohmann::json::array();
  for (Eigen::Index r = 0; r < sv_.rows(); ++r) {
    sv.push_back(std::vector<double>(sv_.row(r).begin(), sv_.row(r).end()));
  }
  return {{"nu", nu_},       {"gamma", params_.gamma()}, {"rho", rho_},
          {"alpha", alpha_}, {"sv", std::move(sv)},       {"n_train", n_train_}};
}

OcsvmModel OcsvmModel::from_json(const nlohmann::json& j) {
  try {
    auto alpha = j.at("alpha").get<std::vector<double>>();
    const auto rows = j.at("sv").get<std::vector<std::vector<double>>>();
    const std::size_t d = rows.empty() ? 0 : rows.front().size();
    Matrix sv(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != d) throw ParseError("model JSON: ragged support vector rows");
      for (std::size_t c = 0; c < d; ++c) {
        sv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
    const std::size_t n_train = j.value("n_train", alpha.size());
    return OcsvmModel(std::move(sv), std::move(alpha), j.at("rho").get<double>(),
                      KernelParams(j.at("gamma").get<double>()), j.at("nu").get<double>(), n_train);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
}

OcsvmFit fit_ocsvm(const Matrix& x, double nu, const KernelParams& params,
                   const SolverOptions& opts) {
  if (!(nu > 0.0 && nu <= 1.0)) {
    throw ConfigError("nu must lie in (0, 1], got " + std::to_string(nu));
  }
  if (x.rows() == 0 || x.cols() == 0) throw ContractError("training set is empty");
  if (!x.allFinite()) throw NumericError("training set contains non-finite values");

  const auto n = static_cast<std::size_t>(x.rows());
  const double upper = 1.0 / (nu * static_cast<double>(n));
  RbfQ q(x, params);
  DualSolution dual = solve_one_class_dual(q, upper, opts);

  std::vector<std::size_t> sv_idx;
  double free_sum = 0.0;
  double all_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = dual.alpha[i];
    if (a <= kAlphaPruneThreshold) continue;
    sv_idx.push_back(i);
    all_sum += dual.gradient[i];
    if (a < upper - kAlphaPruneThreshold) {
      free_sum += dual.gradient[i];
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                    : all_sum / static_cast<double>(sv_idx.size());

  Matrix sv(static_cast<Eigen::Index>(sv_idx.size()), x.cols());
  std::vector<double> alpha;
  alpha.reserve(sv_idx.size());
  for (std::size_t k = 0; k < sv_idx.size(); ++k) {
    sv.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(sv_idx[k]));
    alpha.push_back(dual.alpha[sv_idx[k]]);
  }
  OcsvmModel model(std::move(sv), std::move(alpha), rho, params, nu, n);
  return {std::move(model), std::move(dual)};
}

}  // namespace ocal
