#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "archk/kernel.hpp"
#include "archk/rng.hpp"
#include "archk/space.hpp"

namespace archk {

struct Dataset {
  std::vector<Config> configs;
  Eigen::VectorXd targets;
};

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;      // clamped at zero from below
  std::size_t clamped_count = 0; // how many variances the clamp touched
};

// Cholesky of A + jitter*I. Starts with no jitter; on failure escalates
// from 1e-10*mean(diag(A)) by factors of 10 up to 1e-4*mean(diag(A)).
struct JitteredCholesky {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};
JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& matrix);

// Exact GP regression model. Immutable once fitted.
class GpModel {
 public:
  static GpModel fit(KernelSpec spec, const Dataset& data, double noise_variance);

  Prediction predict(const std::vector<Config>& queries) const;
  double log_marginal_likelihood() const noexcept { return lml_; }

  const KernelSpec& spec() const noexcept { return spec_; }
  double noise_variance() const noexcept { return noise_variance_; }
  double jitter() const noexcept { return jitter_; }
  std::size_t train_size() const noexcept { return configs_.size(); }
  const Eigen::MatrixXd& cholesky_lower() const noexcept { return lower_; }

 private:
  GpModel(KernelSpec spec, double noise_variance) noexcept
      : spec_(std::move(spec)), noise_variance_(noise_variance) {}

  KernelSpec spec_;
  double noise_variance_ = 0.0;
  std::vector<Config> configs_;
  Eigen::MatrixXd lower_;   // L with L*L^T = K + noise*I + jitter*I
  Eigen::VectorXd alpha_;   // (K + noise*I + jitter*I)^{-1} y
  double jitter_ = 0.0;
  double lml_ = 0.0;
};

struct TuneResult {
  KernelSpec spec;
  double noise_variance = 0.0;
  double lml = 0.0;
  std::size_t candidate_index = 0;  // which draw won (0-based)
  std::size_t evaluated = 0;
  std::size_t failed = 0;           // candidates that could not be factorized
};

// Random-search hyperparameter tuning, maximizing the log marginal
// likelihood. Per dimension: gamma, rho uniform on [0,1]; length scale
// log-uniform on [1e-2, 1e2]; output scale log-uniform on [1e-1, 1e1].
// Noise variance log-uniform on [1e-6, 1]. Base kernel is exponentiated
// quadratic; ties keep the earlier candidate.
TuneResult tune(const SpacePtr& space, const Dataset& data, std::size_t budget,
                std::uint64_t seed, Combination combination = Combination::Product);

}  // namespace archk
