#include "archk/gp.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include <Eigen/Cholesky>

#include "archk/errors.hpp"

namespace archk {

JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    raise(Errc::DimensionMismatch, "need a non-empty square matrix");
  }

  JitteredCholesky out;
  const auto attempt = [&matrix, &out](double jitter) {
    Eigen::MatrixXd regularized = matrix;
    regularized.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() != Eigen::Success) return false;
    out.lower = llt.matrixL();
    out.jitter = jitter;
    return true;
  };

  if (attempt(0.0)) return out;
  const double mean_diag = matrix.diagonal().mean();
  if (mean_diag > 0.0 && std::isfinite(mean_diag)) {
    for (int exponent = -10; exponent <= -4; ++exponent) {
      if (attempt(std::pow(10.0, exponent) * mean_diag)) return out;
    }
  }
  raise(Errc::NotFactorizable, "matrix is not positive definite even with jitter");
}

GpModel GpModel::fit(KernelSpec spec, const Dataset& data, double noise_variance) {
  const std::size_t n = data.configs.size();
  if (n == 0) raise(Errc::EmptyInput, "need at least one observation");
  if (static_cast<std::size_t>(data.targets.size()) != n) {
    raise(Errc::DimensionMismatch, "configs and targets differ in length");
  }
  for (Eigen::Index i = 0; i < data.targets.size(); ++i) {
    if (!std::isfinite(data.targets[i])) {
      raise(Errc::ValueOutOfBounds, "targets must be finite");
    }
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    raise(Errc::InvalidHyperparameter, "noise variance must be non-negative and finite");
  }

  GpModel model(std::move(spec), noise_variance);
  Eigen::MatrixXd regularized = gram(model.spec_, data.configs).entries;
  regularized.diagonal().array() += noise_variance;

  JitteredCholesky chol = jittered_cholesky(regularized);
  model.configs_ = data.configs;
  model.lower_ = std::move(chol.lower);
  model.jitter_ = chol.jitter;

  const Eigen::VectorXd half = model.lower_.triangularView<Eigen::Lower>().solve(data.targets);
  model.lml_ = -0.5 * half.squaredNorm() - model.lower_.diagonal().array().log().sum() -
               0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  model.alpha_ = model.lower_.transpose().triangularView<Eigen::Upper>().solve(half);
  return model;
}

Prediction GpModel::predict(const std::vector<Config>& queries) const {
  Prediction out;
  const std::size_t m = queries.size();
  out.mean.resize(static_cast<Eigen::Index>(m));
  out.variance.resize(static_cast<Eigen::Index>(m));
  if (m == 0) return out;

  const Eigen::MatrixXd kx = cross_gram(spec_, configs_, queries);  // N x M
  out.mean = kx.transpose() * alpha_;
  const Eigen::MatrixXd v = lower_.triangularView<Eigen::Lower>().solve(kx);
  for (std::size_t q = 0; q < m; ++q) {
    const double prior = k_combined(spec_, queries[q], queries[q]);
    double var = prior - v.col(static_cast<Eigen::Index>(q)).squaredNorm();
    if (var < 0.0) {
      var = 0.0;
      ++out.clamped_count;
    }
    out.variance[static_cast<Eigen::Index>(q)] = var;
  }
  return out;
}

TuneResult tune(const SpacePtr& space, const Dataset& data, std::size_t budget,
                std::uint64_t seed, Combination combination) {
  if (!space) raise(Errc::EmptyInput, "need a space");
  if (budget == 0) raise(Errc::EmptyInput, "need a positive budget");

  Rng rng(seed);
  std::optional<TuneResult> best;
  std::size_t failed = 0;
  for (std::size_t candidate = 0; candidate < budget; ++candidate) {
    // Draw order is part of the reproducibility contract: per dimension in
    // declaration order gamma, rho, lambda, sigma; then the noise variance.
    std::map<std::string, DimKernel, std::less<>> per_dim;
    for (std::size_t i = 0; i < space->size(); ++i) {
      DimKernel dk;
      dk.gamma = rng.uniform();
      dk.rho = rng.uniform();
      ExponentiatedQuadratic eq;
      eq.lambda = rng.log_uniform(1e-2, 1e2);
      eq.sigma = rng.log_uniform(1e-1, 1e1);
      dk.base = eq;
      per_dim.emplace(space->dimension(i).id, dk);
    }
    const double noise = rng.log_uniform(1e-6, 1.0);

    KernelSpec spec = KernelSpec::create(space, std::move(per_dim), combination);
    double lml = 0.0;
    try {
      lml = GpModel::fit(spec, data, noise).log_marginal_likelihood();
    } catch (const Error& e) {
      if (e.code() != Errc::NotFactorizable) throw;
      ++failed;
      continue;
    }
    if (!best || lml > best->lml) {
      best = TuneResult{std::move(spec), noise, lml, candidate, budget, 0};
    }
  }

  if (!best) raise(Errc::AllCandidatesFailed, "no candidate could be factorized");
  best->failed = failed;
  return std::move(*best);
}

}  // namespace archk
