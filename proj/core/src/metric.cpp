#include "archk/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "archk/errors.hpp"

namespace archk {

namespace {

void check_unit_range(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    raise(Errc::InvalidHyperparameter, std::string(name) + " must lie in [0,1]");
  }
}

void check_params(const DimMetricParams& params) {
  check_unit_range(params.gamma, "gamma");
  check_unit_range(params.rho, "rho");
  check_unit_range(params.omega, "omega");
}

double require_real(const RealPoint& point, const RealBounded& bounds) {
  if (!point.value) raise(Errc::MissingValue, "active point carries no value");
  if (!(*point.value >= bounds.lower && *point.value <= bounds.upper)) {
    raise(Errc::ValueOutOfBounds, "point value lies outside the dimension bounds");
  }
  return *point.value;
}

std::size_t require_cat(const CatPoint& point, std::size_t m) {
  if (!point.index) raise(Errc::MissingValue, "active point carries no category");
  if (*point.index >= m) raise(Errc::UnknownCategory, "category index out of range");
  return *point.index;
}

}  // namespace

double omega(const ParamSpace& space, const GammaMap& gammas, std::string_view id) {
  const std::size_t index = space.index_of(id);
  const auto anc = space.ancestor_indices(index);
  std::vector<std::size_t> scope(anc.begin(), anc.end());
  scope.push_back(index);
  std::sort(scope.begin(), scope.end());

  double product = 1.0;
  for (const std::size_t j : scope) {
    const std::string& jid = space.dimension(j).id;
    const auto it = gammas.find(jid);
    if (it == gammas.end()) {
      raise(Errc::MissingGamma, "no gamma for dimension '" + jid + "'");
    }
    if (!(it->second >= 0.0 && it->second <= 1.0)) {
      raise(Errc::GammaOutOfRange, "gamma for '" + jid + "' must lie in [0,1]");
    }
    product *= it->second;
  }
  return product;
}

double dist_real(const DimMetricParams& params, const RealBounded& bounds,
                 const RealPoint& a, const RealPoint& b) {
  check_params(params);
  if (!a.active && !b.active) return 0.0;
  if (a.active != b.active) {
    require_real(a.active ? a : b, bounds);
    return params.omega;
  }
  const double x = require_real(a, bounds);
  const double y = require_real(b, bounds);
  // |x - y| keeps the angle in [0, pi/2] and the result bitwise symmetric;
  // omega multiplies last so the distance is exactly linear in it.
  const double angle =
      std::numbers::pi * params.rho * std::abs(x - y) / (2.0 * (bounds.upper - bounds.lower));
  return params.omega * (2.0 * std::sin(angle));
}

Eigen::VectorXd embed_real(const DimMetricParams& params, const RealBounded& bounds,
                           const RealPoint& point) {
  check_params(params);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2);
  if (!point.active) return out;
  const double x = require_real(point, bounds);
  const double theta =
      std::numbers::pi * params.rho * (x - bounds.lower) / (bounds.upper - bounds.lower);
  out[0] = params.omega * std::sin(theta);
  out[1] = params.omega * std::cos(theta);
  return out;
}

double dist_cat(const DimMetricParams& params, std::size_t m,
                const CatPoint& a, const CatPoint& b) {
  check_params(params);
  if (!a.active && !b.active) return 0.0;
  if (a.active != b.active) {
    require_cat(a.active ? a : b, m);
    return params.omega;
  }
  const std::size_t ja = require_cat(a, m);
  const std::size_t jb = require_cat(b, m);
  if (ja == jb) return 0.0;
  const double q = 1.0 - params.rho;
  const double unit =
      std::numbers::sqrt2 * params.rho / std::sqrt(1.0 + static_cast<double>(m - 1) * q * q);
  return params.omega * unit;
}

Eigen::VectorXd embed_cat(const DimMetricParams& params, std::size_t m,
                          const CatPoint& point) {
  check_params(params);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (!point.active) return out;
  const std::size_t j = require_cat(point, m);
  const double q = 1.0 - params.rho;
  const double scale =
      params.omega / std::sqrt(1.0 + static_cast<double>(m - 1) * q * q);
  out.setConstant(scale * q);
  out[static_cast<Eigen::Index>(j)] = scale;
  return out;
}

double rho_star_squared_norm(std::size_t m) {
  if (m < 2) raise(Errc::InvalidCategoryCount, "need at least two categories");
  const double md = static_cast<double>(m);
  const double s2 = std::numbers::sqrt2;
  return (s2 - 2.0 + 2.0 * md - std::sqrt(6.0 - 4.0 * s2 + 4.0 * (s2 - 1.0) * md)) /
         (2.0 * (md - 1.0));
}

double rho_star_crossover(std::size_t m) {
  if (m < 2) raise(Errc::InvalidCategoryCount, "need at least two categories");
  const double md = static_cast<double>(m);
  const auto balance = [md](double rho) {
    const double q = 1.0 - rho;
    return std::numbers::sqrt2 * rho - std::sqrt(1.0 + (md - 1.0) * q * q);
  };
  // balance is strictly increasing on [0,1], negative at 0, positive at 1;
  // bisect until the interval cannot shrink further.
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (balance(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace archk
