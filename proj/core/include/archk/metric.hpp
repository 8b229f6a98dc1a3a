#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "archk/space.hpp"

namespace archk {

// Hyperparameters of one dimension's distance. omega is derived: the product
// of gamma over the dimension itself and all of its ancestors, so nested
// dimensions cannot matter more than the branch that gates them.
struct DimMetricParams {
  double gamma = 1.0;
  double rho = 1.0;
  double omega = 1.0;
};

// One config's view of a single real dimension: active flag plus the value,
// which may be absent (inactive dims usually carry no value).
struct RealPoint {
  bool active = false;
  std::optional<double> value;
};

// Same for a categorical dimension; the value is a category index.
struct CatPoint {
  bool active = false;
  std::optional<std::size_t> index;
};

using GammaMap = std::map<std::string, double, std::less<>>;

// Product of gamma over id's ancestors and id itself.
double omega(const ParamSpace& space, const GammaMap& gammas, std::string_view id);

// Distance between two points of a bounded real dimension:
//   0                                  both inactive
//   omega                              activity differs
//   2*omega*sin(pi*rho*|dx| / (2*(u-l)))   both active
// The last case equals omega*sqrt(2)*sqrt(1 - cos(pi*rho*dx/(u-l))) but
// avoids the cancellation in 1-cos for nearby points.
double dist_real(const DimMetricParams& params, const RealBounded& bounds,
                 const RealPoint& a, const RealPoint& b);

// Arc embedding realizing dist_real as a Euclidean distance: [0,0] when
// inactive, else omega*[sin t, cos t] with t = pi*rho*(x-l)/(u-l).
Eigen::VectorXd embed_real(const DimMetricParams& params, const RealBounded& bounds,
                           const RealPoint& point);

// Distance between two points of a categorical dimension with m values:
//   0                                   both inactive, or equal symbols
//   omega                               activity differs
//   omega*sqrt(2)*rho / sqrt(1 + (m-1)*(1-rho)^2)   both active, different
double dist_cat(const DimMetricParams& params, std::size_t m,
                const CatPoint& a, const CatPoint& b);

// Simplex-corner embedding realizing dist_cat: the zero vector when
// inactive, else the vector with 1 at the held index and (1-rho) elsewhere,
// rescaled so its norm is omega.
Eigen::VectorXd embed_cat(const DimMetricParams& params, std::size_t m,
                          const CatPoint& point);

// Closed-form root of sqrt(2)*rho = 1 + (m-1)*(1-rho)^2: the rho at which
// sqrt(2)*rho balances the squared norm of the unnormalized category vector.
double rho_star_squared_norm(std::size_t m);

// Root of sqrt(2)*rho / sqrt(1 + (m-1)*(1-rho)^2) = 1, found by bisection:
// the rho at which two active-but-different categories are exactly as far
// apart as an active/inactive pair (distance omega). Below it, activity
// differences dominate category differences.
double rho_star_crossover(std::size_t m);

}  // namespace archk
