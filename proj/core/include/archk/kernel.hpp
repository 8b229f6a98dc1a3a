#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "archk/metric.hpp"
#include "archk/space.hpp"

namespace archk {

struct ExponentiatedQuadratic {
  double sigma = 1.0;
  double lambda = 1.0;
};

struct RationalQuadratic {
  double sigma = 1.0;
  double lambda = 1.0;
  double alpha = 1.0;
};

using BaseKernel = std::variant<ExponentiatedQuadratic, RationalQuadratic>;

// kappa(0) = sigma^2 for both kinds; non-increasing in delta.
double kappa(const BaseKernel& base, double delta);
void validate_base_kernel(const BaseKernel& base);

enum class Combination { Sum, Product };

// Per-dimension kernel settings; paired with a distance to give k_i.
struct DimKernel {
  double gamma = 1.0;
  double rho = 1.0;
  BaseKernel base = ExponentiatedQuadratic{};
};

// A full kernel over a space: one DimKernel per dimension plus how the
// per-dimension kernels combine. Validated at construction; omega values
// are cached so evaluation never recomputes ancestry products.
class KernelSpec {
 public:
  static KernelSpec create(SpacePtr space,
                           std::map<std::string, DimKernel, std::less<>> per_dim,
                           Combination combination);

  // Same settings for every dimension.
  static KernelSpec shared(SpacePtr space, const DimKernel& dim_kernel,
                           Combination combination);

  const ParamSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  Combination combination() const noexcept { return combination_; }

  const DimKernel& dim_kernel(std::size_t index) const { return per_dim_.at(index); }
  const DimKernel& dim_kernel(std::string_view id) const;
  const DimMetricParams& metric_params(std::size_t index) const {
    return metric_params_.at(index);
  }

 private:
  KernelSpec() = default;

  SpacePtr space_;
  std::vector<DimKernel> per_dim_;          // by dimension index
  std::vector<DimMetricParams> metric_params_;
  Combination combination_ = Combination::Product;
};

struct GramMatrix {
  Eigen::MatrixXd entries;
  std::string config_digest;  // hash of the config list, 16 hex chars
  std::string spec_digest;    // hash of the kernel spec, 16 hex chars
};

// Distance of dimension `index` between two bound configs.
double dist_dim(const KernelSpec& spec, std::size_t index,
                std::span<const BoundSlot> x, std::span<const BoundSlot> y);

// Embedding of dimension `index` for one bound config.
Eigen::VectorXd embed_dim(const KernelSpec& spec, std::size_t index,
                          std::span<const BoundSlot> point);

// Per-dimension kernel: kappa applied to that dimension's distance. Depends
// only on the dimension's value and activity in each config.
double k_dim(const KernelSpec& spec, std::string_view id, const Config& x, const Config& y);
double k_dim(const KernelSpec& spec, std::size_t index,
             std::span<const BoundSlot> x, std::span<const BoundSlot> y);

// Sum or product of the per-dimension kernels over all dimensions.
double k_combined(const KernelSpec& spec, const Config& x, const Config& y);
double k_combined(const KernelSpec& spec,
                  std::span<const BoundSlot> x, std::span<const BoundSlot> y);

// N x N kernel matrix; upper triangle computed, lower mirrored, so the
// result is symmetric to the bit.
GramMatrix gram(const KernelSpec& spec, const std::vector<Config>& configs);

// Rectangular kernel matrix between two config lists.
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const std::vector<Config>& rows,
                           const std::vector<Config>& cols);

// Canonical one-line serializations backing the Gram digests; stable across
// platforms for identical inputs.
std::string canonical_config_line(const ParamSpace& space, const Config& config);
std::string canonical_spec_line(const KernelSpec& spec);

}  // namespace archk
