#include "archk/kernel.hpp"

#include <cmath>
#include <utility>

#include "archk/digest.hpp"
#include "archk/errors.hpp"

namespace archk {

void validate_base_kernel(const BaseKernel& base) {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if (!(k.sigma > 0.0) || !std::isfinite(k.sigma)) {
          raise(Errc::InvalidHyperparameter, "output scale must be positive and finite");
        }
        if (!(k.lambda > 0.0) || !std::isfinite(k.lambda)) {
          raise(Errc::InvalidHyperparameter, "length scale must be positive and finite");
        }
        if constexpr (std::is_same_v<T, RationalQuadratic>) {
          if (!(k.alpha > 0.0) || !std::isfinite(k.alpha)) {
            raise(Errc::InvalidHyperparameter, "shape must be positive and finite");
          }
        }
      },
      base);
}

double kappa(const BaseKernel& base, double delta) {
  validate_base_kernel(base);
  if (!(delta >= 0.0)) raise(Errc::NegativeDistance, "distance must be non-negative");
  return std::visit(
      [delta](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        const double r = delta / k.lambda;
        if constexpr (std::is_same_v<T, ExponentiatedQuadratic>) {
          return k.sigma * k.sigma * std::exp(-0.5 * r * r);
        } else {
          return k.sigma * k.sigma * std::pow(1.0 + 0.5 * r * r / k.alpha, -k.alpha);
        }
      },
      base);
}

KernelSpec KernelSpec::create(SpacePtr space,
                              std::map<std::string, DimKernel, std::less<>> per_dim,
                              Combination combination) {
  if (!space) raise(Errc::EmptyInput, "kernel spec needs a space");
  KernelSpec spec;
  spec.space_ = std::move(space);
  spec.combination_ = combination;
  const ParamSpace& s = *spec.space_;

  for (const auto& [id, unused] : per_dim) {
    if (!s.contains(id)) {
      raise(Errc::UnknownDimension, "kernel settings name unknown dimension '" + id + "'");
    }
  }

  spec.per_dim_.resize(s.size());
  GammaMap gammas;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string& id = s.dimension(i).id;
    const auto it = per_dim.find(id);
    if (it == per_dim.end()) {
      raise(Errc::MissingGamma, "no kernel settings for dimension '" + id + "'");
    }
    const DimKernel& dk = it->second;
    if (!(dk.gamma >= 0.0 && dk.gamma <= 1.0)) {
      raise(Errc::GammaOutOfRange, "gamma for '" + id + "' must lie in [0,1]");
    }
    if (!(dk.rho >= 0.0 && dk.rho <= 1.0)) {
      raise(Errc::InvalidHyperparameter, "rho for '" + id + "' must lie in [0,1]");
    }
    validate_base_kernel(dk.base);
    spec.per_dim_[i] = dk;
    gammas.emplace(id, dk.gamma);
  }

  spec.metric_params_.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    spec.metric_params_[i] = DimMetricParams{
        spec.per_dim_[i].gamma, spec.per_dim_[i].rho, omega(s, gammas, s.dimension(i).id)};
  }
  return spec;
}

KernelSpec KernelSpec::shared(SpacePtr space, const DimKernel& dim_kernel,
                              Combination combination) {
  if (!space) raise(Errc::EmptyInput, "kernel spec needs a space");
  std::map<std::string, DimKernel, std::less<>> per_dim;
  for (std::size_t i = 0; i < space->size(); ++i) {
    per_dim.emplace(space->dimension(i).id, dim_kernel);
  }
  return create(std::move(space), std::move(per_dim), combination);
}

const DimKernel& KernelSpec::dim_kernel(std::string_view id) const {
  return per_dim_.at(space_->index_of(id));
}

namespace {

RealPoint real_point(const BoundSlot& slot) {
  RealPoint p;
  p.active = slot.active;
  if (slot.active) p.value = slot.real;
  return p;
}

CatPoint cat_point(const BoundSlot& slot) {
  CatPoint p;
  p.active = slot.active;
  if (slot.active) p.index = static_cast<std::size_t>(slot.category);
  return p;
}

}  // namespace

double dist_dim(const KernelSpec& spec, std::size_t index,
                std::span<const BoundSlot> x, std::span<const BoundSlot> y) {
  const Dimension& dim = spec.space().dimension(index);
  const DimMetricParams& mp = spec.metric_params(index);
  if (dim.is_real()) {
    return dist_real(mp, dim.bounds(), real_point(x[index]), real_point(y[index]));
  }
  return dist_cat(mp, dim.categories().size(), cat_point(x[index]), cat_point(y[index]));
}

Eigen::VectorXd embed_dim(const KernelSpec& spec, std::size_t index,
                          std::span<const BoundSlot> point) {
  const Dimension& dim = spec.space().dimension(index);
  const DimMetricParams& mp = spec.metric_params(index);
  if (dim.is_real()) {
    return embed_real(mp, dim.bounds(), real_point(point[index]));
  }
  return embed_cat(mp, dim.categories().size(), cat_point(point[index]));
}

double k_dim(const KernelSpec& spec, std::size_t index,
             std::span<const BoundSlot> x, std::span<const BoundSlot> y) {
  return kappa(spec.dim_kernel(index).base, dist_dim(spec, index, x, y));
}

double k_dim(const KernelSpec& spec, std::string_view id, const Config& x, const Config& y) {
  const std::size_t index = spec.space().index_of(id);
  const auto bx = spec.space().bind(x);
  const auto by = spec.space().bind(y);
  return k_dim(spec, index, bx, by);
}

double k_combined(const KernelSpec& spec,
                  std::span<const BoundSlot> x, std::span<const BoundSlot> y) {
  const std::size_t n = spec.space().size();
  double acc = spec.combination() == Combination::Sum ? 0.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ki = k_dim(spec, i, x, y);
    if (spec.combination() == Combination::Sum) {
      acc += ki;
    } else {
      acc *= ki;
    }
  }
  return acc;
}

double k_combined(const KernelSpec& spec, const Config& x, const Config& y) {
  const auto bx = spec.space().bind(x);
  const auto by = spec.space().bind(y);
  return k_combined(spec, bx, by);
}

std::string canonical_config_line(const ParamSpace& space, const Config& config) {
  std::string line;
  for (const std::size_t i : space.topological_order()) {
    const Dimension& dim = space.dimension(i);
    const Config::Value* value = config.find(dim.id);
    if (value == nullptr) continue;
    line += dim.id;
    line += '=';
    if (const double* x = std::get_if<double>(value)) {
      line += format_double(*x);
    } else {
      line += std::get<std::string>(*value);
    }
    line += ';';
  }
  return line;
}

std::string canonical_spec_line(const KernelSpec& spec) {
  std::string line = spec.combination() == Combination::Sum ? "sum|" : "product|";
  for (const std::size_t i : spec.space().topological_order()) {
    const DimKernel& dk = spec.dim_kernel(i);
    line += spec.space().dimension(i).id;
    line += ":gamma=" + format_double(dk.gamma);
    line += ",rho=" + format_double(dk.rho);
    if (const auto* eq = std::get_if<ExponentiatedQuadratic>(&dk.base)) {
      line += ",eq(sigma=" + format_double(eq->sigma) + ",lambda=" + format_double(eq->lambda) + ")";
    } else {
      const auto& rq = std::get<RationalQuadratic>(dk.base);
      line += ",rq(sigma=" + format_double(rq.sigma) + ",lambda=" + format_double(rq.lambda) +
              ",alpha=" + format_double(rq.alpha) + ")";
    }
    line += ';';
  }
  return line;
}

GramMatrix gram(const KernelSpec& spec, const std::vector<Config>& configs) {
  if (configs.empty()) raise(Errc::EmptyInput, "need at least one config");
  const std::size_t n = configs.size();
  std::vector<std::vector<BoundSlot>> bound;
  bound.reserve(n);
  for (const Config& c : configs) bound.push_back(spec.space().bind(c));

  GramMatrix out;
  out.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      const double v = k_combined(spec, bound[r], bound[c]);
      out.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      out.entries(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
    }
  }

  Fnv1a config_hash;
  for (const Config& c : configs) {
    config_hash.update(canonical_config_line(spec.space(), c));
    config_hash.update("\n");
  }
  out.config_digest = config_hash.hex();
  out.spec_digest = fnv1a_hex(canonical_spec_line(spec));
  return out;
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const std::vector<Config>& rows,
                           const std::vector<Config>& cols) {
  std::vector<std::vector<BoundSlot>> bound_rows;
  bound_rows.reserve(rows.size());
  for (const Config& c : rows) bound_rows.push_back(spec.space().bind(c));
  std::vector<std::vector<BoundSlot>> bound_cols;
  bound_cols.reserve(cols.size());
  for (const Config& c : cols) bound_cols.push_back(spec.space().bind(c));

  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          k_combined(spec, bound_rows[r], bound_cols[c]);
    }
  }
  return out;
}

}  // namespace archk
