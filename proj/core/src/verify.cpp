#include "archk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <Eigen/Eigenvalues>

#include "archk/errors.hpp"

namespace archk {

CheckReport check_psd(const Eigen::MatrixXd& matrix, double tol) {
  if (matrix.rows() == 0) raise(Errc::EmptyInput, "need a non-empty matrix");
  if (matrix.rows() != matrix.cols()) {
    raise(Errc::AsymmetricInput, "matrix is not square");
  }
  const double skew = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12) {
    raise(Errc::AsymmetricInput, "matrix is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  const double lambda_min = solver.eigenvalues().minCoeff();

  CheckReport report;
  report.name = "psd";
  report.samples = static_cast<std::size_t>(matrix.rows());
  report.worst = -lambda_min;
  report.tolerance = tol * static_cast<double>(matrix.rows());
  report.pass = report.worst <= report.tolerance;
  report.detail = lambda_min;
  return report;
}

CheckReport check_psd(const GramMatrix& matrix, double tol) {
  return check_psd(matrix.entries, tol);
}

namespace {

// Builds a config in which one dimension's activity is pinned, by assigning
// satisfying (or violating) values along the governor chains. Assignments
// are rolled back on dead ends; random choices come from the caller's rng.
class ForcedSampler {
 public:
  ForcedSampler(const ParamSpace& space, Rng& rng) : space_(space), rng_(rng) {}

  bool force_active(std::size_t index) {
    if (const auto decided = space_.activity(config_, index)) return *decided;

    // All clauses must hold, so a governor shared between clauses must take
    // a value in the intersection of their allowed sets.
    std::map<std::size_t, std::vector<std::size_t>> required;
    for (const ParamSpace::Clause& clause : space_.clauses(index)) {
      auto it = required.find(clause.governor);
      if (it == required.end()) {
        required.emplace(clause.governor, clause.allowed);
        continue;
      }
      std::vector<std::size_t> meet;
      std::set_intersection(it->second.begin(), it->second.end(),
                            clause.allowed.begin(), clause.allowed.end(),
                            std::back_inserter(meet));
      if (meet.empty()) return false;
      it->second = std::move(meet);
    }

    for (const auto& [governor, allowed] : required) {
      if (!force_active(governor)) return false;
      const Dimension& dim = space_.dimension(governor);
      if (const Config::Value* value = config_.find(dim.id)) {
        const auto held = dim.categories().index_of(std::get<std::string>(*value));
        if (!held || !std::binary_search(allowed.begin(), allowed.end(), *held)) return false;
      } else {
        const std::size_t pick = allowed[rng_.uniform_int(allowed.size())];
        config_.set(dim.id, dim.categories().values[pick]);
      }
    }
    return true;
  }

  bool force_inactive(std::size_t index) {
    if (const auto decided = space_.activity(config_, index)) return !*decided;

    // Violating any single clause suffices; try them in random order, and
    // for each try both ways: give the governor a disallowed value, or make
    // the governor itself inactive.
    std::vector<std::size_t> order(space_.clauses(index).size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(order);

    for (const std::size_t c : order) {
      const ParamSpace::Clause& clause = space_.clauses(index)[c];
      const bool value_first = rng_.bernoulli(0.5);
      for (int option = 0; option < 2; ++option) {
        const Config snapshot = config_;
        if ((option == 0) == value_first) {
          if (violate_by_value(clause)) return true;
        } else {
          if (force_inactive(clause.governor)) return true;
        }
        config_ = snapshot;
      }
    }
    return false;
  }

  // Fills every remaining active dimension with a uniform draw, in
  // topological order so each activity decision is already settled.
  void complete() {
    for (const std::size_t i : space_.topological_order()) {
      const Dimension& dim = space_.dimension(i);
      if (config_.has(dim.id)) continue;
      if (!space_.activity(config_, i).value()) continue;
      if (dim.is_real()) {
        config_.set(dim.id, rng_.uniform(dim.bounds().lower, dim.bounds().upper));
      } else {
        const auto& values = dim.categories().values;
        config_.set(dim.id, values[rng_.uniform_int(values.size())]);
      }
    }
  }

  Config take() { return std::move(config_); }

 private:
  bool violate_by_value(const ParamSpace::Clause& clause) {
    const Dimension& dim = space_.dimension(clause.governor);
    std::vector<std::size_t> complement;
    for (std::size_t v = 0; v < dim.categories().size(); ++v) {
      if (!std::binary_search(clause.allowed.begin(), clause.allowed.end(), v)) {
        complement.push_back(v);
      }
    }
    if (complement.empty()) return false;
    if (!force_active(clause.governor)) return false;
    if (const Config::Value* value = config_.find(dim.id)) {
      const auto held = dim.categories().index_of(std::get<std::string>(*value));
      return held && !std::binary_search(clause.allowed.begin(), clause.allowed.end(), *held);
    }
    const std::size_t pick = complement[rng_.uniform_int(complement.size())];
    config_.set(dim.id, dim.categories().values[pick]);
    return true;
  }

  void shuffle(std::vector<std::size_t>& order) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng_.uniform_int(i)]);
    }
  }

  const ParamSpace& space_;
  Rng& rng_;
  Config config_;
};

}  // namespace

bool sample_with_activity(const ParamSpace& space, std::size_t index, bool want_active,
                          Rng& rng, Config& out) {
  if (!want_active && space.is_root(index)) return false;  // roots are always active

  for (int attempt = 0; attempt < 32; ++attempt) {
    ForcedSampler sampler(space, rng);
    const bool forced = want_active ? sampler.force_active(index) : sampler.force_inactive(index);
    if (!forced) continue;  // a different random branch may work next time
    sampler.complete();
    out = sampler.take();
    return true;
  }

  // Last resort: plain rejection sampling.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Config config = space.sample_config(rng);
    if (space.is_active(config, index) == want_active) {
      out = std::move(config);
      return true;
    }
  }
  return false;
}

namespace {

// A pinned pattern that cannot be realized (e.g. inactive root) falls back
// to a plain sample, which keeps sample counts comparable across dims.
Config draw_with_activity(const ParamSpace& space, std::size_t index, bool want_active,
                          Rng& rng) {
  Config config;
  if (sample_with_activity(space, index, want_active, rng, config)) return config;
  return space.sample_config(rng);
}

}  // namespace

std::vector<CheckReport> check_isometry(const KernelSpec& spec, std::size_t n_pairs,
                                        std::uint64_t seed) {
  if (n_pairs == 0) raise(Errc::EmptyInput, "need at least one pair");
  const ParamSpace& space = spec.space();
  const Rng base(seed);

  std::vector<CheckReport> reports;
  reports.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    Rng rng = base.fork(i);
    CheckReport report;
    report.name = "isometry";
    report.dimension = space.dimension(i).id;
    report.tolerance = 1e-12;

    static constexpr bool patterns[4][2] = {
        {true, true}, {false, true}, {true, false}, {false, false}};
    for (std::size_t s = 0; s < n_pairs; ++s) {
      const auto& pattern = patterns[s % 4];
      const Config x = draw_with_activity(space, i, pattern[0], rng);
      const Config y = draw_with_activity(space, i, pattern[1], rng);
      const auto bx = space.bind(x);
      const auto by = space.bind(y);
      const double d = dist_dim(spec, i, bx, by);
      const double e = (embed_dim(spec, i, bx) - embed_dim(spec, i, by)).norm();
      const double residual = std::abs(d - e);
      if (s == 0 || residual > report.worst) {
        report.worst = residual;
        report.witness = {x, y};
      }
    }
    report.samples = n_pairs;
    report.pass = report.worst <= report.tolerance;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<CheckReport> check_triangle(const KernelSpec& spec, std::size_t n_triples,
                                        std::uint64_t seed) {
  if (n_triples == 0) raise(Errc::EmptyInput, "need at least one triple");
  const ParamSpace& space = spec.space();
  const Rng base(seed);

  std::vector<CheckReport> reports;
  reports.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    Rng rng = base.fork(i);
    CheckReport report;
    report.name = "triangle";
    report.dimension = space.dimension(i).id;
    report.tolerance = 1e-12;

    for (std::size_t s = 0; s < n_triples; ++s) {
      const std::size_t pattern = s % 8;
      const Config x = draw_with_activity(space, i, (pattern & 1) != 0, rng);
      const Config y = draw_with_activity(space, i, (pattern & 2) != 0, rng);
      const Config z = draw_with_activity(space, i, (pattern & 4) != 0, rng);
      const auto bx = space.bind(x);
      const auto by = space.bind(y);
      const auto bz = space.bind(z);
      const double violation = dist_dim(spec, i, bx, by) - dist_dim(spec, i, bx, bz) -
                               dist_dim(spec, i, by, bz);
      if (s == 0 || violation > report.worst) {
        report.worst = violation;
        report.witness = {x, y, z};
      }
    }
    report.samples = n_triples;
    report.pass = report.worst <= report.tolerance;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace archk
