#include "archk/space.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace archk {

std::optional<std::size_t> Categorical::index_of(std::string_view symbol) const noexcept {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == symbol) return i;
  }
  return std::nullopt;
}

namespace {

// Three-valued activity: a clause is false as soon as its governor is
// inactive or holds a disallowed value, unknown while the decision hinges
// on an active-but-unassigned governor.
enum class Tri : std::int8_t { False = 0, True = 1, Unknown = 2 };

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

}  // namespace

SpacePtr ParamSpace::validate(SpaceDescription description) {
  auto space = std::shared_ptr<ParamSpace>(new ParamSpace());
  const std::size_t n = description.dimensions.size();

  // dimension-level checks
  for (std::size_t i = 0; i < n; ++i) {
    const Dimension& dim = description.dimensions[i];
    if (dim.id.empty() || dim.id == "y") {
      raise(Errc::InvalidDimensionId,
            "dimension id '" + dim.id + "' is reserved or empty");
    }
    if (!space->index_.emplace(dim.id, i).second) {
      raise(Errc::DuplicateDimensionId, "dimension '" + dim.id + "' declared twice");
    }
    if (dim.is_real()) {
      const RealBounded& b = dim.bounds();
      if (!(b.lower < b.upper)) {
        raise(Errc::EmptyBounds, "dimension '" + dim.id + "' needs lower < upper");
      }
    } else {
      const Categorical& c = dim.categories();
      if (c.size() < 2) {
        raise(Errc::TooFewCategories, "dimension '" + dim.id + "' needs at least 2 values");
      }
      std::set<std::string_view> seen;
      for (const std::string& v : c.values) {
        if (!seen.insert(v).second) {
          raise(Errc::DuplicateCategoryValue,
                "dimension '" + dim.id + "' repeats value '" + v + "'");
        }
      }
    }
  }

  // clause-level checks
  space->clauses_.resize(n);
  for (const ActivationClause& raw : description.conditions) {
    auto target_it = space->index_.find(raw.target);
    if (target_it == space->index_.end()) {
      raise(Errc::UnknownDimension, "condition targets unknown dimension '" + raw.target + "'");
    }
    auto governor_it = space->index_.find(raw.governor);
    if (governor_it == space->index_.end()) {
      raise(Errc::UnknownDimension, "condition names unknown governor '" + raw.governor + "'");
    }
    const Dimension& governor = description.dimensions[governor_it->second];
    if (!governor.is_categorical()) {
      raise(Errc::GovernorNotCategorical,
            "governor '" + raw.governor + "' of '" + raw.target + "' must be categorical");
    }
    if (raw.allowed.empty()) {
      raise(Errc::ClauseValueOutsideDomain,
            "condition on '" + raw.target + "' has an empty allowed set");
    }
    Clause clause;
    clause.governor = governor_it->second;
    for (const std::string& symbol : raw.allowed) {
      auto k = governor.categories().index_of(symbol);
      if (!k) {
        raise(Errc::ClauseValueOutsideDomain,
              "value '" + symbol + "' is not in the domain of governor '" + raw.governor + "'");
      }
      clause.allowed.push_back(*k);
    }
    std::sort(clause.allowed.begin(), clause.allowed.end());
    clause.allowed.erase(std::unique(clause.allowed.begin(), clause.allowed.end()),
                         clause.allowed.end());
    space->clauses_[target_it->second].push_back(std::move(clause));
  }

  // canonical topological order: Kahn's algorithm, lowest declaration
  // index first so the order is deterministic
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> dependents(n);
  for (std::size_t target = 0; target < n; ++target) {
    std::set<std::size_t> governors;
    for (const Clause& c : space->clauses_[target]) governors.insert(c.governor);
    indegree[target] = governors.size();
    for (std::size_t g : governors) dependents[g].push_back(target);
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> seen_governors(n, 0);
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    space->topo_order_.push_back(i);
    for (std::size_t t : dependents[i]) {
      std::set<std::size_t> governors;
      for (const Clause& c : space->clauses_[t]) governors.insert(c.governor);
      if (++seen_governors[t] == governors.size()) ready.push(t);
    }
  }
  if (space->topo_order_.size() != n) {
    raise(Errc::CycleDetected, "activation conditions form a cycle");
  }

  // ancestors and levels along the topological order
  space->ancestors_.resize(n);
  space->level_.assign(n, 1);
  for (std::size_t i : space->topo_order_) {
    std::set<std::size_t> anc;
    for (const Clause& c : space->clauses_[i]) {
      anc.insert(c.governor);
      anc.insert(space->ancestors_[c.governor].begin(), space->ancestors_[c.governor].end());
      space->level_[i] = std::max(space->level_[i], space->level_[c.governor] + 1);
    }
    space->ancestors_[i].assign(anc.begin(), anc.end());
  }

  space->dimensions_ = description.dimensions;
  space->description_ = std::move(description);
  return space;
}

std::size_t ParamSpace::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    raise(Errc::UnknownDimension, "no dimension named '" + std::string(id) + "'");
  }
  return it->second;
}

bool ParamSpace::contains(std::string_view id) const noexcept {
  return index_.find(id) != index_.end();
}

std::span<const std::size_t> ParamSpace::ancestor_indices(std::size_t index) const {
  return ancestors_.at(index);
}

std::vector<std::string> ParamSpace::ancestors(std::string_view id) const {
  std::vector<std::string> out;
  for (std::size_t a : ancestor_indices(index_of(id))) out.push_back(dimensions_[a].id);
  return out;
}

std::span<const ParamSpace::Clause> ParamSpace::clauses(std::size_t index) const {
  return clauses_.at(index);
}

std::size_t ParamSpace::root_count() const noexcept {
  std::size_t count = 0;
  for (const auto& c : clauses_) count += c.empty();
  return count;
}

std::size_t ParamSpace::depth() const noexcept {
  std::size_t depth = dimensions_.empty() ? 0 : 1;
  for (std::size_t l : level_) depth = std::max(depth, l);
  return depth;
}

namespace {

// Category index of the governor's assigned value; UnknownCategory when the
// assignment is not one of its symbols.
std::size_t governor_category(const Dimension& governor, const Config::Value& value) {
  const std::string* symbol = std::get_if<std::string>(&value);
  if (symbol == nullptr) {
    raise(Errc::UnknownCategory,
          "governor '" + governor.id + "' is categorical but was assigned a number");
  }
  auto k = governor.categories().index_of(*symbol);
  if (!k) {
    raise(Errc::UnknownCategory,
          "value '" + *symbol + "' is not in the domain of '" + governor.id + "'");
  }
  return *k;
}

}  // namespace

bool ParamSpace::is_active(const Config& config, std::string_view id,
                           std::vector<std::string>* consulted) const {
  return is_active(config, index_of(id), consulted);
}

std::optional<bool> ParamSpace::activity(const Config& config, std::size_t index,
                                         std::vector<std::string>* consulted) const {
  if (index >= size()) {
    raise(Errc::UnknownDimension, "dimension index out of range");
  }
  std::vector<std::int8_t> memo(size(), -1);

  auto eval = [&](auto&& self, std::size_t i) -> Tri {
    if (memo[i] >= 0) return static_cast<Tri>(memo[i]);
    Tri result = Tri::True;
    for (const Clause& clause : clauses_[i]) {
      if (consulted != nullptr) consulted->push_back(dimensions_[clause.governor].id);
      const Tri governor_active = self(self, clause.governor);
      Tri value_ok = Tri::Unknown;
      if (const Config::Value* v = config.find(dimensions_[clause.governor].id)) {
        const std::size_t k = governor_category(dimensions_[clause.governor], *v);
        value_ok = std::binary_search(clause.allowed.begin(), clause.allowed.end(), k)
                       ? Tri::True
                       : Tri::False;
      }
      result = tri_and(result, tri_and(governor_active, value_ok));
      if (result == Tri::False) break;
    }
    memo[i] = static_cast<std::int8_t>(result);
    return result;
  };

  const Tri result = eval(eval, index);
  if (result == Tri::Unknown) return std::nullopt;
  return result == Tri::True;
}

bool ParamSpace::is_active(const Config& config, std::size_t index,
                           std::vector<std::string>* consulted) const {
  const std::optional<bool> result = activity(config, index, consulted);
  if (!result) {
    raise(Errc::UndecidableActivity,
          "activity of '" + dimensions_[index].id +
              "' depends on an active but unassigned governor");
  }
  return *result;
}

std::vector<BoundSlot> ParamSpace::bind(const Config& config) const {
  for (const auto& [id, value] : config.assignments()) {
    if (!contains(id)) {
      raise(Errc::UnknownDimension, "config assigns unknown dimension '" + id + "'");
    }
  }

  std::vector<BoundSlot> slots(size());
  for (std::size_t i : topo_order_) {
    const Dimension& dim = dimensions_[i];
    BoundSlot& slot = slots[i];

    // Governors precede their targets, and every active dimension so far is
    // assigned, so the activity decision never hits an unknown.
    slot.active = true;
    for (const Clause& clause : clauses_[i]) {
      const BoundSlot& governor = slots[clause.governor];
      if (!governor.active || !governor.assigned ||
          !std::binary_search(clause.allowed.begin(), clause.allowed.end(),
                              static_cast<std::size_t>(governor.category))) {
        slot.active = false;
        break;
      }
    }

    const Config::Value* value = config.find(dim.id);
    if (value == nullptr) {
      if (slot.active) {
        raise(Errc::MissingActiveValue, "active dimension '" + dim.id + "' has no value");
      }
      continue;
    }
    slot.assigned = true;
    if (dim.is_real()) {
      const double* x = std::get_if<double>(value);
      if (x == nullptr) {
        raise(Errc::ValueOutOfBounds,
              "dimension '" + dim.id + "' is real but was assigned a symbol");
      }
      const RealBounded& b = dim.bounds();
      if (!(*x >= b.lower && *x <= b.upper)) {
        raise(Errc::ValueOutOfBounds, "value for '" + dim.id + "' is outside its bounds");
      }
      slot.real = *x;
    } else {
      slot.category = static_cast<int>(governor_category(dim, *value));
    }
  }
  return slots;
}

CheckedConfig ParamSpace::validate_config(const Config& config) const {
  const std::vector<BoundSlot> slots = bind(config);
  CheckedConfig checked{config, {}};
  for (std::size_t i : topo_order_) {
    if (slots[i].assigned && !slots[i].active) checked.inert.push_back(dimensions_[i].id);
  }
  return checked;
}

Config ParamSpace::sample_config(Rng& rng) const {
  Config config;
  for (std::size_t i : topo_order_) {
    if (!is_active(config, i)) continue;
    const Dimension& dim = dimensions_[i];
    if (dim.is_real()) {
      config.set(dim.id, rng.uniform(dim.bounds().lower, dim.bounds().upper));
    } else {
      const auto& values = dim.categories().values;
      config.set(dim.id, values[rng.uniform_int(values.size())]);
    }
  }
  return config;
}

}  // namespace archk
