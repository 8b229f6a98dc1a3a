#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "archk/errors.hpp"
#include "archk/rng.hpp"

namespace archk {

struct RealBounded {
  double lower = 0.0;
  double upper = 1.0;
};

struct Categorical {
  std::vector<std::string> values;

  std::size_t size() const noexcept { return values.size(); }
  /// Index of `symbol` among the values, or nullopt.
  std::optional<std::size_t> index_of(std::string_view symbol) const noexcept;
};

using Domain = std::variant<RealBounded, Categorical>;

struct Dimension {
  std::string id;
  Domain domain;

  bool is_real() const noexcept { return std::holds_alternative<RealBounded>(domain); }
  bool is_categorical() const noexcept { return std::holds_alternative<Categorical>(domain); }
  const RealBounded& bounds() const { return std::get<RealBounded>(domain); }
  const Categorical& categories() const { return std::get<Categorical>(domain); }
};

/// Raw activation condition: `target` is active only while `governor` is
/// itself active and assigned one of the `allowed` values. Several clauses
/// on one target combine by conjunction.
struct ActivationClause {
  std::string target;
  std::string governor;
  std::vector<std::string> allowed;
};

/// Unvalidated space as read from a definition file or built in code.
struct SpaceDescription {
  std::vector<Dimension> dimensions;
  std::vector<ActivationClause> conditions;
};

/// One point of the space: a partial map from dimension id to value.
/// Inactive dimensions may carry assignments; they are semantically inert.
class Config {
 public:
  using Value = std::variant<double, std::string>;

  Config() = default;

  Config& set(std::string id, double value) {
    assignments_.insert_or_assign(std::move(id), Value(value));
    return *this;
  }
  Config& set(std::string id, std::string value) {
    assignments_.insert_or_assign(std::move(id), Value(std::move(value)));
    return *this;
  }
  Config& set(std::string id, const char* value) { return set(std::move(id), std::string(value)); }
  Config& unset(const std::string& id) {
    assignments_.erase(id);
    return *this;
  }

  bool has(std::string_view id) const noexcept { return find(id) != nullptr; }
  const Value* find(std::string_view id) const noexcept {
    auto it = assignments_.find(id);
    return it == assignments_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return assignments_.size(); }
  bool empty() const noexcept { return assignments_.empty(); }
  const std::map<std::string, Value, std::less<>>& assignments() const noexcept {
    return assignments_;
  }

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::map<std::string, Value, std::less<>> assignments_;
};

/// Per-dimension view of a config bound against a space: activity decided,
/// values parsed and range-checked. Index-aligned with the space's dimensions.
struct BoundSlot {
  bool active = false;
  bool assigned = false;
  double real = 0.0;  // set when assigned and the dimension is real
  int category = -1;  // set when assigned and the dimension is categorical
};

class ParamSpace;
using SpacePtr = std::shared_ptr<const ParamSpace>;

struct CheckedConfig {
  Config config;
  std::vector<std::string> inert;  // assigned but inactive dimension ids
};

/// A validated hierarchical input space: dimensions plus the DAG of
/// activation conditions. Immutable after validation; all member functions
/// are safe for concurrent use.
class ParamSpace {
 public:
  /// Activation clause resolved to indices; `allowed` holds category
  /// indices into the governor's value list, sorted.
  struct Clause {
    std::size_t governor = 0;
    std::vector<std::size_t> allowed;
  };

  /// Checks every structural invariant and fixes the canonical topological
  /// order. Throws on cycles, non-categorical governors, out-of-domain
  /// clause values, duplicate ids, bad bounds, or too few categories.
  static SpacePtr validate(SpaceDescription description);

  std::size_t size() const noexcept { return dimensions_.size(); }
  const Dimension& dimension(std::size_t index) const { return dimensions_.at(index); }
  const Dimension& dimension(std::string_view id) const { return dimensions_[index_of(id)]; }
  std::size_t index_of(std::string_view id) const;
  bool contains(std::string_view id) const noexcept;

  /// Canonical topological order (governors before targets), fixed at
  /// validation and used for sampling, embeddings, and serialization.
  std::span<const std::size_t> topological_order() const noexcept { return topo_order_; }

  /// Transitive governors of dimension `index`, sorted; empty for roots.
  std::span<const std::size_t> ancestor_indices(std::size_t index) const;
  std::vector<std::string> ancestors(std::string_view id) const;

  std::span<const Clause> clauses(std::size_t index) const;
  bool is_root(std::size_t index) const { return clauses(index).empty(); }
  std::size_t root_count() const noexcept;
  /// Longest governor chain, in levels; 1 for a flat space.
  std::size_t depth() const noexcept;

  /// Activity of dimension `id` under `config`. Depends only on assignments
  /// to the dimension's ancestors. Throws UndecidableActivity when a
  /// governor needed for the decision is active but unassigned. When
  /// `consulted` is given, the ids of every governor examined are appended.
  bool is_active(const Config& config, std::string_view id,
                 std::vector<std::string>* consulted = nullptr) const;
  bool is_active(const Config& config, std::size_t index,
                 std::vector<std::string>* consulted = nullptr) const;

  /// Three-valued variant of is_active: nullopt instead of a throw when the
  /// decision hinges on an active-but-unassigned governor. Useful while a
  /// config is still being built up.
  std::optional<bool> activity(const Config& config, std::size_t index,
                               std::vector<std::string>* consulted = nullptr) const;

  /// Full validation of a config against this space: every active dimension
  /// assigned in-domain, every assignment in-domain. Assignments to inactive
  /// dimensions are retained and reported as inert.
  CheckedConfig validate_config(const Config& config) const;

  /// Validates and resolves a config into per-dimension slots.
  std::vector<BoundSlot> bind(const Config& config) const;

  /// Draws a config dimension-by-dimension in topological order: roots
  /// unconditionally, conditional dimensions only while active; reals
  /// uniform over their bounds, categoricals uniform over their values.
  /// The result always passes validate_config.
  Config sample_config(Rng& rng) const;
  Config sample_config(std::uint64_t seed) const {
    Rng rng(seed);
    return sample_config(rng);
  }

  /// The description this space was validated from (dimension order as
  /// declared); round-trips through serialization.
  const SpaceDescription& description() const noexcept { return description_; }

 private:
  ParamSpace() = default;

  SpaceDescription description_;
  std::vector<Dimension> dimensions_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<Clause>> clauses_;      // per dimension
  std::vector<std::vector<std::size_t>> ancestors_;  // per dimension, sorted
  std::vector<std::size_t> topo_order_;
  std::vector<std::size_t> level_;  // 1 = root
};

}  // namespace archk
