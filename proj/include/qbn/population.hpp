#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qbn/schema.hpp"

namespace qbn {

/// Index of an instance (or tuple) name in its population.
struct InstanceId {
  std::uint32_t index = 0;
  auto operator<=>(const InstanceId&) const = default;
};

class PopulationBuilder;

/// A sample population: instances per object type, tuples per relationship
/// type, and the role fillers of each tuple. Tuple ids are instances too, so
/// tuples of objectified types can fill roles. Immutable once built.
class Population {
 public:
  [[nodiscard]] const Schema& schema() const { return *schema_; }
  [[nodiscard]] const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }

  [[nodiscard]] std::size_t instance_count() const { return names_.size(); }
  [[nodiscard]] const std::string& name(InstanceId i) const { return names_.at(i.index); }
  [[nodiscard]] std::optional<InstanceId> find(std::string_view name) const;

  /// The population of t, sorted by index: declared instances for plain
  /// object types, tuple ids for relationship types.
  [[nodiscard]] std::span<const InstanceId> members(TypeId t) const;
  [[nodiscard]] bool has_member(TypeId t, InstanceId i) const;

  /// Relationship type of a tuple, if `i` is a tuple.
  [[nodiscard]] std::optional<TypeId> tuple_type(InstanceId i) const;
  /// Filler of role r in tuple `tuple`; requires tuple_type(tuple) == Rel(r).
  [[nodiscard]] InstanceId filler(InstanceId tuple, RoleId r) const;
  /// Tuples of Rel(r) whose r-filler is x, sorted.
  [[nodiscard]] std::span<const InstanceId> tuples_filled_by(RoleId r, InstanceId x) const;

  [[nodiscard]] std::size_t tuple_count() const;

 private:
  friend class PopulationBuilder;
  Population() = default;

  std::shared_ptr<const Schema> schema_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
  std::vector<std::vector<InstanceId>> members_;         // per type
  std::vector<std::optional<TypeId>> tuple_type_;        // per instance
  std::vector<std::vector<InstanceId>> fillers_;         // per instance, aligned with roles_of(rel)
  std::vector<std::unordered_map<std::uint32_t, std::vector<InstanceId>>> filled_by_;  // per role
};

/// Accumulates instance and tuple declarations by name and validates them
/// against the schema: typing of fillers, complete tuples, Spec subsets.
class PopulationBuilder {
 public:
  explicit PopulationBuilder(std::shared_ptr<const Schema> schema) : schema_(std::move(schema)) {}

  void add_instance(std::string type, std::string id, SourceLoc at = {});
  void add_tuple(std::string rel, std::string id, std::vector<std::pair<std::string, std::string>> fillers,
                 SourceLoc at = {});

  [[nodiscard]] ParseResult<Population> build() const;

 private:
  struct PendingInstance {
    std::string type, id;
    SourceLoc at;
  };
  struct PendingTuple {
    std::string rel, id;
    std::vector<std::pair<std::string, std::string>> fillers;
    SourceLoc at;
  };
  std::shared_ptr<const Schema> schema_;
  std::vector<PendingInstance> instances_;
  std::vector<PendingTuple> tuples_;
};

/// Population DSL:
///   instance <TypeId> <InstanceId>
///   tuple <RelTypeId> <TupleId> { <RoleId> = <InstanceId>, ... }
[[nodiscard]] ParseResult<Population> load_population(std::string_view source, std::shared_ptr<const Schema> schema);

}  // namespace qbn
