#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbn/diagnostic.hpp"

namespace qbn {

/// Index of a type (object type, relationship type, or both) in its schema.
struct TypeId {
  std::uint32_t index = 0;
  auto operator<=>(const TypeId&) const = default;
};

/// Index of a role in its schema.
struct RoleId {
  std::uint32_t index = 0;
  auto operator<=>(const RoleId&) const = default;
};

using TypePair = std::pair<TypeId, TypeId>;

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct TypeInfo {
  std::string id;
  bool is_object = false;        // member of the object types
  bool is_relationship = false;  // member of the relationship types
  std::optional<std::string> display;
  std::vector<RoleId> roles;  // partition block, declaration order (rel types only)

  bool operator==(const TypeInfo&) const = default;
};

struct RoleInfo {
  std::string id;
  TypeId rel;
  TypeId player;
  std::optional<std::string> fwd;  // phrase when entering: player -> relationship
  std::optional<std::string> rev;  // phrase when exiting: relationship -> player

  bool operator==(const RoleInfo&) const = default;
};

/// Verbalizes "enter role_in, exit role_out" across one relationship type
/// as a single connective.
struct ContractionRule {
  RoleId role_in;
  RoleId role_out;
  std::string phrase;

  bool operator==(const ContractionRule&) const = default;
};

class SchemaBuilder;
class Schema;
Schema default_naming(const Schema& schema);

/// An indexed, validated ORM schema. Immutable once built; the IdfBy and
/// type-relatedness closures are materialized at construction.
class Schema {
 public:
  [[nodiscard]] std::size_t type_count() const { return types_.size(); }
  [[nodiscard]] std::size_t role_count() const { return roles_.size(); }
  [[nodiscard]] std::span<const TypeInfo> types() const { return types_; }
  [[nodiscard]] std::span<const RoleInfo> roles() const { return roles_; }

  [[nodiscard]] const TypeInfo& type(TypeId t) const;
  [[nodiscard]] const RoleInfo& role(RoleId r) const;
  [[nodiscard]] bool contains(TypeId t) const { return t.index < types_.size(); }
  [[nodiscard]] bool contains(RoleId r) const { return r.index < roles_.size(); }

  [[nodiscard]] std::optional<TypeId> find_type(std::string_view id) const;
  [[nodiscard]] std::optional<RoleId> find_role(std::string_view id) const;

  [[nodiscard]] bool is_object(TypeId t) const { return type(t).is_object; }
  [[nodiscard]] bool is_relationship(TypeId t) const { return type(t).is_relationship; }
  [[nodiscard]] std::span<const RoleId> roles_of(TypeId rel) const { return type(rel).roles; }
  [[nodiscard]] std::size_t arity(TypeId rel) const { return type(rel).roles.size(); }
  [[nodiscard]] TypeId rel_of(RoleId r) const { return role(r).rel; }
  [[nodiscard]] TypeId player(RoleId r) const { return role(r).player; }

  /// Object types in declaration order (plain and objectified).
  [[nodiscard]] std::vector<TypeId> object_types() const;

  [[nodiscard]] const std::vector<TypePair>& spec_edges() const { return spec_; }
  [[nodiscard]] const std::vector<TypePair>& poly_edges() const { return poly_; }
  [[nodiscard]] const std::vector<ContractionRule>& contractions() const { return contractions_; }
  [[nodiscard]] const ContractionRule* find_contraction(RoleId in, RoleId out) const;

  [[nodiscard]] bool idf_by(TypeId x, TypeId y) const;
  [[nodiscard]] bool type_related(TypeId x, TypeId y) const;
  /// Representative of x's type-relatedness class.
  [[nodiscard]] std::uint32_t type_class(TypeId x) const;

  /// Schema value equality over the declared content (closures are derived).
  bool operator==(const Schema& other) const;

 private:
  friend class SchemaBuilder;
  friend Schema default_naming(const Schema& schema);
  Schema() = default;
  void index();

  std::vector<TypeInfo> types_;
  std::vector<RoleInfo> roles_;
  std::vector<TypePair> spec_;
  std::vector<TypePair> poly_;
  std::vector<ContractionRule> contractions_;

  std::vector<std::vector<bool>> idf_;  // idf_[x][y] <=> x IdfBy y
  std::vector<std::uint32_t> class_;    // union-find roots, flattened
};

/// Accumulates declarations by identifier (any order, forward references
/// allowed) and validates them into a Schema.
class SchemaBuilder {
 public:
  void add_object(std::string id, std::optional<std::string> display = {}, SourceLoc at = {});
  void add_fact(std::string id, bool objectified, std::optional<std::string> display = {},
                SourceLoc at = {});
  /// Adds a role to the most recently added fact.
  void add_role(std::string id, std::string player, std::optional<std::string> fwd = {},
                std::optional<std::string> rev = {}, SourceLoc at = {});
  void add_spec(std::string sub, std::string super, SourceLoc at = {});
  void add_poly(std::string a, std::string b, SourceLoc at = {});
  void add_contraction(std::string role_in, std::string role_out, std::string phrase,
                       SourceLoc at = {});

  /// Validates and indexes. Consumes nothing; may be called repeatedly.
  [[nodiscard]] ParseResult<Schema> build() const;

 private:
  struct PendingType {
    std::string id;
    bool is_fact;
    bool objectified;
    std::optional<std::string> display;
    SourceLoc at;
    std::vector<std::size_t> roles;
  };
  struct PendingRole {
    std::string id;
    std::string player;
    std::optional<std::string> fwd, rev;
    SourceLoc at;
    std::size_t fact;
  };
  struct PendingEdge {
    std::string a, b;
    SourceLoc at;
  };
  struct PendingContraction {
    std::string in, out, phrase;
    SourceLoc at;
  };

  std::vector<PendingType> types_;
  std::vector<PendingRole> roles_;
  std::vector<PendingEdge> spec_, poly_;
  std::vector<PendingContraction> contractions_;
  std::vector<Diagnostic> early_;  // problems detected while adding
};

// Free-function surface.

[[nodiscard]] ParseResult<Schema> parse_schema(std::string_view source);
[[nodiscard]] std::string serialize_schema(const Schema& schema);

/// The relationship type owning role r. Throws Error("unknown-role").
[[nodiscard]] TypeId rel_of(const Schema& schema, RoleId r);
/// All pairs (x, y) with x IdfBy y, ordered by (x, y) index.
[[nodiscard]] std::vector<TypePair> idf_by(const Schema& schema);
/// Throws Error("unknown-type") for ids outside the schema.
[[nodiscard]] bool type_related(const Schema& schema, TypeId x, TypeId y);

}  // namespace qbn
