#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qbn/schema.hpp"

namespace qbn {

/// enter r: Player(r) side -> Rel(r) side.  exit r: the reversed relation.
enum class StepKind : std::uint8_t { enter, exit };

struct PathStep {
  StepKind kind = StepKind::enter;
  RoleId role;

  [[nodiscard]] PathStep flipped() const {
    return PathStep{kind == StepKind::enter ? StepKind::exit : StepKind::enter, role};
  }
  auto operator<=>(const PathStep&) const = default;
};

/// Which relationship types may be a focus (stand alone in a path).
///  - lenient: objectified, or arity >= 3
///  - strict:  objectified only
enum class GrammarMode : std::uint8_t { lenient, strict };

/// A linear path expression: either empty, or an anchor type followed by
/// (step, type) pairs. Immutable value; extension builds a new path.
class PathExpr {
 public:
  /// The empty path expression (navigation start node).
  PathExpr() = default;
  explicit PathExpr(TypeId anchor) : types_{anchor} {}

  [[nodiscard]] bool empty() const { return types_.empty(); }
  /// Number of role steps.
  [[nodiscard]] std::size_t length() const { return steps_.size(); }

  [[nodiscard]] std::span<const TypeId> types() const { return types_; }
  [[nodiscard]] std::span<const PathStep> steps() const { return steps_; }

  /// Throw Error("empty-path") on the empty path.
  [[nodiscard]] TypeId anchor() const;
  [[nodiscard]] TypeId focus() const;

  [[nodiscard]] PathExpr extended(PathStep step, TypeId next) const;
  /// The same path with its final type replaced.
  [[nodiscard]] PathExpr with_focus(TypeId t) const;
  /// First `steps` steps; keeps the anchor. Requires steps <= length().
  [[nodiscard]] PathExpr prefix(std::size_t steps) const;

  auto operator<=>(const PathExpr&) const = default;
  bool operator==(const PathExpr&) const = default;

 private:
  std::vector<TypeId> types_;
  std::vector<PathStep> steps_;
};

[[nodiscard]] bool is_legal_focus(const Schema& schema, TypeId t, GrammarMode mode = GrammarMode::lenient);

/// Whether p is a node of the navigation graph. Total: ids outside the
/// schema just make the path ill-formed.
[[nodiscard]] bool is_wellformed(const Schema& schema, const PathExpr& p,
                                 GrammarMode mode = GrammarMode::lenient);

/// Rev: anchor and focus swap, step order reverses, every step flips.
[[nodiscard]] PathExpr reverse(const PathExpr& p);

[[nodiscard]] TypeId focus_type(const PathExpr& p);
[[nodiscard]] TypeId anchor_type(const PathExpr& p);

/// Stable machine syntax: `A >r F <q B`, `()` for the empty path.
[[nodiscard]] std::string canonical_text(const Schema& schema, const PathExpr& p);
/// Inverse of canonical_text. Checks identifiers, not well-formedness.
/// Throws Error("bad-path").
[[nodiscard]] PathExpr parse_path(const Schema& schema, std::string_view text);

}  // namespace qbn

template <>
struct std::hash<qbn::PathExpr> {
  std::size_t operator()(const qbn::PathExpr& p) const noexcept {
    std::size_t h = p.length() * 0x9e3779b97f4a7c15ULL;
    for (auto t : p.types()) h = (h ^ t.index) * 0x100000001b3ULL;
    for (auto s : p.steps()) h = (h ^ (s.role.index * 2 + static_cast<unsigned>(s.kind))) * 0x100000001b3ULL;
    return h;
  }
};
