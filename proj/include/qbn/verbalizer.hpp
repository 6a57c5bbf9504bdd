#pragma once

#include <string>
#include <string_view>

#include "qbn/path.hpp"
#include "qbn/schema.hpp"

namespace qbn {

struct VerbalizeOptions {
  /// Emit "(as a <type>)" where a step is taken through a type-related
  /// type rather than the step's own player/relationship type.
  bool mark_supertype_steps = false;
  /// Apply schema-declared contractions to enter/exit pairs.
  bool use_contractions = true;

  bool operator==(const VerbalizeOptions&) const = default;
};

/// Text shown for the empty path (the start node).
inline constexpr std::string_view kStartText = "start";

// Effective naming: the declared entry, or the default template.
[[nodiscard]] std::string display_name(const Schema& schema, TypeId t);
[[nodiscard]] std::string fwd_phrase(const Schema& schema, RoleId r);
[[nodiscard]] std::string rev_phrase(const Schema& schema, RoleId r);

/// "a <noun>" or "an <noun>" by leading vowel.
[[nodiscard]] std::string with_indefinite_article(std::string_view noun);

/// Renders a nonempty path as a phrase headed by "the <anchor>".
/// Throws Error("empty-path").
[[nodiscard]] std::string verbalize(const Schema& schema, const PathExpr& p,
                                    const VerbalizeOptions& opts = {});

/// Copy of `schema` with every absent naming entry filled from templates:
/// types get their lowercased identifier, roles get fwd "with as <id>" and
/// rev "which is <id> of".
[[nodiscard]] Schema default_naming(const Schema& schema);

}  // namespace qbn
