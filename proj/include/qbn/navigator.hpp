#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbn/path.hpp"
#include "qbn/schema.hpp"
#include "qbn/verbalizer.hpp"

namespace qbn {

// Direct environment of a node. All three are computed on demand from the
// schema; nothing about the navigation graph is materialized.
//
// Ordering is deterministic:
//  refinements  - start node: object types in declaration order; otherwise
//                 enter-role links, then exit-role links, then through links,
//                 each by role declaration order (then co-role order)
//  enlargements - drop one step before drop two steps
//  associations - type-related tail replacements in type declaration order,
//                 then the reversal
//
// All three throw Error("malformed-path") for paths that are not nodes.

[[nodiscard]] std::vector<PathExpr> refinements(const Schema& schema, const PathExpr& n,
                                                GrammarMode mode = GrammarMode::lenient);
[[nodiscard]] std::vector<PathExpr> enlargements(const Schema& schema, const PathExpr& n,
                                                 GrammarMode mode = GrammarMode::lenient);
[[nodiscard]] std::vector<PathExpr> associations(const Schema& schema, const PathExpr& n,
                                                 GrammarMode mode = GrammarMode::lenient);

enum class MoveKind { refine, enlarge, associate, reverse };

[[nodiscard]] std::string_view to_string(MoveKind k);
[[nodiscard]] std::optional<MoveKind> parse_move_kind(std::string_view s);

struct Move {
  MoveKind kind = MoveKind::refine;
  PathExpr target;  // unused for MoveKind::reverse

  static Move reverse_path() { return Move{MoveKind::reverse, {}}; }
  bool operator==(const Move&) const = default;
};

struct HistoryEntry {
  Move move;
  PathExpr result;
  bool operator==(const HistoryEntry&) const = default;
};

struct Alternative {
  PathExpr path;
  std::string text;
  bool operator==(const Alternative&) const = default;
};

struct NodePresentation {
  PathExpr focus;
  std::string focus_text;
  std::vector<Alternative> refinements;
  std::vector<Alternative> enlargements;
  std::vector<Alternative> associations;
  bool operator==(const NodePresentation&) const = default;
};

/// A navigation state. Sessions are values: moves return a new session
/// and leave the old one untouched.
class Session {
 public:
  explicit Session(std::shared_ptr<const Schema> schema, VerbalizeOptions options = {},
                   GrammarMode mode = GrammarMode::lenient);

  [[nodiscard]] const Schema& schema() const { return *schema_; }
  [[nodiscard]] const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }
  [[nodiscard]] const PathExpr& focus() const { return focus_; }
  [[nodiscard]] const std::vector<HistoryEntry>& history() const { return history_; }
  [[nodiscard]] const VerbalizeOptions& options() const { return options_; }
  [[nodiscard]] GrammarMode mode() const { return mode_; }

  [[nodiscard]] Session with_options(VerbalizeOptions options) const;

 private:
  friend Session apply_move(const Session& session, const Move& m);

  std::shared_ptr<const Schema> schema_;
  PathExpr focus_;
  std::vector<HistoryEntry> history_;
  VerbalizeOptions options_;
  GrammarMode mode_;
};

/// Text for a node under the given options; "start" for the empty path.
[[nodiscard]] std::string node_text(const Schema& schema, const PathExpr& p, const VerbalizeOptions& opts);

[[nodiscard]] NodePresentation present(const Session& session);
/// Presentation of an arbitrary node. Throws Error("malformed-path").
[[nodiscard]] NodePresentation present(const Schema& schema, const PathExpr& n, const VerbalizeOptions& opts = {},
                                       GrammarMode mode = GrammarMode::lenient);

/// Throws Error("illegal-move") when the target is not in the current
/// environment.
[[nodiscard]] Session apply_move(const Session& session, const Move& m);

/// Replays moves from the start node.
[[nodiscard]] Session replay(std::shared_ptr<const Schema> schema, const std::vector<Move>& moves,
                             VerbalizeOptions options = {}, GrammarMode mode = GrammarMode::lenient);

}  // namespace qbn
