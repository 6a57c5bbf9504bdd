#include "qbn/navigator.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbn {

namespace {

void require_node(const Schema& schema, const PathExpr& n, GrammarMode mode) {
  if (!is_wellformed(schema, n, mode))
    throw Error("malformed-path", "path is not a node of the navigation graph");
}

bool contains(const std::vector<PathExpr>& v, const PathExpr& p) {
  return std::find(v.begin(), v.end(), p) != v.end();
}

}  // namespace

std::vector<PathExpr> refinements(const Schema& schema, const PathExpr& n, GrammarMode mode) {
  require_node(schema, n, mode);
  std::vector<PathExpr> out;
  if (n.empty()) {
    // Relationship types only appear here once objectified.
    for (TypeId t : schema.object_types()) out.emplace_back(t);
    return out;
  }

  const TypeId x = n.focus();
  const auto roles = static_cast<std::uint32_t>(schema.role_count());

  // Enter an objectified (or n-ary) relationship type.
  for (std::uint32_t i = 0; i < roles; ++i) {
    const RoleId r{i};
    const TypeId rel = schema.rel_of(r);
    if (schema.type_related(x, schema.player(r)) && is_legal_focus(schema, rel, mode))
      out.push_back(n.extended(PathStep{StepKind::enter, r}, rel));
  }
  // Leave the focused relationship type through one of its roles.
  for (std::uint32_t i = 0; i < roles; ++i) {
    const RoleId r{i};
    if (schema.type_related(x, schema.rel_of(r)))
      out.push_back(n.extended(PathStep{StepKind::exit, r}, schema.player(r)));
  }
  // Through a relationship type: n-1 continuations per role played.
  for (std::uint32_t i = 0; i < roles; ++i) {
    const RoleId r{i};
    if (!schema.type_related(x, schema.player(r))) continue;
    const TypeId rel = schema.rel_of(r);
    for (RoleId q : schema.roles_of(rel)) {
      if (q == r) continue;
      out.push_back(
          n.extended(PathStep{StepKind::enter, r}, rel).extended(PathStep{StepKind::exit, q}, schema.player(q)));
    }
  }
  return out;
}

std::vector<PathExpr> enlargements(const Schema& schema, const PathExpr& n, GrammarMode mode) {
  require_node(schema, n, mode);
  std::vector<PathExpr> out;
  if (n.empty()) return out;

  std::vector<PathExpr> candidates;
  if (n.length() == 0) {
    candidates.emplace_back();
  } else {
    candidates.push_back(n.prefix(n.length() - 1));
    if (n.length() >= 2) candidates.push_back(n.prefix(n.length() - 2));
  }
  // A candidate is a predecessor only if it actually generates n.
  for (auto& m : candidates)
    if (is_wellformed(schema, m, mode) && contains(refinements(schema, m, mode), n)) out.push_back(std::move(m));
  return out;
}

std::vector<PathExpr> associations(const Schema& schema, const PathExpr& n, GrammarMode mode) {
  require_node(schema, n, mode);
  std::vector<PathExpr> out;
  if (n.empty()) return out;

  const TypeId x = n.focus();
  for (std::uint32_t i = 0; i < schema.type_count(); ++i) {
    const TypeId y{i};
    if (y == x || !schema.type_related(x, y)) continue;
    PathExpr alt = n.with_focus(y);
    if (!is_wellformed(schema, alt, mode))
      throw std::logic_error("tail replacement by a type-related type produced an ill-formed path");
    out.push_back(std::move(alt));
  }
  PathExpr rev = reverse(n);
  if (rev != n && !contains(out, rev)) out.push_back(std::move(rev));
  return out;
}

std::string_view to_string(MoveKind k) {
  switch (k) {
    case MoveKind::refine: return "refine";
    case MoveKind::enlarge: return "enlarge";
    case MoveKind::associate: return "associate";
    case MoveKind::reverse: return "reverse";
  }
  return "?";
}

std::optional<MoveKind> parse_move_kind(std::string_view s) {
  if (s == "refine") return MoveKind::refine;
  if (s == "enlarge") return MoveKind::enlarge;
  if (s == "associate") return MoveKind::associate;
  if (s == "reverse") return MoveKind::reverse;
  return std::nullopt;
}

Session::Session(std::shared_ptr<const Schema> schema, VerbalizeOptions options, GrammarMode mode)
    : schema_(std::move(schema)), options_(options), mode_(mode) {
  if (!schema_) throw std::invalid_argument("session needs a schema");
}

Session Session::with_options(VerbalizeOptions options) const {
  Session s = *this;
  s.options_ = options;
  return s;
}

std::string node_text(const Schema& schema, const PathExpr& p, const VerbalizeOptions& opts) {
  return p.empty() ? std::string(kStartText) : verbalize(schema, p, opts);
}

NodePresentation present(const Session& session) {
  return present(session.schema(), session.focus(), session.options(), session.mode());
}

NodePresentation present(const Schema& schema, const PathExpr& n, const VerbalizeOptions& opts, GrammarMode mode) {

  auto describe = [&](std::vector<PathExpr> paths) {
    std::vector<Alternative> out;
    out.reserve(paths.size());
    for (auto& p : paths) {
      std::string text = node_text(schema, p, opts);
      out.push_back(Alternative{std::move(p), std::move(text)});
    }
    return out;
  };

  NodePresentation np;
  np.focus = n;
  np.focus_text = node_text(schema, n, opts);
  np.refinements = describe(refinements(schema, n, mode));
  np.enlargements = describe(enlargements(schema, n, mode));
  np.associations = describe(associations(schema, n, mode));
  return np;
}

Session apply_move(const Session& session, const Move& m) {
  const Schema& schema = session.schema();
  const PathExpr& n = session.focus();
  const GrammarMode mode = session.mode();

  PathExpr target;
  auto offered = [&](const std::vector<PathExpr>& env) {
    if (!contains(env, m.target))
      throw Error("illegal-move", "'" + canonical_text(schema, m.target) + "' is not a " +
                                      std::string(to_string(m.kind)) + " target of '" +
                                      canonical_text(schema, n) + "'");
    target = m.target;
  };
  switch (m.kind) {
    case MoveKind::refine: offered(refinements(schema, n, mode)); break;
    case MoveKind::enlarge: offered(enlargements(schema, n, mode)); break;
    case MoveKind::associate: offered(associations(schema, n, mode)); break;
    case MoveKind::reverse:
      if (n.empty() || reverse(n) == n)
        throw Error("illegal-move", "'" + canonical_text(schema, n) + "' has no distinct reversal");
      target = reverse(n);
      break;
  }

  Session next = session;
  next.focus_ = target;
  next.history_.push_back(HistoryEntry{m.kind == MoveKind::reverse ? Move::reverse_path() : m, std::move(target)});
  return next;
}

Session replay(std::shared_ptr<const Schema> schema, const std::vector<Move>& moves, VerbalizeOptions options,
               GrammarMode mode) {
  Session s(std::move(schema), options, mode);
  for (const auto& m : moves) s = apply_move(s, m);
  return s;
}

}  // namespace qbn
