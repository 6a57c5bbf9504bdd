#include "qbn/path.hpp"

#include <algorithm>
#include <sstream>

namespace qbn {

TypeId PathExpr::anchor() const {
  if (empty()) throw Error("empty-path", "the empty path has no anchor type");
  return types_.front();
}

TypeId PathExpr::focus() const {
  if (empty()) throw Error("empty-path", "the empty path has no focus type");
  return types_.back();
}

PathExpr PathExpr::extended(PathStep step, TypeId next) const {
  if (empty()) throw Error("empty-path", "cannot extend the empty path by a role");
  PathExpr p = *this;
  p.steps_.push_back(step);
  p.types_.push_back(next);
  return p;
}

PathExpr PathExpr::with_focus(TypeId t) const {
  if (empty()) throw Error("empty-path", "the empty path has no focus type");
  PathExpr p = *this;
  p.types_.back() = t;
  return p;
}

PathExpr PathExpr::prefix(std::size_t steps) const {
  if (empty()) throw Error("empty-path", "the empty path has no prefix");
  PathExpr p;
  p.types_.assign(types_.begin(), types_.begin() + static_cast<std::ptrdiff_t>(steps) + 1);
  p.steps_.assign(steps_.begin(), steps_.begin() + static_cast<std::ptrdiff_t>(steps));
  return p;
}

bool is_legal_focus(const Schema& schema, TypeId t, GrammarMode mode) {
  const auto& info = schema.type(t);
  if (info.is_object) return true;
  return mode == GrammarMode::lenient && info.roles.size() >= 3;
}

bool is_wellformed(const Schema& schema, const PathExpr& p, GrammarMode mode) {
  if (p.empty()) return true;
  auto types = p.types();
  auto steps = p.steps();
  for (auto t : types)
    if (!schema.contains(t)) return false;
  for (auto s : steps)
    if (!schema.contains(s.role)) return false;

  if (!is_legal_focus(schema, types[0], mode)) return false;
  for (std::size_t i = 1; i < types.size(); ++i) {
    const PathStep s = steps[i - 1];
    const TypeId from = types[i - 1];
    const TypeId to = types[i];
    const TypeId rel = schema.rel_of(s.role);
    const TypeId player = schema.player(s.role);
    if (s.kind == StepKind::enter) {
      if (!schema.type_related(from, player) || !schema.type_related(to, rel)) return false;
    } else {
      if (!schema.type_related(from, rel) || !schema.type_related(to, player)) return false;
    }
    if (is_legal_focus(schema, to, mode)) continue;
    // Only the middle of a through-step (enter r, exit q over one
    // relationship type, q != r) may stop at a non-focusable type.
    if (i == types.size() - 1) return false;
    const PathStep out = steps[i];
    if (s.kind != StepKind::enter || out.kind != StepKind::exit || out.role == s.role ||
        schema.rel_of(out.role) != rel)
      return false;
  }
  return true;
}

PathExpr reverse(const PathExpr& p) {
  if (p.empty()) throw Error("empty-path", "the empty path cannot be reversed");
  auto types = p.types();
  auto steps = p.steps();
  PathExpr r(types.back());
  for (std::size_t i = steps.size(); i-- > 0;) r = r.extended(steps[i].flipped(), types[i]);
  return r;
}

TypeId focus_type(const PathExpr& p) { return p.focus(); }
TypeId anchor_type(const PathExpr& p) { return p.anchor(); }

std::string canonical_text(const Schema& schema, const PathExpr& p) {
  if (p.empty()) return "()";
  std::string out = schema.type(p.types()[0]).id;
  for (std::size_t i = 0; i < p.length(); ++i) {
    const auto s = p.steps()[i];
    out += s.kind == StepKind::enter ? " >" : " <";
    out += schema.role(s.role).id;
    out += ' ';
    out += schema.type(p.types()[i + 1]).id;
  }
  return out;
}

PathExpr parse_path(const Schema& schema, std::string_view text) {
  std::vector<std::string> toks;
  {
    std::istringstream is{std::string(text)};
    std::string w;
    while (is >> w) toks.push_back(w);
  }
  auto bad = [&](const std::string& why) -> Error {
    return Error("bad-path", "cannot parse path '" + std::string(text) + "': " + why);
  };
  if (toks.empty()) throw bad("no tokens");
  if (toks.size() == 1 && toks[0] == "()") return PathExpr{};

  auto type_of = [&](const std::string& id) {
    auto t = schema.find_type(id);
    if (!t) throw bad("unknown type '" + id + "'");
    return *t;
  };

  PathExpr p(type_of(toks[0]));
  std::size_t i = 1;
  while (i < toks.size()) {
    std::string tok = toks[i++];
    if (tok.empty() || (tok[0] != '>' && tok[0] != '<')) throw bad("expected '>role' or '<role', found '" + tok + "'");
    StepKind kind = tok[0] == '>' ? StepKind::enter : StepKind::exit;
    std::string role_id = tok.substr(1);
    if (role_id.empty()) {
      if (i >= toks.size()) throw bad("missing role after '" + tok + "'");
      role_id = toks[i++];
    }
    auto r = schema.find_role(role_id);
    if (!r) throw bad("unknown role '" + role_id + "'");
    if (i >= toks.size()) throw bad("missing type after role '" + role_id + "'");
    p = p.extended(PathStep{kind, *r}, type_of(toks[i++]));
  }
  return p;
}

}  // namespace qbn
