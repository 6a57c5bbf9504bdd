#include "qbn/population.hpp"

#include <algorithm>

#include "lexer.hpp"

namespace qbn {

namespace {

Diagnostic pop_error(std::string code, std::string message, SourceLoc at) {
  return Diagnostic{Severity::error, std::move(code), std::move(message), at.line, at.column};
}

const std::vector<InstanceId> kNoInstances;

}  // namespace

std::optional<InstanceId> Population::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return InstanceId{it->second};
}

std::span<const InstanceId> Population::members(TypeId t) const {
  (void)schema_->type(t);
  return members_[t.index];
}

bool Population::has_member(TypeId t, InstanceId i) const {
  auto m = members(t);
  return std::binary_search(m.begin(), m.end(), i);
}

std::optional<TypeId> Population::tuple_type(InstanceId i) const {
  if (i.index >= tuple_type_.size()) return std::nullopt;
  return tuple_type_[i.index];
}

InstanceId Population::filler(InstanceId tuple, RoleId r) const {
  auto rel = tuple_type(tuple);
  if (!rel || *rel != schema_->rel_of(r))
    throw Error("unknown-role", "'" + name(tuple) + "' is not a tuple of the relationship type of role '" +
                                    schema_->role(r).id + "'");
  auto roles = schema_->roles_of(*rel);
  auto pos = static_cast<std::size_t>(std::find(roles.begin(), roles.end(), r) - roles.begin());
  return fillers_[tuple.index][pos];
}

std::span<const InstanceId> Population::tuples_filled_by(RoleId r, InstanceId x) const {
  (void)schema_->role(r);
  const auto& index = filled_by_[r.index];
  auto it = index.find(x.index);
  if (it == index.end()) return kNoInstances;
  return it->second;
}

std::size_t Population::tuple_count() const {
  return static_cast<std::size_t>(
      std::count_if(tuple_type_.begin(), tuple_type_.end(), [](const auto& t) { return t.has_value(); }));
}

// ---------------------------------------------------------------------------

void PopulationBuilder::add_instance(std::string type, std::string id, SourceLoc at) {
  instances_.push_back(PendingInstance{std::move(type), std::move(id), at});
}

void PopulationBuilder::add_tuple(std::string rel, std::string id,
                                  std::vector<std::pair<std::string, std::string>> fillers, SourceLoc at) {
  tuples_.push_back(PendingTuple{std::move(rel), std::move(id), std::move(fillers), at});
}

ParseResult<Population> PopulationBuilder::build() const {
  const Schema& schema = *schema_;
  std::vector<Diagnostic> diags;
  Population pop;
  pop.schema_ = schema_;
  pop.members_.resize(schema.type_count());

  auto intern = [&](const std::string& name) {
    auto [it, fresh] = pop.by_name_.emplace(name, static_cast<std::uint32_t>(pop.names_.size()));
    if (fresh) {
      pop.names_.push_back(name);
      pop.tuple_type_.emplace_back();
      pop.fillers_.emplace_back();
    }
    return InstanceId{it->second};
  };

  struct Placed {
    TypeId type;
    InstanceId id;
    SourceLoc at;
  };
  std::vector<Placed> placed;

  for (const auto& pi : instances_) {
    auto t = schema.find_type(pi.type);
    if (!t) {
      diags.push_back(pop_error("unknown-type", "instance of undeclared type '" + pi.type + "'", pi.at));
      continue;
    }
    if (schema.is_relationship(*t)) {
      diags.push_back(pop_error("not-instance-type",
                                "'" + pi.type + "' is a relationship type; declare its population with tuple lines",
                                pi.at));
      continue;
    }
    InstanceId id = intern(pi.id);
    auto& m = pop.members_[t->index];
    if (std::find(m.begin(), m.end(), id) != m.end()) {
      diags.push_back(Diagnostic{Severity::warning, "duplicate-instance",
                                 "instance " + pi.type + " " + pi.id + " listed twice", pi.at.line, pi.at.column});
      continue;
    }
    m.push_back(id);
    placed.push_back(Placed{*t, id, pi.at});
  }

  struct PlacedTuple {
    InstanceId id;
    SourceLoc at;
  };
  std::vector<PlacedTuple> placed_tuples;

  for (const auto& pt : tuples_) {
    auto rel = schema.find_type(pt.rel);
    if (!rel) {
      diags.push_back(pop_error("unknown-type", "tuple of undeclared type '" + pt.rel + "'", pt.at));
      continue;
    }
    if (!schema.is_relationship(*rel)) {
      diags.push_back(pop_error("not-relationship-type", "'" + pt.rel + "' is not a relationship type", pt.at));
      continue;
    }
    if (auto existing = pop.by_name_.find(pt.id);
        existing != pop.by_name_.end() && pop.tuple_type_[existing->second]) {
      diags.push_back(pop_error("duplicate-tuple", "tuple id '" + pt.id + "' used twice", pt.at));
      continue;
    }
    auto roles = schema.roles_of(*rel);
    std::vector<std::optional<InstanceId>> slots(roles.size());
    bool ok = true;
    for (const auto& [role_name, inst] : pt.fillers) {
      auto r = schema.find_role(role_name);
      if (!r || schema.rel_of(*r) != *rel) {
        diags.push_back(pop_error("unknown-role", "'" + role_name + "' is not a role of '" + pt.rel + "'", pt.at));
        ok = false;
        continue;
      }
      auto pos = static_cast<std::size_t>(std::find(roles.begin(), roles.end(), *r) - roles.begin());
      if (slots[pos]) {
        diags.push_back(pop_error("duplicate-filler", "role '" + role_name + "' filled twice in '" + pt.id + "'", pt.at));
        ok = false;
        continue;
      }
      slots[pos] = intern(inst);
    }
    for (std::size_t k = 0; k < roles.size(); ++k)
      if (!slots[k]) {
        diags.push_back(pop_error("missing-filler",
                                  "tuple '" + pt.id + "' has no filler for role '" + schema.role(roles[k]).id + "'",
                                  pt.at));
        ok = false;
      }
    if (!ok) continue;

    InstanceId id = intern(pt.id);
    pop.tuple_type_[id.index] = *rel;
    auto& f = pop.fillers_[id.index];
    for (auto& s : slots) f.push_back(*s);
    pop.members_[rel->index].push_back(id);
    placed_tuples.push_back(PlacedTuple{id, pt.at});
  }

  for (auto& m : pop.members_) std::sort(m.begin(), m.end());

  // An instance line naming a tuple id must place it in a type that may
  // share instances with the tuple's relationship type.
  for (const auto& p : placed) {
    auto rel = pop.tuple_type_[p.id.index];
    if (rel && !schema.type_related(p.type, *rel))
      diags.push_back(pop_error("id-clash",
                                "'" + pop.names_[p.id.index] + "' is a tuple of '" + schema.type(*rel).id +
                                    "' and cannot be an instance of '" + schema.type(p.type).id + "'",
                                p.at));
  }

  // Filler typing: each filler lies in the population of a type related to
  // the role's player.
  for (const auto& pt : placed_tuples) {
    TypeId rel = *pop.tuple_type_[pt.id.index];
    auto roles = schema.roles_of(rel);
    for (std::size_t k = 0; k < roles.size(); ++k) {
      InstanceId x = pop.fillers_[pt.id.index][k];
      TypeId player = schema.player(roles[k]);
      bool typed = false;
      for (std::uint32_t t = 0; t < schema.type_count() && !typed; ++t)
        typed = schema.type_related(TypeId{t}, player) && pop.has_member(TypeId{t}, x);
      if (!typed)
        diags.push_back(pop_error("ill-typed-filler",
                                  "filler '" + pop.names_[x.index] + "' of role '" + schema.role(roles[k]).id +
                                      "' in '" + pop.names_[pt.id.index] + "' is not an instance of '" +
                                      schema.type(player).id + "' or a related type",
                                  pt.at));
    }
  }

  for (const auto& [sub, super] : schema.spec_edges())
    for (InstanceId x : pop.members_[sub.index])
      if (!pop.has_member(super, x))
        diags.push_back(pop_error("spec-subset",
                                  "'" + pop.names_[x.index] + "' is a " + schema.type(sub).id + " but not a " +
                                      schema.type(super).id,
                                  {}));

  if (has_errors(diags)) return {std::nullopt, std::move(diags)};

  pop.filled_by_.resize(schema.role_count());
  for (std::uint32_t i = 0; i < pop.names_.size(); ++i) {
    auto rel = pop.tuple_type_[i];
    if (!rel) continue;
    auto roles = schema.roles_of(*rel);
    for (std::size_t k = 0; k < roles.size(); ++k)
      pop.filled_by_[roles[k].index][pop.fillers_[i][k].index].push_back(InstanceId{i});
  }
  return {std::move(pop), std::move(diags)};
}

// ---------------------------------------------------------------------------

ParseResult<Population> load_population(std::string_view source, std::shared_ptr<const Schema> schema) {
  using detail::Tok;
  detail::TokenCursor cur(detail::tokenize(source));
  PopulationBuilder builder(std::move(schema));
  std::vector<Diagnostic> diags;

  auto fail = [&](const detail::Token& t, std::string message) {
    diags.push_back(detail::syntax_error(t, std::move(message)));
    if (!cur.at_end()) cur.skip_line();
  };
  auto word_here = [&]() { return cur.peek().kind == Tok::word && !cur.peek().first_on_line; };

  while (!cur.at_end()) {
    const detail::Token kw = cur.peek();
    if (kw.kind != Tok::word || (kw.text != "instance" && kw.text != "tuple")) {
      fail(kw, "expected 'instance' or 'tuple', found " + detail::describe(kw));
      continue;
    }
    cur.next();
    SourceLoc at{kw.line, kw.column};
    if (!word_here()) {
      fail(cur.peek(), "expected type identifier after '" + kw.text + "'");
      continue;
    }
    std::string type = cur.next().text;
    if (!word_here()) {
      fail(cur.peek(), "expected identifier after type '" + type + "'");
      continue;
    }
    std::string id = cur.next().text;

    if (kw.text == "instance") {
      builder.add_instance(std::move(type), std::move(id), at);
    } else {
      if (cur.peek().kind != Tok::lbrace) {
        fail(cur.peek(), "expected '{' after tuple id");
        continue;
      }
      cur.next();
      std::vector<std::pair<std::string, std::string>> fillers;
      bool ok = true;
      while (cur.peek().kind != Tok::rbrace) {
        if (cur.peek().kind != Tok::word) {
          fail(cur.peek(), "expected '<role> = <instance>' or '}' in tuple, found " + detail::describe(cur.peek()));
          ok = false;
          break;
        }
        std::string role = cur.next().text;
        if (cur.peek().kind != Tok::equals) {
          fail(cur.peek(), "expected '=' after role '" + role + "'");
          ok = false;
          break;
        }
        cur.next();
        if (cur.peek().kind != Tok::word) {
          fail(cur.peek(), "expected instance identifier after '" + role + " ='");
          ok = false;
          break;
        }
        fillers.emplace_back(std::move(role), cur.next().text);
        if (cur.peek().kind == Tok::comma) cur.next();
      }
      if (!ok) continue;
      cur.next();  // '}'
      builder.add_tuple(std::move(type), std::move(id), std::move(fillers), at);
    }
    if (!cur.at_line_start()) fail(cur.peek(), "unexpected " + detail::describe(cur.peek()) + " at end of statement");
  }

  auto built = builder.build();
  diags.insert(diags.end(), built.diagnostics.begin(), built.diagnostics.end());
  if (has_errors(diags)) return {std::nullopt, std::move(diags)};
  return {std::move(built.value), std::move(diags)};
}

}  // namespace qbn
