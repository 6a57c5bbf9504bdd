#include "qbn/schema.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace qbn {

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  if (d.line > 0) os << d.line << ':' << d.column << ": ";
  os << (d.is_error() ? "error" : "warning") << '[' << d.code << "]: " << d.message;
  return os;
}

namespace {

Diagnostic make_error(std::string code, std::string message, SourceLoc at) {
  return Diagnostic{Severity::error, std::move(code), std::move(message), at.line, at.column};
}

std::uint32_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Schema

const TypeInfo& Schema::type(TypeId t) const {
  if (!contains(t)) throw Error("unknown-type", "type index " + std::to_string(t.index) + " out of range");
  return types_[t.index];
}

const RoleInfo& Schema::role(RoleId r) const {
  if (!contains(r)) throw Error("unknown-role", "role index " + std::to_string(r.index) + " out of range");
  return roles_[r.index];
}

std::optional<TypeId> Schema::find_type(std::string_view id) const {
  for (std::uint32_t i = 0; i < types_.size(); ++i)
    if (types_[i].id == id) return TypeId{i};
  return std::nullopt;
}

std::optional<RoleId> Schema::find_role(std::string_view id) const {
  for (std::uint32_t i = 0; i < roles_.size(); ++i)
    if (roles_[i].id == id) return RoleId{i};
  return std::nullopt;
}

std::vector<TypeId> Schema::object_types() const {
  std::vector<TypeId> out;
  for (std::uint32_t i = 0; i < types_.size(); ++i)
    if (types_[i].is_object) out.push_back(TypeId{i});
  return out;
}

const ContractionRule* Schema::find_contraction(RoleId in, RoleId out) const {
  for (const auto& c : contractions_)
    if (c.role_in == in && c.role_out == out) return &c;
  return nullptr;
}

bool Schema::idf_by(TypeId x, TypeId y) const {
  (void)type(x);
  (void)type(y);
  return idf_[x.index][y.index];
}

bool Schema::type_related(TypeId x, TypeId y) const { return type_class(x) == type_class(y); }

std::uint32_t Schema::type_class(TypeId x) const {
  (void)type(x);
  return class_[x.index];
}

bool Schema::operator==(const Schema& other) const {
  return types_ == other.types_ && roles_ == other.roles_ && spec_ == other.spec_ &&
         poly_ == other.poly_ && contractions_ == other.contractions_;
}

void Schema::index() {
  const std::size_t n = types_.size();

  // IdfBy: transitive closure of Spec and Poly (Warshall).
  idf_.assign(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : spec_) idf_[a.index][b.index] = true;
  for (const auto& [a, b] : poly_) idf_[a.index][b.index] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (idf_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (idf_[k][j]) idf_[i][j] = true;

  // Type relatedness is the equivalence closure of IdfBy: union-find over
  // the undirected generator edges.
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto unite = [&](TypeId a, TypeId b) {
    auto ra = find_root(parent, a.index);
    auto rb = find_root(parent, b.index);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  };
  for (const auto& [a, b] : spec_) unite(a, b);
  for (const auto& [a, b] : poly_) unite(a, b);
  class_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) class_[i] = find_root(parent, i);
}

// ---------------------------------------------------------------------------
// SchemaBuilder

void SchemaBuilder::add_object(std::string id, std::optional<std::string> display, SourceLoc at) {
  types_.push_back(PendingType{std::move(id), false, false, std::move(display), at, {}});
}

void SchemaBuilder::add_fact(std::string id, bool objectified, std::optional<std::string> display,
                             SourceLoc at) {
  types_.push_back(PendingType{std::move(id), true, objectified, std::move(display), at, {}});
}

void SchemaBuilder::add_role(std::string id, std::string player, std::optional<std::string> fwd,
                             std::optional<std::string> rev, SourceLoc at) {
  if (types_.empty() || !types_.back().is_fact) {
    early_.push_back(make_error("role-outside-fact", "role '" + id + "' is not inside a fact", at));
    return;
  }
  types_.back().roles.push_back(roles_.size());
  roles_.push_back(PendingRole{std::move(id), std::move(player), std::move(fwd), std::move(rev), at,
                               types_.size() - 1});
}

void SchemaBuilder::add_spec(std::string sub, std::string super, SourceLoc at) {
  spec_.push_back(PendingEdge{std::move(sub), std::move(super), at});
}

void SchemaBuilder::add_poly(std::string a, std::string b, SourceLoc at) {
  poly_.push_back(PendingEdge{std::move(a), std::move(b), at});
}

void SchemaBuilder::add_contraction(std::string role_in, std::string role_out, std::string phrase,
                                    SourceLoc at) {
  contractions_.push_back(
      PendingContraction{std::move(role_in), std::move(role_out), std::move(phrase), at});
}

ParseResult<Schema> SchemaBuilder::build() const {
  std::vector<Diagnostic> diags = early_;
  Schema s;

  // Identifiers are unique across types and roles.
  std::unordered_map<std::string, std::size_t> type_ix, role_ix;
  auto taken = [&](const std::string& id) { return type_ix.count(id) || role_ix.count(id); };

  for (const auto& pt : types_) {
    if (taken(pt.id)) {
      diags.push_back(make_error("duplicate-id", "identifier '" + pt.id + "' declared twice", pt.at));
      continue;
    }
    if (pt.display && pt.display->empty())
      diags.push_back(make_error("empty-name", "empty display name for '" + pt.id + "'", pt.at));
    if (pt.is_fact && pt.roles.empty())
      diags.push_back(make_error("partition-violation",
                                 "fact '" + pt.id + "' has no roles; every relationship type needs at least one",
                                 pt.at));
    type_ix.emplace(pt.id, s.types_.size());
    TypeInfo ti;
    ti.id = pt.id;
    ti.is_relationship = pt.is_fact;
    ti.is_object = !pt.is_fact || pt.objectified;
    ti.display = pt.display;
    s.types_.push_back(std::move(ti));
  }

  // Roles are collected in declaration order; the partition block of each
  // fact keeps that order.
  for (const auto& pr : roles_) {
    if (taken(pr.id)) {
      diags.push_back(make_error("duplicate-id", "identifier '" + pr.id + "' declared twice", pr.at));
      continue;
    }
    const auto& fact = types_[pr.fact];
    auto fit = type_ix.find(fact.id);
    if (fit == type_ix.end() || !s.types_[fit->second].is_relationship) continue;  // duplicate fact id
    auto pit = type_ix.find(pr.player);
    if (pit == type_ix.end()) {
      diags.push_back(make_error("unknown-player",
                                 "role '" + pr.id + "' is played by undeclared type '" + pr.player + "'", pr.at));
      continue;
    }
    if (!s.types_[pit->second].is_object) {
      diags.push_back(make_error("non-object-player",
                                 "role '" + pr.id + "' is played by '" + pr.player +
                                     "', which is not an object type (objectify it first)",
                                 pr.at));
      continue;
    }
    if ((pr.fwd && pr.fwd->empty()) || (pr.rev && pr.rev->empty()))
      diags.push_back(make_error("empty-phrase", "empty phrase on role '" + pr.id + "'", pr.at));
    RoleId rid{static_cast<std::uint32_t>(s.roles_.size())};
    role_ix.emplace(pr.id, rid.index);
    TypeId rel{static_cast<std::uint32_t>(fit->second)};
    s.roles_.push_back(RoleInfo{pr.id, rel, TypeId{static_cast<std::uint32_t>(pit->second)}, pr.fwd, pr.rev});
    s.types_[rel.index].roles.push_back(rid);
  }

  auto resolve_edges = [&](const std::vector<PendingEdge>& in, std::vector<TypePair>& out,
                           const char* what) {
    for (const auto& e : in) {
      bool ok = true;
      TypePair p;
      for (int side = 0; side < 2; ++side) {
        const std::string& name = side == 0 ? e.a : e.b;
        auto it = type_ix.find(name);
        if (it == type_ix.end()) {
          diags.push_back(make_error("unknown-type",
                                     std::string(what) + " edge references undeclared type '" + name + "'", e.at));
          ok = false;
          continue;
        }
        if (!s.types_[it->second].is_object) {
          diags.push_back(make_error("non-object-type",
                                     std::string(what) + " edge references '" + name +
                                         "', which is not an object type",
                                     e.at));
          ok = false;
        }
        (side == 0 ? p.first : p.second) = TypeId{static_cast<std::uint32_t>(it->second)};
      }
      if (!ok) continue;
      if (std::find(out.begin(), out.end(), p) != out.end()) {
        diags.push_back(Diagnostic{Severity::warning, "duplicate-edge",
                                   std::string(what) + " " + e.a + " " + e.b + " declared twice", e.at.line,
                                   e.at.column});
        continue;
      }
      out.push_back(p);
    }
  };
  resolve_edges(spec_, s.spec_, "spec");
  resolve_edges(poly_, s.poly_, "poly");

  for (const auto& c : contractions_) {
    auto in = role_ix.find(c.in);
    auto out = role_ix.find(c.out);
    if (in == role_ix.end() || out == role_ix.end()) {
      diags.push_back(make_error("unknown-role",
                                 "contraction references undeclared role '" +
                                     (in == role_ix.end() ? c.in : c.out) + "'",
                                 c.at));
      continue;
    }
    RoleId ri{static_cast<std::uint32_t>(in->second)}, ro{static_cast<std::uint32_t>(out->second)};
    if (ri == ro || s.roles_[ri.index].rel != s.roles_[ro.index].rel) {
      diags.push_back(make_error("bad-contraction",
                                 "contraction needs two distinct roles of one relationship type", c.at));
      continue;
    }
    if (c.phrase.empty()) {
      diags.push_back(make_error("empty-phrase", "empty contraction phrase", c.at));
      continue;
    }
    if (s.find_contraction(ri, ro)) {
      diags.push_back(make_error("duplicate-contraction",
                                 "contraction " + c.in + " " + c.out + " declared twice", c.at));
      continue;
    }
    s.contractions_.push_back(ContractionRule{ri, ro, c.phrase});
  }

  if (has_errors(diags)) return {std::nullopt, std::move(diags)};

  s.index();

  // Proper IdfBy cycles are rejected; a self edge is plain reflexivity.
  for (std::size_t x = 0; x < s.types_.size(); ++x)
    for (std::size_t y = x + 1; y < s.types_.size(); ++y)
      if (s.idf_[x][y] && s.idf_[y][x]) {
        SourceLoc at;
        for (const auto& pt : types_)
          if (pt.id == s.types_[x].id) at = pt.at;
        diags.push_back(make_error("idf-cycle",
                                   "types '" + s.types_[x].id + "' and '" + s.types_[y].id +
                                       "' identify each other (cyclic spec/poly)",
                                   at));
      }
  if (has_errors(diags)) return {std::nullopt, std::move(diags)};

  return {std::move(s), std::move(diags)};
}

// ---------------------------------------------------------------------------

TypeId rel_of(const Schema& schema, RoleId r) { return schema.role(r).rel; }

std::vector<TypePair> idf_by(const Schema& schema) {
  std::vector<TypePair> out;
  const auto n = static_cast<std::uint32_t>(schema.type_count());
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y)
      if (schema.idf_by(TypeId{x}, TypeId{y})) out.emplace_back(TypeId{x}, TypeId{y});
  return out;
}

bool type_related(const Schema& schema, TypeId x, TypeId y) { return schema.type_related(x, y); }

}  // namespace qbn
