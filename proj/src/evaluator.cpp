#include "qbn/evaluator.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace qbn {

void PairBag::add(InstanceId a, InstanceId b, std::uint64_t multiplicity) {
  if (multiplicity == 0) return;
  entries_[{a, b}] += multiplicity;
}

std::uint64_t PairBag::multiplicity(InstanceId a, InstanceId b) const {
  auto it = entries_.find({a, b});
  return it == entries_.end() ? 0 : it->second;
}

std::uint64_t PairBag::total() const {
  std::uint64_t n = 0;
  for (const auto& [_, m] : entries_) n += m;
  return n;
}

PairBag PairBag::transposed() const {
  PairBag out;
  for (const auto& [pair, m] : entries_) out.entries_.emplace(Pair{pair.second, pair.first}, m);
  return out;
}

PairBag compose(const PairBag& left, const PairBag& right) {
  std::unordered_map<std::uint32_t, std::vector<std::pair<InstanceId, std::uint64_t>>> by_source;
  for (const auto& [pair, m] : right.entries()) by_source[pair.first.index].emplace_back(pair.second, m);
  PairBag out;
  for (const auto& [pair, m] : left.entries()) {
    auto it = by_source.find(pair.second.index);
    if (it == by_source.end()) continue;
    for (const auto& [c, m2] : it->second) out.add(pair.first, c, m * m2);
  }
  return out;
}

PairBag relation_of_type(const Population& pop, TypeId t) {
  PairBag out;
  for (InstanceId x : pop.members(t)) out.add(x, x);
  return out;
}

PairBag relation_of_role(const Population& pop, RoleId r, bool reversed) {
  const TypeId rel = pop.schema().rel_of(r);
  PairBag out;
  for (InstanceId y : pop.members(rel)) {
    InstanceId x = pop.filler(y, r);
    if (reversed)
      out.add(y, x);
    else
      out.add(x, y);
  }
  return out;
}

namespace {

using Frontier = std::vector<std::pair<InstanceId, std::uint64_t>>;  // sorted by instance

// Pushes one anchor instance through every step of the path.
Frontier propagate(const Population& pop, const PathExpr& p, InstanceId start) {
  const Schema& schema = pop.schema();
  auto types = p.types();
  auto steps = p.steps();
  Frontier cur{{start, 1}};
  std::map<InstanceId, std::uint64_t> acc;
  for (std::size_t i = 0; i < steps.size() && !cur.empty(); ++i) {
    const PathStep s = steps[i];
    const TypeId next_type = types[i + 1];
    acc.clear();
    for (const auto& [x, count] : cur) {
      if (s.kind == StepKind::enter) {
        for (InstanceId y : pop.tuples_filled_by(s.role, x))
          if (pop.has_member(next_type, y)) acc[y] += count;
      } else {
        auto rel = pop.tuple_type(x);
        if (!rel || *rel != schema.rel_of(s.role)) continue;
        InstanceId y = pop.filler(x, s.role);
        if (pop.has_member(next_type, y)) acc[y] += count;
      }
    }
    cur.assign(acc.begin(), acc.end());
  }
  return cur;
}

}  // namespace

PairBag evaluate(const Population& pop, const PathExpr& p, GrammarMode mode) {
  if (p.empty()) throw Error("empty-path", "the empty path cannot be evaluated");
  if (!is_wellformed(pop.schema(), p, mode)) throw Error("malformed-path", "path is not a node of the navigation graph");

  auto anchors = pop.members(p.anchor());
  const auto n = static_cast<std::ptrdiff_t>(anchors.size());
  std::vector<Frontier> results(anchors.size());

#pragma omp parallel for schedule(dynamic, 8) if (n > 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = propagate(pop, p, anchors[static_cast<std::size_t>(i)]);

  PairBag out;
  for (std::size_t i = 0; i < anchors.size(); ++i)
    for (const auto& [y, m] : results[i]) out.add(anchors[i], y, m);
  return out;
}

namespace reference {

PairBag evaluate(const Population& pop, const PathExpr& p) {
  if (p.empty()) throw Error("empty-path", "the empty path cannot be evaluated");
  PairBag acc = relation_of_type(pop, p.anchor());
  for (std::size_t i = 0; i < p.length(); ++i) {
    const PathStep s = p.steps()[i];
    acc = compose(acc, relation_of_role(pop, s.role, s.kind == StepKind::exit));
    acc = compose(acc, relation_of_type(pop, p.types()[i + 1]));
  }
  return acc;
}

}  // namespace reference

ResultTable result_view(const PairBag& bag, const Population& pop) {
  ResultTable table;
  std::map<std::string, std::uint64_t> focus;
  for (const auto& [pair, m] : bag.entries()) {
    table.pairs.push_back(ResultRow{pop.name(pair.first), pop.name(pair.second), m});
    focus[pop.name(pair.second)] += m;
    table.total += m;
  }
  std::sort(table.pairs.begin(), table.pairs.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.anchor, a.focus) < std::tie(b.anchor, b.focus);
  });
  for (auto& [name, m] : focus) table.focus.push_back(FocusCount{name, m});
  return table;
}

std::string export_delimited(const ResultTable& table, char d) {
  std::ostringstream os;
  os << "anchor" << d << "focus" << d << "multiplicity\n";
  for (const auto& r : table.pairs) os << r.anchor << d << r.focus << d << r.multiplicity << '\n';
  os << '\n' << "focus" << d << "multiplicity\n";
  for (const auto& f : table.focus) os << f.instance << d << f.multiplicity << '\n';
  return os.str();
}

}  // namespace qbn
