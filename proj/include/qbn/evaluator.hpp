#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qbn/path.hpp"
#include "qbn/population.hpp"

namespace qbn {

/// Multiset of ordered instance pairs.
class PairBag {
 public:
  using Pair = std::pair<InstanceId, InstanceId>;

  void add(InstanceId a, InstanceId b, std::uint64_t multiplicity = 1);

  [[nodiscard]] std::uint64_t multiplicity(InstanceId a, InstanceId b) const;
  [[nodiscard]] std::size_t distinct_size() const { return entries_.size(); }
  [[nodiscard]] std::uint64_t total() const;
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] const std::map<Pair, std::uint64_t>& entries() const { return entries_; }

  [[nodiscard]] PairBag transposed() const;

  bool operator==(const PairBag&) const = default;

 private:
  std::map<Pair, std::uint64_t> entries_;
};

/// mult(a, c) = sum over b of left(a, b) * right(b, c).
[[nodiscard]] PairBag compose(const PairBag& left, const PairBag& right);

/// Identity over the population of t.
[[nodiscard]] PairBag relation_of_type(const Population& pop, TypeId t);
/// (filler of r, tuple) for every tuple of Rel(r); transposed when reversed.
[[nodiscard]] PairBag relation_of_role(const Population& pop, RoleId r, bool reversed);

/// Composes the relations of a path left to right. Pairs run (anchor
/// instance, focus instance). Parallel over anchor instances when built
/// with OpenMP. Throws Error("empty-path") / Error("malformed-path").
[[nodiscard]] PairBag evaluate(const Population& pop, const PathExpr& p, GrammarMode mode = GrammarMode::lenient);

namespace reference {

/// Serial evaluation by folding `compose` over the per-element relations.
/// Kept as the readable definition for tests and benchmarks.
[[nodiscard]] PairBag evaluate(const Population& pop, const PathExpr& p);

}  // namespace reference

struct ResultRow {
  std::string anchor;
  std::string focus;
  std::uint64_t multiplicity = 0;
  bool operator==(const ResultRow&) const = default;
};

struct FocusCount {
  std::string instance;
  std::uint64_t multiplicity = 0;
  bool operator==(const FocusCount&) const = default;
};

/// The GO! view: the full pair listing and the distinct focus instances
/// with their multiplicity, both ordered by instance name.
struct ResultTable {
  std::vector<ResultRow> pairs;
  std::vector<FocusCount> focus;
  std::uint64_t total = 0;
};

[[nodiscard]] ResultTable result_view(const PairBag& bag, const Population& pop);

/// Delimiter-separated export: a pair section (anchor, focus, multiplicity),
/// a blank line, then a focus section (focus, multiplicity).
[[nodiscard]] std::string export_delimited(const ResultTable& table, char delimiter = '\t');

}  // namespace qbn
