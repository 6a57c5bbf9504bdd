#include <doctest.h>

#include "fixtures.hpp"
#include "qbn/evaluator.hpp"
#include "qbn/navigator.hpp"

using namespace qbn;

namespace {

const char* kSchema =
    "object A\nobject B\nobject Top\nspec A Top\n"
    "fact F { role r player A\n role q player B }\n"
    "fact M objectified { role x player A\n role y player B }\n";

using Named = std::map<std::pair<std::string, std::string>, std::uint64_t>;

Named named(const Population& pop, const PairBag& bag) {
  Named out;
  for (const auto& [k, v] : bag.entries()) out[{pop.name(k.first), pop.name(k.second)}] = v;
  return out;
}

}  // namespace

TEST_CASE("type and role relations") {
  auto s = testfx::schema_from(kSchema);
  auto p = testfx::population(
      "instance A a1\ninstance A a2\ninstance Top a1\ninstance Top a2\ninstance B b1\n"
      "tuple F f1 { r = a1, q = b1 }\ntuple F f2 { r = a1, q = b1 }\ntuple M m1 { x = a2, y = b1 }\n",
      s);
  CHECK(named(*p, relation_of_type(*p, *s->find_type("A"))) == Named{{{"a1", "a1"}, 1}, {{"a2", "a2"}, 1}});
  CHECK(named(*p, relation_of_type(*p, *s->find_type("M"))) == Named{{{"m1", "m1"}, 1}});
  const RoleId r = *s->find_role("r");
  CHECK(named(*p, relation_of_role(*p, r, false)) == Named{{{"a1", "f1"}, 1}, {{"a1", "f2"}, 1}});
  CHECK(relation_of_role(*p, r, true) == relation_of_role(*p, r, false).transposed());

  // Two tuples with the same fillers give multiplicity 2.
  const PathExpr through = parse_path(*s, "A >r F <q B");
  const PairBag bag = evaluate(*p, through);
  CHECK(named(*p, bag) == Named{{{"a1", "b1"}, 2}});
  CHECK(bag.total() == 2);
  CHECK(bag.distinct_size() == 1);
  CHECK(evaluate(*p, reverse(through)) == bag.transposed());
}

TEST_CASE("empty relations") {
  auto s = testfx::schema_from(kSchema);
  auto p = testfx::population("", s);
  CHECK(relation_of_type(*p, *s->find_type("A")).empty());
  CHECK(evaluate(*p, parse_path(*s, "A")).empty());
}

TEST_CASE("single tuple join") {
  auto s = testfx::schema("s0.qbn");
  auto p = testfx::population("instance A a1\ninstance B b1\ntuple F f1 { r = a1, q = b1 }\n", s);
  CHECK(named(*p, relation_of_role(*p, *s->find_role("r"), false)) == Named{{{"a1", "f1"}, 1}});
  CHECK(named(*p, evaluate(*p, parse_path(*s, "A >r F <q B"))) == Named{{{"a1", "b1"}, 1}});
  CHECK(named(*p, evaluate(*p, parse_path(*s, "A"))) == Named{{{"a1", "a1"}, 1}});
}

TEST_CASE("composition laws on the fixture") {
  auto s = testfx::schema("presidential.qbn");
  auto p = testfx::population(testfx::read("fixtures/presidential.pop"), s);
  const PathExpr path = parse_path(*s, "President >m1 Marriage <m2 Person >vp VicePresidency <adm Administration");
  const PairBag whole = evaluate(*p, path);
  CHECK(whole.empty());  // neither spouse was vice president

  const PathExpr spouses = parse_path(*s, "President >m1 Marriage <m2 Person");
  CHECK(named(*p, evaluate(*p, spouses)) == Named{{{"Bush", "Barbara"}, 1}, {{"Reagan", "Nancy"}, 1}});

  // Splitting at any step and composing the halves gives the whole.
  const PathExpr vp = parse_path(*s, "Person >m2 Marriage <m1 President >pr Presidency <ad Administration");
  const PairBag full = evaluate(*p, vp);
  CHECK(named(*p, full) == Named{{{"Barbara", "A41"}, 1}, {{"Nancy", "A40"}, 1}});
  for (std::size_t k = 1; k < vp.length(); ++k) {
    const PathExpr head = vp.prefix(k);
    PathExpr tail(vp.types()[k]);
    for (std::size_t i = k; i < vp.length(); ++i) tail = tail.extended(vp.steps()[i], vp.types()[i + 1]);
    if (!is_wellformed(*s, head) || !is_wellformed(*s, tail)) continue;
    CHECK(compose(evaluate(*p, head), evaluate(*p, tail)) == full);
  }
  // Identity absorption through a supertype that contains the end population.
  CHECK(compose(full, relation_of_type(*p, *s->find_type("Administration"))) == full);
  CHECK(compose(relation_of_type(*p, *s->find_type("Person")), evaluate(*p, spouses)) == evaluate(*p, spouses));
}

TEST_CASE("errors") {
  auto s = testfx::schema("s0.qbn");
  auto p = testfx::population("", s);
  try {
    (void)evaluate(*p, PathExpr{});
    FAIL("evaluated the empty path");
  } catch (const Error& e) {
    CHECK(e.code() == "empty-path");
  }
  try {
    (void)evaluate(*p, parse_path(*s, "A >r F"));
    FAIL("evaluated a malformed path");
  } catch (const Error& e) {
    CHECK(e.code() == "malformed-path");
  }
}

TEST_CASE("parallel kernel matches the serial reference") {
  // Enough anchors to take the parallel branch.
  auto s = testfx::schema("presidential.qbn");
  std::string src;
  const int n = 400;
  for (int i = 0; i < n; ++i) src += "instance Person p" + std::to_string(i) + "\n";
  for (int i = 0; i < n; i += 2) src += "instance Politician p" + std::to_string(i) + "\n";
  for (int i = 0; i < n; i += 4) src += "instance President p" + std::to_string(i) + "\n";
  for (int i = 0; i < 3 * n; ++i)
    src += "tuple Marriage w" + std::to_string(i) + " { m1 = p" + std::to_string((i * 7) % n) + ", m2 = p" +
           std::to_string((i * 13 + 5) % n) + " }\n";
  auto p = testfx::population(src, s);
  for (const char* text : {"Person >m1 Marriage <m2 Person", "President >m1 Marriage <m2 Person >m1 Marriage <m2 Politician",
                           "Marriage <m1 Person >m2 Marriage"}) {
    const PathExpr path = parse_path(*s, text);
    CHECK(evaluate(*p, path) == reference::evaluate(*p, path));
  }
}

TEST_CASE("result view and export") {
  auto s = testfx::schema("s0.qbn");
  auto p = testfx::population(
      "instance A a1\ninstance A a2\ninstance B b1\ntuple F f1 { r = a1, q = b1 }\ntuple F f2 { r = a2, q = b1 }\n", s);
  CHECK(result_view(PairBag{}, *p).pairs.empty());
  const ResultTable t = result_view(evaluate(*p, parse_path(*s, "A >r F <q B")), *p);
  REQUIRE(t.focus.size() == 1);
  CHECK(t.focus[0] == FocusCount{"b1", 2});
  CHECK(t.pairs == std::vector<ResultRow>{{"a1", "b1", 1}, {"a2", "b1", 1}});
  CHECK(t.total == 2);
  CHECK(export_delimited(t, ',') == "anchor,focus,multiplicity\na1,b1,1\na2,b1,1\n\nfocus,multiplicity\nb1,2\n");
}
