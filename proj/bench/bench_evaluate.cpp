// Compares the parallel evaluator against the serial compose-fold reference
// on a synthetic "knows" graph.

#include <benchmark/benchmark.h>

#include <cstdio>
#include <memory>
#include <random>
#include <string>

#include "qbn/evaluator.hpp"
#include "qbn/path.hpp"
#include "qbn/population.hpp"
#include "qbn/schema.hpp"

namespace {

constexpr const char* kSchema =
    "object Person\n"
    "fact Knows {\n"
    "  role a player Person\n"
    "  role b player Person\n"
    "}\n";

constexpr int kDegree = 4;

struct Fixture {
  std::shared_ptr<const qbn::Schema> schema;
  std::unique_ptr<qbn::Population> pop;
};

Fixture make_fixture(int persons) {
  Fixture f;
  f.schema = std::make_shared<const qbn::Schema>(*qbn::parse_schema(kSchema).value);
  qbn::PopulationBuilder b(f.schema);
  for (int i = 0; i < persons; ++i) b.add_instance("Person", "p" + std::to_string(i));
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, persons - 1);
  int tuple = 0;
  for (int i = 0; i < persons; ++i)
    for (int k = 0; k < kDegree; ++k)
      b.add_tuple("Knows", "k" + std::to_string(tuple++),
                  {{"a", "p" + std::to_string(i)}, {"b", "p" + std::to_string(pick(rng))}});
  auto built = b.build();
  if (!built.value) {
    std::fprintf(stderr, "bench population failed to build\n");
    std::abort();
  }
  f.pop = std::make_unique<qbn::Population>(std::move(*built.value));
  return f;
}

// Friends of friends of friends.
qbn::PathExpr hops(const qbn::Schema& s) {
  return qbn::parse_path(s, "Person >a Knows <b Person >a Knows <b Person >a Knows <b Person");
}

void BM_evaluate(benchmark::State& state) {
  auto f = make_fixture(static_cast<int>(state.range(0)));
  const auto p = hops(*f.schema);
  for (auto _ : state) benchmark::DoNotOptimize(qbn::evaluate(*f.pop, p).total());
}

void BM_reference(benchmark::State& state) {
  auto f = make_fixture(static_cast<int>(state.range(0)));
  const auto p = hops(*f.schema);
  for (auto _ : state) benchmark::DoNotOptimize(qbn::reference::evaluate(*f.pop, p).total());
}

}  // namespace

BENCHMARK(BM_evaluate)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_reference)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
