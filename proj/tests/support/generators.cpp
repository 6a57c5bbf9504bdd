#include "generators.hpp"

#include <algorithm>

namespace oracle {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

}  // namespace

Model random_model(std::mt19937_64& rng, const ModelLimits& limits) {
  Model m;
  const int n = uniform(rng, 1, limits.max_types);
  for (int i = 0; i < n; ++i) {
    Type t;
    t.id = "T" + std::to_string(i);
    if (i > 0 && chance(rng, 0.45)) {
      t.relationship = true;
      t.object = chance(rng, 0.4);
    }
    m.types.push_back(t);
  }

  std::vector<int> objects;
  for (int i = 0; i < n; ++i)
    if (m.types[i].object) objects.push_back(i);

  for (int i = 0; i < n; ++i) {
    if (!m.types[i].relationship) continue;
    int arity = 2;
    const int roll = uniform(rng, 0, 99);
    if (roll < 15)
      arity = 1;
    else if (roll >= 70)
      arity = 3;
    arity = std::min(arity, limits.max_arity);
    for (int k = 0; k < arity; ++k) {
      const int r = static_cast<int>(m.roles.size());
      m.roles.push_back(Role{"r" + std::to_string(r), i, pick(rng, objects)});
      m.types[i].roles.push_back(r);
    }
  }

  std::vector<int> edge_ends;
  for (int i : objects)
    if (limits.objectified_supertypes || !m.types[i].relationship) edge_ends.push_back(i);
  const int edges = objects.size() < 2 ? 0 : uniform(rng, 0, limits.max_edges);
  for (int e = 0; e < edges; ++e) {
    int a = pick(rng, objects), b = pick(rng, edge_ends);
    if (a == b) continue;
    if (!chance(rng, limits.backward_edge) && a < b) {
      // Forward edges run from later to earlier declarations, so they never
      // close a cycle.
      if (!limits.objectified_supertypes && m.types[a].relationship) continue;
      std::swap(a, b);
    }
    auto& set = chance(rng, 0.5) ? m.spec : m.poly;
    if (std::find(set.begin(), set.end(), std::pair{a, b}) == set.end()) set.emplace_back(a, b);
  }
  return m;
}

Population random_population(std::mt19937_64& rng, const Model& m, int max_instances) {
  const int nt = static_cast<int>(m.types.size());
  const Relation related = typerel_fixpoint(m);
  const Relation spec = spec_closure(m);

  Population pop;
  pop.members.resize(static_cast<std::size_t>(nt));

  std::vector<int> plain;
  for (int t = 0; t < nt; ++t)
    if (!m.types[t].relationship) plain.push_back(t);

  auto add_name = [&](std::string name) {
    pop.names.push_back(std::move(name));
    pop.tuple_rel.push_back(-1);
    pop.fillers.emplace_back();
    return static_cast<int>(pop.names.size()) - 1;
  };

  const int budget = uniform(rng, 1, max_instances);
  const int n_plain = plain.empty() ? 0 : uniform(rng, 1, std::max(1, budget * 2 / 3));
  for (int i = 0; i < n_plain; ++i) {
    const int id = add_name("i" + std::to_string(i));
    const int copies = uniform(rng, 1, 2);
    for (int c = 0; c < copies; ++c) pop.members[pick(rng, plain)].insert(id);
  }

  // Tuple ids first, fillers once every candidate exists.
  std::vector<int> tuples;
  for (int t = 0; t < nt && static_cast<int>(pop.names.size()) < budget; ++t) {
    if (!m.types[t].relationship) continue;
    const int count = uniform(rng, 0, 4);
    for (int k = 0; k < count && static_cast<int>(pop.names.size()) < budget; ++k) {
      const int id = add_name("t" + std::to_string(tuples.size()));
      pop.tuple_rel[id] = t;
      tuples.push_back(id);
    }
  }

  auto close_spec = [&] {
    for (bool changed = true; changed;) {
      changed = false;
      for (auto [sub, super] : spec)
        for (int x : std::vector<int>(pop.members[sub].begin(), pop.members[sub].end()))
          if (pop.members[super].insert(x).second) changed = true;
    }
  };

  // Dropping a tuple with an unfillable role can strand others that used it
  // as a filler, so repeat until nothing is dropped.
  for (bool settled = false; !settled;) {
    for (auto& ms : pop.members) std::erase_if(ms, [&](int x) { return x >= n_plain; });
    for (int id : tuples) pop.members[pop.tuple_rel[id]].insert(id);
    close_spec();

    settled = true;
    std::vector<int> kept;
    for (int id : tuples) {
      const int rel = pop.tuple_rel[id];
      pop.fillers[id].clear();
      bool ok = true;
      for (int r : m.types[rel].roles) {
        std::vector<int> candidates;
        for (int t = 0; t < nt; ++t)
          if (related.count({t, m.roles[r].player}))
            for (int x : pop.members[t]) candidates.push_back(x);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        if (candidates.empty()) {
          ok = false;
          break;
        }
        pop.fillers[id].push_back(pick(rng, candidates));
      }
      if (ok) {
        kept.push_back(id);
      } else {
        pop.tuple_rel[id] = -1;
        pop.fillers[id].clear();
        settled = false;
      }
    }
    tuples = std::move(kept);
  }
  return pop;
}

Path random_path(std::mt19937_64& rng, const Grammar& g, int max_len) {
  const Model& m = g.model();
  const int nt = static_cast<int>(m.types.size());
  std::vector<int> anchors;
  for (int t = 0; t < nt; ++t)
    if (g.focusable(t)) anchors.push_back(t);
  const int target = uniform(rng, 0, max_len);

  Path p;
  p.types.push_back(pick(rng, anchors));
  while (static_cast<int>(p.length()) < target) {
    std::vector<Path> options;
    for (const Path& q : g.continuations(p))
      if (static_cast<int>(q.length()) <= target && g.wellformed(q)) options.push_back(q);
    if (options.empty()) break;
    p = pick(rng, options);
  }
  return p;
}

}  // namespace oracle
