// Copyright 2026 The FacetForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Seeded generators and brute-force oracles shared by the unit and
// acceptance suites. Nothing here calls into the code path it checks.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "facetforge/evaluation.hpp"
#include "facetforge/jointmeaning.hpp"
#include "facetforge/matcher.hpp"
#include "facetforge/navigation.hpp"
#include "facetforge/store.hpp"

namespace facetforge::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, n).
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(unit() * static_cast<double>(n)) % std::max<std::size_t>(n, 1);
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 engine_;
};

// ---- navigation views ----

inline navigation::View random_view(Rng& r, std::size_t max_portlets) {
  static const std::vector<std::string> names{"color", "brand", "type"};
  static const std::vector<std::string> values{"red", "blue", "green", "ferrari", "fiat", "photo"};
  navigation::View v;
  for (std::size_t i = 0, n = r.below(max_portlets + 1); i < n; ++i) {
    taxonomy::FacetSet fs;
    for (std::size_t k = 0, m = r.below(4); k < m; ++k) fs.insert({r.pick(names), r.pick(values)});
    v.universe["p" + std::to_string(i)] = fs;
  }
  return v;
}

inline std::vector<taxonomy::Facet> random_constraints(Rng& r, std::size_t n) {
  static const std::vector<std::string> names{"color", "brand", "type"};
  static const std::vector<std::string> values{"red", "blue", "green", "ferrari", "fiat", "photo"};
  std::vector<taxonomy::Facet> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({r.pick(names), r.pick(values)});
  return out;
}

// ---- evaluation ----

// Random scores in [0,10] with weights that sum to one exactly enough.
inline evaluation::EvaluationMatrix random_matrix(Rng& r) {
  evaluation::EvaluationMatrix m;
  std::size_t n = 1 + r.below(8);
  std::vector<double> raw(n);
  for (auto& w : raw) w = r.unit() + 1e-3;
  double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.attributes.push_back({"a" + std::to_string(i), std::round(r.unit() * 100) / 10, raw[i] / sum});
  }
  return m;
}

// ---- triple store ----

inline store::Term random_entity(Rng& r, std::size_t vocab) {
  return store::Term::iri("e" + std::to_string(r.below(vocab)));
}

inline store::TripleStore random_store(Rng& r, std::size_t max_triples,
                                       std::size_t vocab = 30,
                                       std::size_t predicates = 4) {
  store::TripleStore s;
  std::size_t n = r.below(max_triples + 1);
  for (std::size_t i = 0; i < n; ++i) {
    store::Term object = r.chance(0.2) ? store::Term::literal("v" + std::to_string(r.below(8)))
                                       : random_entity(r, vocab);
    s.insert({random_entity(r, vocab),
              store::Term::iri("p" + std::to_string(r.below(predicates))), object});
  }
  return s;
}

// Up to `max_patterns` patterns over at most three variables.
inline std::vector<store::Pattern> random_query(Rng& r, std::size_t max_patterns,
                                                std::size_t vocab = 30,
                                                std::size_t predicates = 4) {
  static const std::vector<std::string> vars{"x", "y", "z"};
  std::size_t n = 1 + r.below(max_patterns);
  std::vector<store::Pattern> q;
  auto position = [&](bool predicate) {
    if (r.chance(predicate ? 0.25 : 0.55)) return store::Term::variable(r.pick(vars));
    if (predicate) return store::Term::iri("p" + std::to_string(r.below(predicates)));
    if (r.chance(0.1)) return store::Term::literal("v" + std::to_string(r.below(8)));
    return random_entity(r, vocab);
  };
  for (std::size_t i = 0; i < n; ++i) q.push_back({position(false), position(true), position(false)});
  return q;
}

// Assigns every variable every term seen in the store and keeps the
// assignments under which each substituted pattern is a stored triple.
inline store::BindingSet brute_force_query(const store::TripleStore& s,
                                           const std::vector<store::Pattern>& q) {
  std::set<std::string> vars;
  for (const auto& p : q) {
    for (const auto* t : {&p.subject, &p.predicate, &p.object})
      if (t->is_variable()) vars.insert(t->text);
  }
  std::set<store::Term> domain;
  for (const auto& t : s) {
    domain.insert(t.subject);
    domain.insert(t.predicate);
    domain.insert(t.object);
  }
  std::vector<std::string> names(vars.begin(), vars.end());
  std::vector<store::Term> values(domain.begin(), domain.end());

  store::BindingSet out;
  if (values.empty() && !names.empty()) return out;
  std::vector<std::size_t> idx(names.size(), 0);
  for (;;) {
    store::Binding b;
    for (std::size_t i = 0; i < names.size(); ++i) b[names[i]] = values[idx[i]];
    auto subst = [&](const store::Term& t) { return t.is_variable() ? b.at(t.text) : t; };
    bool all = true;
    for (const auto& p : q) {
      if (!s.contains({subst(p.subject), subst(p.predicate), subst(p.object)})) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(b);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == values.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  std::sort(out.begin(), out.end(), [&](const store::Binding& a, const store::Binding& c) {
    for (const auto& n : names) {
      if (a.at(n).text != c.at(n).text) return a.at(n).text < c.at(n).text;
      if (a.at(n).kind != c.at(n).kind) return a.at(n).kind < c.at(n).kind;
    }
    return false;
  });
  return out;
}

// ---- navigation ----

inline navigation::NavGraph random_graph(Rng& r, std::size_t max_nodes, double density) {
  navigation::NavGraph g;
  std::size_t n = 1 + r.below(max_nodes);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("n" + std::to_string(i));
    g.add_node(ids.back());
  }
  for (const auto& a : ids) {
    for (const auto& b : ids) {
      if (a != b && r.chance(density)) g.add_link(a, b);
    }
  }
  return g;
}

// Forward BFS distances from one node over the plain link set.
inline std::map<std::string, std::size_t> bfs_distances(const navigation::NavGraph& g,
                                                        const std::string& from) {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& [a, b] : g.links()) adj[a].insert(b);
  std::map<std::string, std::size_t> dist{{from, 0}};
  std::deque<std::string> q{from};
  while (!q.empty()) {
    auto cur = q.front();
    q.pop_front();
    for (const auto& n : adj[cur]) {
      if (!dist.count(n)) {
        dist[n] = dist[cur] + 1;
        q.push_back(n);
      }
    }
  }
  return dist;
}

// Shortest hop count to the nearest goal, or nullopt.
inline std::optional<std::size_t> bfs_goal_distance(const navigation::NavGraph& g,
                                                    const std::string& start,
                                                    const std::set<std::string>& goals) {
  auto dist = bfs_distances(g, start);
  std::optional<std::size_t> best;
  for (const auto& goal : goals) {
    if (dist.count(goal) && (!best || dist[goal] < *best)) best = dist[goal];
  }
  return best;
}

// ---- superconcepts ----

// Classes of the reflexive-transitive closure (Floyd-Warshall) of the
// symmetric link relation, over concepts touched by a link or a tag match.
inline std::set<std::set<std::string>> closure_classes(
    const std::vector<std::string>& ids, const std::set<std::pair<std::string, std::string>>& links,
    const std::set<std::string>& touched) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
  std::size_t n = ids.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (const auto& [a, b] : links) {
    reach[index[a]][index[b]] = true;
    reach[index[b]][index[a]] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;

  std::set<std::set<std::string>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (!touched.count(ids[i])) continue;
    std::set<std::string> cls;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) cls.insert(ids[j]);
    classes.insert(cls);
  }
  return classes;
}

struct SuperconceptInstance {
  matcher::Ontology ontology;
  taxonomy::FacetedTaxonomy taxonomy;
};

inline SuperconceptInstance random_superconcept_instance(Rng& r, std::size_t max_concepts) {
  static const std::vector<std::string> words{
      "car", "cart", "card", "sport car", "auto", "ferrari", "ferari", "boat",
      "plane", "train", "bike", "bikes", "truck", "van", "vans", "luxury"};
  static const std::vector<std::string> contexts{"sports", "money", "speed", "travel",
                                                 "water", "road", "air", "italy"};
  SuperconceptInstance inst;
  std::size_t n = r.below(max_concepts + 1);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    matcher::Concept c;
    c.id = "c" + std::to_string(i);
    c.label = r.pick(words);
    for (std::size_t k = 0, m = r.below(3); k < m; ++k) c.tag_context.insert(r.pick(contexts));
    c.numeric_features = {r.unit(), r.unit()};
    inst.ontology.add_concept(c);
    ids.push_back(c.id);
  }
  for (std::size_t k = 0, m = n ? r.below(n / 2 + 1) : 0; k < m; ++k)
    inst.ontology.add_equivalence(r.pick(ids), r.pick(ids));
  taxonomy::FacetedInterface iface{"view:p", {}, {"p"}};
  for (std::size_t k = 0, m = r.below(4); k < m; ++k)
    inst.taxonomy = inst.taxonomy.attach(taxonomy::Tag{r.pick(words), "u"}, iface);
  return inst;
}

// Links by definition: equivalence edges, every pair of concepts hit by the
// same tag (exact label, its one-hop equivalents, or a learned match below
// theta) and every concept pair below theta. Classes via closure_classes.
inline std::set<std::set<std::string>> oracle_superconcept_classes(
    const SuperconceptInstance& inst, const matcher::DissimilarityWeights& w, double theta,
    std::set<std::string>* touched) {
  std::vector<std::string> ids;
  for (const auto& [id, c] : inst.ontology.concepts()) ids.push_back(id);
  std::set<std::pair<std::string, std::string>> links(inst.ontology.equivalences().begin(),
                                                      inst.ontology.equivalences().end());
  for (const auto& [a, b] : links) touched->insert({a, b});
  for (const auto& tag : inst.taxonomy.tags()) {
    std::set<std::string> hits;
    for (const auto& [id, c] : inst.ontology.concepts()) {
      if (c.label == tag.label) {
        hits.insert(id);
        for (const auto& e : inst.ontology.equivalent_to(id)) hits.insert(e);
      }
      if (matcher::tag_dissimilarity(tag, c, w) < theta) hits.insert(id);
    }
    for (const auto& a : hits) {
      touched->insert(a);
      for (const auto& b : hits) links.emplace(a, b);
    }
  }
  for (const auto& a : ids) {
    for (const auto& b : ids) {
      if (a >= b) continue;
      auto va = matcher::vectorize(inst.ontology.at(a));
      auto vb = matcher::vectorize(inst.ontology.at(b));
      if (matcher::dissimilarity(va, vb, w) < theta) {
        links.emplace(a, b);
        touched->insert({a, b});
      }
    }
  }
  return closure_classes(ids, links, *touched);
}

// ---- joint meaning ----

// Rank of a label for one viewer as an integer tuple: larger is better.
inline std::tuple<std::size_t, int, std::string> label_rank_key(
    const std::string& label, const std::map<std::string, std::set<std::string>>& contexts,
    const std::set<std::string>& interests, const std::string& speaker_label) {
  std::size_t overlap = 0;
  if (auto it = contexts.find(label); it != contexts.end()) {
    for (const auto& t : it->second) overlap += interests.count(t);
  }
  int speaker_bonus = (overlap == 0 && label == speaker_label) ? 1 : 0;
  return {overlap, speaker_bonus, label};
}

// Best label by brute-force ranking over every member label.
inline std::string oracle_audience_label(const matcher::Superconcept& s,
                                         const matcher::Ontology& o,
                                         const std::set<std::string>& interests,
                                         const std::string& speaker_label) {
  std::map<std::string, std::set<std::string>> contexts;
  for (const auto& id : s.members) {
    const auto& c = o.at(id);
    contexts[c.label].insert(c.tag_context.begin(), c.tag_context.end());
  }
  std::vector<std::string> labels;
  for (const auto& [l, ctx] : contexts) labels.push_back(l);
  if (!contexts.count(speaker_label)) labels.push_back(speaker_label);
  std::sort(labels.begin(), labels.end(), [&](const std::string& a, const std::string& b) {
    auto ka = label_rank_key(a, contexts, interests, speaker_label);
    auto kb = label_rank_key(b, contexts, interests, speaker_label);
    if (std::get<0>(ka) != std::get<0>(kb)) return std::get<0>(ka) > std::get<0>(kb);
    if (std::get<1>(ka) != std::get<1>(kb)) return std::get<1>(ka) > std::get<1>(kb);
    return std::get<2>(ka) < std::get<2>(kb);
  });
  return labels.front();
}

struct JointInstance {
  matcher::Ontology o;
  std::vector<matcher::Superconcept> superconcepts;
  taxonomy::Portlet portlet;
  jointmeaning::User speaker;
  std::vector<jointmeaning::User> audience;
};

inline JointInstance random_joint_instance(Rng& r) {
  static const std::vector<std::string> words{"car", "auto", "ferrari", "sport car",
                                              "coupe", "wagon", "racer", "limo"};
  static const std::vector<std::string> topics{"sports", "money", "speed", "family",
                                               "italy", "road"};
  JointInstance inst;
  inst.portlet.id = "p";
  inst.portlet.owner = "s";
  std::size_t groups = 1 + r.below(3);
  int next = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    matcher::Superconcept s;
    std::size_t labels = 1 + r.below(4);
    for (std::size_t k = 0; k < labels; ++k) {
      matcher::Concept c;
      c.id = "c" + std::to_string(next++);
      c.label = r.pick(words) + " " + std::to_string(g);
      for (std::size_t t = 0, m = r.below(3); t < m; ++t) c.tag_context.insert(r.pick(topics));
      inst.o.add_concept(c);
      s.members.insert(c.id);
    }
    // The speaker tags with one member label.
    auto it = s.members.begin();
    std::advance(it, r.below(s.members.size()));
    auto tag = taxonomy::create_tag(inst.o.at(*it).label, "s");
    s.matched_tags.insert(tag);
    inst.portlet.folksonomy.insert(tag);
    inst.superconcepts.push_back(s);
  }
  inst.speaker = {"s", {}};
  for (std::size_t u = 0, n = r.below(5); u < n; ++u) {
    jointmeaning::User v{"v" + std::to_string(u), {}};
    for (std::size_t t = 0, m = r.below(3); t < m; ++t) v.profile.interests.insert(r.pick(topics));
    inst.audience.push_back(v);
  }
  return inst;
}

// Naive iterate-until-stable: every round each viewer takes the best-ranked
// label out of everything any user held last round, the speaker label and
// any label whose context touches their interests.
inline std::map<std::string, std::map<std::string, std::string>> naive_fixpoint(
    const JointInstance& inst, std::size_t* rounds) {
  struct SlotInfo {
    std::string key, speaker_label;
    std::map<std::string, std::set<std::string>> contexts;
  };
  std::vector<SlotInfo> slots;
  for (const auto& s : inst.superconcepts) {
    SlotInfo info{*s.members.begin(), s.matched_tags.begin()->label, {}};
    for (const auto& id : s.members) {
      const auto& c = inst.o.at(id);
      info.contexts[c.label].insert(c.tag_context.begin(), c.tag_context.end());
    }
    slots.push_back(info);
  }
  std::map<std::string, std::map<std::string, std::string>> state;
  for (const auto& v : inst.audience)
    for (const auto& s : slots) state[v.id][s.key] = s.speaker_label;
  *rounds = 0;
  for (bool changed = true; changed;) {
    ++*rounds;
    changed = false;
    auto next = state;
    for (const auto& v : inst.audience) {
      for (const auto& s : slots) {
        std::set<std::string> candidates{s.speaker_label};
        for (const auto& [id, a] : state) candidates.insert(a.at(s.key));
        for (const auto& [label, ctx] : s.contexts)
          for (const auto& t : ctx)
            if (v.profile.interests.count(t)) candidates.insert(label);
        auto best = state[v.id][s.key];
        auto best_key = label_rank_key(best, s.contexts, v.profile.interests, s.speaker_label);
        for (const auto& c : candidates) {
          auto k = label_rank_key(c, s.contexts, v.profile.interests, s.speaker_label);
          bool better = std::get<0>(k) != std::get<0>(best_key)
                            ? std::get<0>(k) > std::get<0>(best_key)
                            : std::get<1>(k) != std::get<1>(best_key)
                                  ? std::get<1>(k) > std::get<1>(best_key)
                                  : std::get<2>(k) < std::get<2>(best_key);
          if (better) {
            best = c;
            best_key = k;
          }
        }
        if (best != state[v.id][s.key]) {
          next[v.id][s.key] = best;
          changed = true;
        }
      }
    }
    state = next;
  }
  return state;
}

}  // namespace facetforge::testing
