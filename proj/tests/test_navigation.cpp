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

#include <doctest.h>

#include <algorithm>

#include "facetforge/error.hpp"
#include "facetforge/navigation.hpp"
#include "support.hpp"

using namespace facetforge;
using namespace facetforge::navigation;

namespace {

taxonomy::Portlet portlet(const std::string& id, FacetSet facets) {
  taxonomy::Portlet p;
  p.id = id;
  p.facets = std::move(facets);
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kBadRequest;
}

// Every shortest path by exhaustive DFS bounded by the BFS distance.
std::vector<std::vector<NodeId>> all_paths_of_length(const NavGraph& g, const NodeId& start,
                                                     const std::set<NodeId>& goals,
                                                     std::size_t length) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> path;
  std::function<void(const NodeId&)> dfs = [&](const NodeId& cur) {
    if (path.size() == length) {
      if (goals.count(cur)) out.push_back(path);
      return;
    }
    for (const auto& [a, b] : g.links()) {
      if (a != cur) continue;
      path.push_back(b);
      dfs(b);
      path.pop_back();
    }
  };
  dfs(start);
  return out;
}

}  // namespace

TEST_CASE("filter") {
  View v = View::over(std::vector{portlet("p1", {{"color", "red"}}),
                                  portlet("p2", {{"color", "blue"}})});
  auto red = filter(v, "color", "red");
  CHECK(members(red) == std::vector<PortletId>{"p1"});
  CHECK(filter(red, "color", "red") == red);
  CHECK(members(filter(red, "color", "blue")).empty());
  CHECK(unfilter(red, "color", "red") == v);
  CHECK(code_of([&] { unfilter(v, "color", "red"); }) == ErrorCode::kBadRequest);
}

TEST_CASE("filter is monotone and order-insensitive") {
  testing::Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    View v = testing::random_view(rng, 200);
    auto cs = testing::random_constraints(rng, 1 + rng.below(3));
    View forward = v;
    for (const auto& c : cs) {
      View next = filter(forward, c.name, c.value);
      auto before = members(forward), after = members(next);
      CHECK(after.size() <= before.size());
      CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
      forward = next;
    }
    auto shuffled = cs;
    std::reverse(shuffled.begin(), shuffled.end());
    if (shuffled.size() > 2) std::swap(shuffled[0], shuffled[1]);
    View backward = v;
    for (const auto& c : shuffled) backward = filter(backward, c.name, c.value);
    CHECK(members(forward) == members(backward));

    // Linear-scan oracle.
    std::vector<PortletId> expected;
    for (const auto& [id, fs] : v.universe) {
      if (std::all_of(cs.begin(), cs.end(), [&](const Facet& c) { return fs.count(c) != 0; }))
        expected.push_back(id);
    }
    CHECK(members(forward) == expected);
  }
}

TEST_CASE("zoom") {
  std::vector<taxonomy::Portlet> ps{portlet("p1", {{"color", "red"}, {"brand", "ferrari"}}),
                                    portlet("p2", {{"color", "red"}}),
                                    portlet("p3", {{"color", "blue"}})};
  View v = View::over(ps);
  SUBCASE("groups follow facet_histogram") {
    auto z = zoom(v, "color");
    auto groups = zoom_groups(z);
    auto hist = taxonomy::facet_histogram(ps, "color");
    REQUIRE(groups.size() == hist.size());
    for (const auto& [value, count] : hist) CHECK(groups.at(value).size() == count);
    CHECK(groups.at("red").size() == 2);
    CHECK(member_histogram(z, "color") == hist);
  }
  SUBCASE("unzoom restores exactly") {
    auto f = filter(v, "color", "red");
    CHECK(unzoom(zoom(f, "brand")) == f);
    CHECK(unzoom(unzoom(zoom(zoom(v, "brand"), "color"))) == v);
  }
  SUBCASE("zoom errors") {
    CHECK(code_of([&] { zoom(zoom(v, "brand"), "brand"); }) == ErrorCode::kAlreadyZoomed);
    CHECK(code_of([&] { unzoom(v); }) == ErrorCode::kEmptyZoomStack);
  }
  SUBCASE("no zoom means no groups") { CHECK(zoom_groups(v).empty()); }
}

TEST_CASE("zoom and unzoom are inverse on random views") {
  testing::Rng rng(37);
  const std::vector<std::string> names{"color", "brand", "type", "size"};
  for (int i = 0; i < 300; ++i) {
    View v = testing::random_view(rng, 30);
    for (const auto& c : testing::random_constraints(rng, rng.below(3))) v = filter(v, c.name, c.value);
    for (std::size_t k = 0, m = rng.below(3); k < m; ++k) {
      auto n = rng.pick(names);
      if (std::find(v.zoom_stack.begin(), v.zoom_stack.end(), n) == v.zoom_stack.end())
        v = zoom(v, n);
    }
    for (const auto& n : names) {
      if (std::find(v.zoom_stack.begin(), v.zoom_stack.end(), n) != v.zoom_stack.end()) continue;
      CHECK(unzoom(zoom(v, n)) == v);
      CHECK(members(zoom(v, n)) == members(v));
    }
  }
}

TEST_CASE("plan_won") {
  NavGraph g;
  for (auto n : {"a", "b", "c", "d"}) g.add_node(n);
  g.add_link("a", "b");
  g.add_link("b", "c");
  g.add_link("a", "b");
  CHECK(g.links().size() == 2);

  CHECK(plan_won(g, "a", {"c"}) == std::vector<NodeId>{"b", "c"});
  CHECK(plan_won(g, "a", {"a", "c"}).empty());
  CHECK(code_of([&] { plan_won(g, "a", {"d"}); }) == ErrorCode::kUnreachable);
  CHECK(code_of([&] { plan_won(g, "zz", {"d"}); }) == ErrorCode::kUnknownNode);
  CHECK(code_of([&] { plan_won(g, "a", {"zz"}); }) == ErrorCode::kUnknownNode);
  CHECK(code_of([&] { plan_won(g, "a", {}); }) == ErrorCode::kBadRequest);
  CHECK(code_of([&] { g.add_link("a", "zz"); }) == ErrorCode::kUnknownNode);

  SUBCASE("ties go to the smaller node sequence") {
    g.add_node("a2");
    g.add_link("a", "a2");
    g.add_link("a2", "c");
    CHECK(plan_won(g, "a", {"c"}) == std::vector<NodeId>{"a2", "c"});
    CHECK(shortest_paths(g, "a", "c").size() == 2);
  }
  SUBCASE("nearest goal wins") {
    g.add_link("a", "d");
    CHECK(plan_won(g, "a", {"c", "d"}) == std::vector<NodeId>{"d"});
  }
}

TEST_CASE("plan_won equals BFS and the lexicographic minimum") {
  testing::Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    auto g = testing::random_graph(rng, 12, 0.2);
    std::vector<NodeId> ids;
    for (const auto& [id, f] : g.nodes()) ids.push_back(id);
    auto start = rng.pick(ids);
    std::set<NodeId> goals;
    for (std::size_t k = 0, m = 1 + rng.below(2); k < m; ++k) goals.insert(rng.pick(ids));
    auto expected = testing::bfs_goal_distance(g, start, goals);
    if (!expected) {
      CHECK(code_of([&] { plan_won(g, start, goals); }) == ErrorCode::kUnreachable);
      continue;
    }
    auto path = plan_won(g, start, goals);
    CHECK(path.size() == *expected);
    auto all = all_paths_of_length(g, start, goals, *expected);
    // Paths that pass through a goal early stop there, so only keep those
    // whose intermediate nodes avoid the goals.
    std::erase_if(all, [&](const std::vector<NodeId>& p) {
      return std::any_of(p.begin(), p.end() - 1, [&](const NodeId& n) { return goals.count(n) != 0; });
    });
    if (!all.empty()) CHECK(path == *std::min_element(all.begin(), all.end()));
  }
}

TEST_CASE("interest pre-filter reroutes around unrelated nodes") {
  NavGraph g;
  g.add_node("home");
  g.add_node("sports", {{"topic", "sports"}});
  g.add_node("luxury", {{"topic", "luxury"}});
  g.add_node("ferrari");
  for (auto mid : {"sports", "luxury"}) {
    g.add_link("home", mid);
    g.add_link(mid, "ferrari");
  }
  CHECK(plan_won(g, "home", {"ferrari"}) == std::vector<NodeId>{"luxury", "ferrari"});
  CHECK(plan_won(g, "home", {"ferrari"}, interest_filter(g, {"sports"})) ==
        std::vector<NodeId>{"sports", "ferrari"});
  CHECK(code_of([&] { plan_won(g, "home", {"ferrari"}, interest_filter(g, {"cooking"})); }) ==
        ErrorCode::kUnreachable);
  CHECK(shortest_paths(g, "home", "ferrari").size() == 2);
}

TEST_CASE("graph round-trips through triples") {
  testing::Rng rng(43);
  auto g = testing::random_graph(rng, 20, 0.15);
  g.add_node("tagged", {{"color", "red"}});
  store::TripleStore s;
  write_graph(g, s);
  CHECK(read_graph(s) == g);
}

TEST_CASE("breadcrumbs") {
  Hierarchy h;
  h.add_root("vehicles");
  h.add("cars", "vehicles");
  h.add("sports cars", "cars");
  CHECK(breadcrumb_path(h, "vehicles").trail == std::vector<std::string>{"vehicles"});
  CHECK(breadcrumb_path(h, "sports cars").trail ==
        std::vector<std::string>{"vehicles", "cars", "sports cars"});
  CHECK(code_of([&] { breadcrumb_path(h, "boats"); }) == ErrorCode::kUnknownNode);
  CHECK(code_of([&] { h.add("vehicles", "sports cars"); }) == ErrorCode::kCycle);
  CHECK(code_of([&] { h.add("cars", "boats"); }) == ErrorCode::kBadRequest);
}
