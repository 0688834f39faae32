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

#include "facetforge/navigation.hpp"

#include <algorithm>
#include <deque>

#include "facetforge/error.hpp"

namespace facetforge::navigation {

namespace {

constexpr const char* kLinksTo = "linksTo";
constexpr const char* kNavNode = "navNode";

const std::set<NodeId> kNoNodes;

using Distances = std::map<NodeId, std::size_t>;

// Breadth-first distances from `sources`, following links forward or
// backward, only entering nodes accepted by `usable`.
Distances bfs(const NavGraph& g, const std::set<NodeId>& sources, bool backward,
              const std::function<bool(const NodeId&)>& usable) {
  std::map<NodeId, std::set<NodeId>> reverse;
  if (backward) {
    for (const auto& [a, b] : g.links()) reverse[b].insert(a);
  }
  Distances dist;
  std::deque<NodeId> queue;
  for (const auto& s : sources) {
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    const auto& next = backward ? (reverse.count(cur) ? reverse.at(cur) : kNoNodes)
                                : g.successors(cur);
    for (const auto& n : next) {
      if (dist.count(n) || !usable(n)) continue;
      dist[n] = dist[cur] + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

void check_endpoints(const NavGraph& g, const NodeId& start, const std::set<NodeId>& goals) {
  if (!g.contains(start)) throw Error(ErrorCode::kUnknownNode, "unknown start node " + start);
  if (goals.empty()) throw Error(ErrorCode::kBadRequest, "no goal nodes");
  for (const auto& goal : goals) {
    if (!g.contains(goal)) throw Error(ErrorCode::kUnknownNode, "unknown goal node " + goal);
  }
}

std::string trim_copy(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

// ---- NavGraph ----

void NavGraph::add_node(const NodeId& id, FacetSet facets) {
  if (trim_copy(id).empty()) throw Error(ErrorCode::kBadRequest, "node id is blank");
  auto& slot = nodes_[id];
  slot.insert(facets.begin(), facets.end());
}

void NavGraph::add_link(const NodeId& from, const NodeId& to) {
  if (!contains(from)) throw Error(ErrorCode::kUnknownNode, "unknown node " + from);
  if (!contains(to)) throw Error(ErrorCode::kUnknownNode, "unknown node " + to);
  links_.emplace(from, to);
  out_[from].insert(to);
}

const std::set<NodeId>& NavGraph::successors(const NodeId& id) const {
  auto it = out_.find(id);
  return it == out_.end() ? kNoNodes : it->second;
}

void write_graph(const NavGraph& g, store::TripleStore& out) {
  using store::Term;
  using store::make_triple;
  for (const auto& [id, facets] : g.nodes()) {
    out.insert(make_triple(id, kNavNode, Term::literal("node")));
    for (const auto& f : facets) {
      out.insert(make_triple(id, taxonomy::predicates::kHasFacet,
                             Term::literal(taxonomy::format_facet(f))));
    }
  }
  for (const auto& [a, b] : g.links()) out.insert(make_triple(a, kLinksTo, b));
}

NavGraph read_graph(const store::TripleStore& in) {
  NavGraph g;
  for (const auto& id : in.subjects_with(kNavNode)) {
    FacetSet facets;
    for (const auto& t : in.objects(id, taxonomy::predicates::kHasFacet))
      facets.insert(taxonomy::parse_facet(t.text));
    g.add_node(id, std::move(facets));
  }
  for (const auto& t : in) {
    if (t.predicate.text != kLinksTo) continue;
    // Link endpoints imply nodes even without an explicit navNode marker.
    if (!g.contains(t.subject.text)) g.add_node(t.subject.text);
    if (!g.contains(t.object.text)) g.add_node(t.object.text);
    g.add_link(t.subject.text, t.object.text);
  }
  return g;
}

// ---- planning ----

std::vector<NodeId> plan_won(const NavGraph& g, const NodeId& start,
                             const std::set<NodeId>& goals,
                             const std::function<bool(const NodeId&)>& allowed) {
  check_endpoints(g, start, goals);
  if (goals.count(start)) return {};

  auto usable = [&](const NodeId& n) {
    return n == start || goals.count(n) || !allowed || allowed(n);
  };
  Distances to_goal = bfs(g, goals, /*backward=*/true, usable);
  auto it = to_goal.find(start);
  if (it == to_goal.end())
    throw Error(ErrorCode::kUnreachable, "no goal reachable from " + start);

  std::vector<NodeId> path;
  NodeId cur = start;
  std::size_t remaining = it->second;
  while (remaining > 0) {
    // Successors are sorted, so the first one on a shortest route is the
    // lexicographically smallest continuation.
    for (const auto& n : g.successors(cur)) {
      auto d = to_goal.find(n);
      if (d != to_goal.end() && d->second == remaining - 1) {
        cur = n;
        break;
      }
    }
    path.push_back(cur);
    --remaining;
  }
  return path;
}

std::function<bool(const NodeId&)> interest_filter(const NavGraph& g,
                                                   const std::set<std::string>& interests) {
  std::set<NodeId> keep;
  for (const auto& [id, facets] : g.nodes()) {
    if (facets.empty()) {
      keep.insert(id);
      continue;
    }
    for (const auto& f : facets) {
      if (interests.count(taxonomy::normalize_label(f.value))) {
        keep.insert(id);
        break;
      }
    }
  }
  return [keep = std::move(keep)](const NodeId& n) { return keep.count(n) != 0; };
}

std::vector<std::vector<NodeId>> shortest_paths(const NavGraph& g, const NodeId& start,
                                                const NodeId& goal, std::size_t limit) {
  check_endpoints(g, start, {goal});
  auto always = [](const NodeId&) { return true; };
  Distances to_goal = bfs(g, {goal}, true, always);
  std::vector<std::vector<NodeId>> out;
  if (!to_goal.count(start)) return out;

  std::vector<NodeId> path;
  std::function<void(const NodeId&)> walk = [&](const NodeId& cur) {
    if (out.size() >= limit) return;
    if (to_goal.at(cur) == 0) {
      out.push_back(path);
      return;
    }
    for (const auto& n : g.successors(cur)) {
      auto d = to_goal.find(n);
      if (d == to_goal.end() || d->second + 1 != to_goal.at(cur)) continue;
      path.push_back(n);
      walk(n);
      path.pop_back();
    }
  };
  walk(start);
  return out;
}

// ---- views ----

View View::over(std::span<const taxonomy::Portlet> portlets) {
  View v;
  for (const auto& p : portlets) v.universe[p.id] = p.facets;
  return v;
}

std::vector<PortletId> members(const View& v) {
  std::vector<PortletId> out;
  for (const auto& [id, facets] : v.universe) {
    bool ok = std::all_of(v.constraints.begin(), v.constraints.end(),
                          [&](const Facet& c) { return facets.count(c) != 0; });
    if (ok) out.push_back(id);
  }
  return out;
}

View filter(const View& v, const std::string& facet_name, const std::string& value) {
  View next = v;
  next.constraints.insert(Facet{facet_name, value});
  return next;
}

View unfilter(const View& v, const std::string& facet_name, const std::string& value) {
  View next = v;
  if (next.constraints.erase(Facet{facet_name, value}) == 0) {
    throw Error(ErrorCode::kBadRequest,
                "constraint " + facet_name + "=" + value + " is not active");
  }
  return next;
}

View zoom(const View& v, const std::string& facet_name) {
  if (std::find(v.zoom_stack.begin(), v.zoom_stack.end(), facet_name) != v.zoom_stack.end())
    throw Error(ErrorCode::kAlreadyZoomed, "already zoomed on " + facet_name);
  View next = v;
  next.zoom_stack.push_back(facet_name);
  return next;
}

View unzoom(const View& v) {
  if (v.zoom_stack.empty()) throw Error(ErrorCode::kEmptyZoomStack, "nothing to unzoom");
  View next = v;
  next.zoom_stack.pop_back();
  return next;
}

std::map<std::string, std::vector<PortletId>> zoom_groups(const View& v) {
  std::map<std::string, std::vector<PortletId>> groups;
  if (v.zoom_stack.empty()) return groups;
  const auto& facet = v.zoom_stack.back();
  for (const auto& id : members(v)) {
    for (const auto& f : v.universe.at(id)) {
      if (f.name == facet) groups[f.value].push_back(id);
    }
  }
  return groups;
}

std::map<std::string, std::size_t> member_histogram(const View& v,
                                                    const std::string& facet_name) {
  std::map<std::string, std::size_t> counts;
  for (const auto& id : members(v)) {
    for (const auto& f : v.universe.at(id)) {
      if (f.name == facet_name) ++counts[f.value];
    }
  }
  return counts;
}

// ---- hierarchy ----

void Hierarchy::add_root(const std::string& root) {
  if (trim_copy(root).empty()) throw Error(ErrorCode::kBadRequest, "blank category");
  nodes_.insert(root);
}

void Hierarchy::add(const std::string& child, const std::string& parent) {
  if (trim_copy(child).empty() || trim_copy(parent).empty())
    throw Error(ErrorCode::kBadRequest, "blank category");
  if (auto it = parent_.find(child); it != parent_.end()) {
    if (it->second == parent) return;
    throw Error(ErrorCode::kBadRequest, child + " already has parent " + it->second);
  }
  for (std::optional<std::string> cur = parent; cur; cur = this->parent(*cur)) {
    if (*cur == child)
      throw Error(ErrorCode::kCycle, "making " + parent + " the parent of " + child +
                                         " closes a cycle");
  }
  nodes_.insert(child);
  nodes_.insert(parent);
  parent_[child] = parent;
}

bool Hierarchy::contains(const std::string& node) const { return nodes_.count(node) != 0; }

std::optional<std::string> Hierarchy::parent(const std::string& node) const {
  auto it = parent_.find(node);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

Breadcrumb breadcrumb_path(const Hierarchy& h, const std::string& node) {
  if (!h.contains(node)) throw Error(ErrorCode::kUnknownNode, "unknown category " + node);
  Breadcrumb b;
  for (std::optional<std::string> cur = node; cur; cur = h.parent(*cur))
    b.trail.push_back(*cur);
  std::reverse(b.trail.begin(), b.trail.end());
  return b;
}

}  // namespace facetforge::navigation
