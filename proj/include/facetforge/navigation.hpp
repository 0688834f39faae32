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

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "facetforge/store.hpp"
#include "facetforge/taxonomy.hpp"

namespace facetforge::navigation {

using NodeId = std::string;
using taxonomy::Facet;
using taxonomy::FacetSet;
using taxonomy::PortletId;

// Nodes Navigation graph: nodes bound to portlets or facet-value views,
// joined by directed links. Each node may carry facets used by the
// profile pre-filter.
class NavGraph {
 public:
  void add_node(const NodeId& id, FacetSet facets = {});
  // Both endpoints must exist (kUnknownNode). Duplicate links collapse.
  void add_link(const NodeId& from, const NodeId& to);

  bool contains(const NodeId& id) const { return nodes_.count(id) != 0; }
  const std::map<NodeId, FacetSet>& nodes() const { return nodes_; }
  const std::set<std::pair<NodeId, NodeId>>& links() const { return links_; }
  // Successors in ascending id order.
  const std::set<NodeId>& successors(const NodeId& id) const;

  friend bool operator==(const NavGraph&, const NavGraph&) = default;

 private:
  std::map<NodeId, FacetSet> nodes_;
  std::set<std::pair<NodeId, NodeId>> links_;
  std::map<NodeId, std::set<NodeId>> out_;
};

//   <a> <linksTo> <b>   <a> <navNode> "node"   <a> <hasFacet> "n=v"
void write_graph(const NavGraph& g, store::TripleStore& out);
NavGraph read_graph(const store::TripleStore& in);

// Fewest links from `start` to the nearest goal; among equally short paths
// the lexicographically smallest node sequence. The start node is not part
// of the result, so start in goals gives an empty path.
// `allowed`, when given, restricts the intermediate nodes; start and goals
// always stay usable.
std::vector<NodeId> plan_won(const NavGraph& g, const NodeId& start,
                             const std::set<NodeId>& goals,
                             const std::function<bool(const NodeId&)>& allowed = {});

// Pre-filter for plan_won: keeps nodes that carry no facets or whose facet
// values share at least one normalized term with `interests`.
std::function<bool(const NodeId&)> interest_filter(const NavGraph& g,
                                                   const std::set<std::string>& interests);

// Every distinct shortest path between two nodes (start excluded), up to
// `limit`. Used to show that different users may reach the same node by
// different routes.
std::vector<std::vector<NodeId>> shortest_paths(const NavGraph& g, const NodeId& start,
                                                const NodeId& goal, std::size_t limit = 16);

// A filter/zoom state over a fixed universe of portlets.
struct View {
  std::map<PortletId, FacetSet> universe;
  FacetSet constraints;
  std::vector<std::string> zoom_stack;

  static View over(std::span<const taxonomy::Portlet> portlets);

  friend bool operator==(const View&, const View&) = default;
};

// Universe members carrying every constraint.
std::vector<PortletId> members(const View& v);

View filter(const View& v, const std::string& facet_name, const std::string& value);
// kBadRequest if the constraint is not present.
View unfilter(const View& v, const std::string& facet_name, const std::string& value);
// kAlreadyZoomed if the facet is on the stack already.
View zoom(const View& v, const std::string& facet_name);
// kEmptyZoomStack on an empty stack.
View unzoom(const View& v);

// Members grouped by value of the innermost zoomed facet (value -> members).
// Members lacking the facet are left out. Empty when nothing is zoomed.
std::map<std::string, std::vector<PortletId>> zoom_groups(const View& v);

// Counts over the current members, like taxonomy::facet_histogram.
std::map<std::string, std::size_t> member_histogram(const View& v,
                                                    const std::string& facet_name);

// Enumerative baseline: a forest given by child -> parent links.
class Hierarchy {
 public:
  // Throws kCycle if `parent` already descends from `child`, and
  // kBadRequest if `child` already has a different parent.
  void add(const std::string& child, const std::string& parent);
  void add_root(const std::string& root);

  bool contains(const std::string& node) const;
  std::optional<std::string> parent(const std::string& node) const;

 private:
  std::map<std::string, std::string> parent_;
  std::set<std::string> nodes_;
};

struct Breadcrumb {
  std::vector<std::string> trail;  // root first

  friend bool operator==(const Breadcrumb&, const Breadcrumb&) = default;
};

// kUnknownNode when the node is not in the hierarchy.
Breadcrumb breadcrumb_path(const Hierarchy& h, const std::string& node);

}  // namespace facetforge::navigation
