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

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "facetforge/store.hpp"

namespace facetforge::taxonomy {

using UserId = std::string;
using PortletId = std::string;

// trim -> Unicode simple case folding -> NFC. Returns "" for blank input.
std::string normalize_label(std::string_view raw);

// Code points of a UTF-8 string (invalid sequences become U+FFFD).
std::u32string to_code_points(std::string_view utf8);

struct Tag {
  std::string label;  // normalized, non-empty
  UserId owner;

  friend auto operator<=>(const Tag&, const Tag&) = default;
  friend bool operator==(const Tag&, const Tag&) = default;
};

// Throws Error(kEmptyLabel) when the label is blank.
Tag create_tag(std::string_view raw_label, const UserId& owner);

struct Facet {
  std::string name;
  std::string value;

  friend auto operator<=>(const Facet&, const Facet&) = default;
  friend bool operator==(const Facet&, const Facet&) = default;
};

using FacetSet = std::set<Facet>;

// "name=value"; the name may not contain '='.
std::string format_facet(const Facet& f);
Facet parse_facet(std::string_view text);

struct FacetedInterface {
  std::string id;
  FacetSet facet_selections;
  std::vector<PortletId> layout_slots;

  friend auto operator<=>(const FacetedInterface&,
                          const FacetedInterface&) = default;
  friend bool operator==(const FacetedInterface&,
                         const FacetedInterface&) = default;
};

struct FacetPair {
  Tag tag;
  FacetedInterface interface;

  friend auto operator<=>(const FacetPair&, const FacetPair&) = default;
  friend bool operator==(const FacetPair&, const FacetPair&) = default;
};

// The set of (tag, interface) pairs. One tag may pair with many interfaces
// and one interface with many tags.
class FacetedTaxonomy {
 public:
  FacetedTaxonomy attach(const Tag& tag, const FacetedInterface& iface) const;
  bool contains(const Tag& tag, const FacetedInterface& iface) const;

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::set<FacetPair>& pairs() const { return pairs_; }
  std::set<Tag> tags() const;

  friend bool operator==(const FacetedTaxonomy&, const FacetedTaxonomy&) = default;

 private:
  std::set<FacetPair> pairs_;
};

enum class PortletKind { kText, kPicture, kVideo, kAudio, kCode };

std::string_view to_string(PortletKind kind);
std::optional<PortletKind> parse_portlet_kind(std::string_view text);

struct Portlet {
  PortletId id;
  PortletKind kind = PortletKind::kText;
  std::string payload_ref;
  UserId owner;
  std::set<Tag> folksonomy;
  FacetSet facets;
  std::vector<PortletId> children;

  friend bool operator==(const Portlet&, const Portlet&) = default;
};

// Portlets keyed by id. Children must already be registered, which keeps the
// containment graph acyclic by construction; replacing a portlet re-checks
// for cycles.
class PortletCatalog {
 public:
  // Inserts or replaces. Throws kUnknownPortlet for a missing child and
  // kCycle if the portlet would contain itself transitively.
  void put(Portlet portlet);
  void add_child(const PortletId& parent, const PortletId& child);
  void add_tag(const PortletId& id, const Tag& tag);

  const Portlet* find(const PortletId& id) const;
  const Portlet& at(const PortletId& id) const;
  bool contains(const PortletId& id) const { return portlets_.count(id) != 0; }
  std::size_t size() const { return portlets_.size(); }
  const std::map<PortletId, Portlet>& all() const { return portlets_; }

  // Children first, every portlet once; the portlet itself is excluded.
  std::vector<PortletId> descendants(const PortletId& id) const;

  // One pair per (tag, portlet), pairing the tag with the portlet's own
  // interface as produced by compose_interface.
  FacetedTaxonomy taxonomy() const;

 private:
  bool reaches(const PortletId& from, const PortletId& target) const;

  std::map<PortletId, Portlet> portlets_;
};

// Union of facet sets in argument order; slots keep argument order.
// Throws kDuplicatePortlet on repeated ids and kBadRequest on empty input.
FacetedInterface compose_interface(std::span<const Portlet> portlets);

std::map<std::string, std::size_t> facet_histogram(
    std::span<const Portlet> portlets, std::string_view facet_name);

// ---- triple mapping ----
//   <p> <kind> "picture"        <p> <ownedBy> <u>
//   <p> <hasTag> "ferrari"      <p> <hasFacet> "brand=ferrari"
//   <p> <hasChild> "0:p2"       <p> <payload> "img/f1.jpg"
namespace predicates {
inline constexpr const char* kKind = "kind";
inline constexpr const char* kHasTag = "hasTag";
inline constexpr const char* kHasFacet = "hasFacet";
inline constexpr const char* kHasChild = "hasChild";
inline constexpr const char* kOwnedBy = "ownedBy";
inline constexpr const char* kPayload = "payload";
inline constexpr const char* kInterface = "interface";
}  // namespace predicates

std::vector<store::Triple> to_triples(const Portlet& p);
std::vector<store::Triple> to_triples(const FacetedTaxonomy& f);
void write_catalog(const PortletCatalog& catalog, store::TripleStore& out);
PortletCatalog read_catalog(const store::TripleStore& in);
FacetedTaxonomy read_taxonomy(const store::TripleStore& in);

}  // namespace facetforge::taxonomy
