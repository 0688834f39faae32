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

#include "facetforge/taxonomy.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <functional>

#include "facetforge/error.hpp"

namespace facetforge::taxonomy {

namespace {

icu::UnicodeString fold_and_compose(const icu::UnicodeString& in) {
  icu::UnicodeString folded;
  for (int32_t i = 0; i < in.length();) {
    UChar32 c = in.char32At(i);
    folded.append(u_foldCase(c, U_FOLD_CASE_DEFAULT));
    i += U16_LENGTH(c);
  }
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return folded;
  icu::UnicodeString composed = nfc->normalize(folded, status);
  return U_FAILURE(status) ? folded : composed;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

std::string child_literal(std::size_t index, const PortletId& child) {
  return std::to_string(index) + ":" + child;
}

}  // namespace

std::string normalize_label(std::string_view raw) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));

  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && is_space(s.char32At(begin)))
    begin += U16_LENGTH(s.char32At(begin));
  while (end > begin) {
    int32_t prev = s.moveIndex32(end, -1);
    if (!is_space(s.char32At(prev))) break;
    end = prev;
  }
  icu::UnicodeString trimmed = s.tempSubStringBetween(begin, end);

  // Folding can un-compose a sequence and composing can produce a foldable
  // code point, so repeat until both steps agree.
  icu::UnicodeString current = fold_and_compose(trimmed);
  for (int i = 0; i < 4; ++i) {
    icu::UnicodeString next = fold_and_compose(current);
    if (next == current) break;
    current = next;
  }
  std::string out;
  current.toUTF8String(out);
  return out;
}

std::u32string to_code_points(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out;
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

Tag create_tag(std::string_view raw_label, const UserId& owner) {
  std::string label = normalize_label(raw_label);
  if (label.empty()) throw Error(ErrorCode::kEmptyLabel, "tag label is blank");
  return Tag{std::move(label), owner};
}

std::string format_facet(const Facet& f) { return f.name + "=" + f.value; }

Facet parse_facet(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error(ErrorCode::kBadRequest,
                "facet must be name=value: " + std::string(text));
  }
  return Facet{std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

// ---- FacetedTaxonomy ----

FacetedTaxonomy FacetedTaxonomy::attach(const Tag& tag,
                                        const FacetedInterface& iface) const {
  FacetedTaxonomy next = *this;
  next.pairs_.insert(FacetPair{tag, iface});
  return next;
}

bool FacetedTaxonomy::contains(const Tag& tag,
                               const FacetedInterface& iface) const {
  return pairs_.count(FacetPair{tag, iface}) != 0;
}

std::set<Tag> FacetedTaxonomy::tags() const {
  std::set<Tag> out;
  for (const auto& p : pairs_) out.insert(p.tag);
  return out;
}

// ---- Portlets ----

std::string_view to_string(PortletKind kind) {
  switch (kind) {
    case PortletKind::kText: return "text";
    case PortletKind::kPicture: return "picture";
    case PortletKind::kVideo: return "video";
    case PortletKind::kAudio: return "audio";
    case PortletKind::kCode: return "code";
  }
  return "text";
}

std::optional<PortletKind> parse_portlet_kind(std::string_view text) {
  for (auto k : {PortletKind::kText, PortletKind::kPicture, PortletKind::kVideo,
                 PortletKind::kAudio, PortletKind::kCode}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

bool PortletCatalog::reaches(const PortletId& from,
                             const PortletId& target) const {
  std::set<PortletId> seen;
  std::vector<PortletId> stack{from};
  while (!stack.empty()) {
    PortletId id = stack.back();
    stack.pop_back();
    if (id == target) return true;
    if (!seen.insert(id).second) continue;
    if (auto it = portlets_.find(id); it != portlets_.end()) {
      for (const auto& c : it->second.children) stack.push_back(c);
    }
  }
  return false;
}

void PortletCatalog::put(Portlet portlet) {
  if (portlet.id.empty())
    throw Error(ErrorCode::kBadRequest, "portlet id is empty");
  for (const auto& child : portlet.children) {
    if (child == portlet.id)
      throw Error(ErrorCode::kCycle, "portlet " + portlet.id + " contains itself");
    if (!contains(child))
      throw Error(ErrorCode::kUnknownPortlet, "unknown child portlet " + child);
    if (reaches(child, portlet.id)) {
      throw Error(ErrorCode::kCycle,
                  "adding " + child + " under " + portlet.id + " creates a cycle");
    }
  }
  if (auto it = portlets_.find(portlet.id);
      it != portlets_.end() && it->second.kind != portlet.kind) {
    throw Error(ErrorCode::kBadRequest,
                "portlet " + portlet.id + " already exists with kind " +
                    std::string(to_string(it->second.kind)));
  }
  portlets_[portlet.id] = std::move(portlet);
}

void PortletCatalog::add_child(const PortletId& parent, const PortletId& child) {
  Portlet p = at(parent);
  if (std::find(p.children.begin(), p.children.end(), child) != p.children.end())
    return;
  p.children.push_back(child);
  put(std::move(p));
}

void PortletCatalog::add_tag(const PortletId& id, const Tag& tag) {
  auto it = portlets_.find(id);
  if (it == portlets_.end())
    throw Error(ErrorCode::kUnknownPortlet, "unknown portlet " + id);
  it->second.folksonomy.insert(tag);
}

const Portlet* PortletCatalog::find(const PortletId& id) const {
  auto it = portlets_.find(id);
  return it == portlets_.end() ? nullptr : &it->second;
}

const Portlet& PortletCatalog::at(const PortletId& id) const {
  const Portlet* p = find(id);
  if (!p) throw Error(ErrorCode::kUnknownPortlet, "unknown portlet " + id);
  return *p;
}

std::vector<PortletId> PortletCatalog::descendants(const PortletId& id) const {
  std::vector<PortletId> out;
  std::set<PortletId> seen;
  std::function<void(const PortletId&)> visit = [&](const PortletId& cur) {
    for (const auto& c : at(cur).children) {
      if (!seen.insert(c).second) continue;
      visit(c);
      out.push_back(c);
    }
  };
  visit(id);
  return out;
}

FacetedTaxonomy PortletCatalog::taxonomy() const {
  FacetedTaxonomy f;
  for (const auto& [id, p] : portlets_) {
    FacetedInterface iface = compose_interface(std::span<const Portlet>(&p, 1));
    for (const auto& tag : p.folksonomy) f = f.attach(tag, iface);
  }
  return f;
}

FacetedInterface compose_interface(std::span<const Portlet> portlets) {
  if (portlets.empty())
    throw Error(ErrorCode::kBadRequest, "compose needs at least one portlet");
  FacetedInterface out;
  out.id = "view:";
  std::set<PortletId> seen;
  for (const auto& p : portlets) {
    if (!seen.insert(p.id).second)
      throw Error(ErrorCode::kDuplicatePortlet, "portlet " + p.id + " repeated");
    out.facet_selections.insert(p.facets.begin(), p.facets.end());
    out.layout_slots.push_back(p.id);
    if (out.layout_slots.size() > 1) out.id += '+';
    out.id += p.id;
  }
  return out;
}

std::map<std::string, std::size_t> facet_histogram(
    std::span<const Portlet> portlets, std::string_view facet_name) {
  std::map<std::string, std::size_t> counts;
  for (const auto& p : portlets) {
    for (const auto& f : p.facets) {
      if (f.name == facet_name) ++counts[f.value];
    }
  }
  return counts;
}

// ---- triple mapping ----

std::vector<store::Triple> to_triples(const Portlet& p) {
  using store::Term;
  using store::make_triple;
  namespace pr = predicates;
  std::vector<store::Triple> out;
  out.push_back(make_triple(p.id, pr::kKind, Term::literal(std::string(to_string(p.kind)))));
  if (!p.owner.empty()) out.push_back(make_triple(p.id, pr::kOwnedBy, p.owner));
  if (!p.payload_ref.empty())
    out.push_back(make_triple(p.id, pr::kPayload, Term::literal(p.payload_ref)));
  for (const auto& t : p.folksonomy)
    out.push_back(make_triple(p.id, pr::kHasTag, Term::literal(t.label)));
  for (const auto& f : p.facets)
    out.push_back(make_triple(p.id, pr::kHasFacet, Term::literal(format_facet(f))));
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    out.push_back(make_triple(p.id, pr::kHasChild,
                              Term::literal(child_literal(i, p.children[i]))));
  }
  return out;
}

std::vector<store::Triple> to_triples(const FacetedTaxonomy& f) {
  using store::Term;
  using store::make_triple;
  namespace pr = predicates;
  std::vector<store::Triple> out;
  for (const auto& pair : f.pairs()) {
    const auto& iface = pair.interface;
    std::string node = "pair:" + pair.tag.owner + "|" + pair.tag.label + "|" + iface.id;
    out.push_back(make_triple(node, pr::kKind, Term::literal("pair")));
    out.push_back(make_triple(node, pr::kHasTag, Term::literal(pair.tag.label)));
    if (!pair.tag.owner.empty())
      out.push_back(make_triple(node, pr::kOwnedBy, pair.tag.owner));
    out.push_back(make_triple(node, pr::kInterface, iface.id));
    out.push_back(make_triple(iface.id, pr::kKind, Term::literal("interface")));
    for (const auto& facet : iface.facet_selections) {
      out.push_back(make_triple(iface.id, pr::kHasFacet,
                                Term::literal(format_facet(facet))));
    }
    for (std::size_t i = 0; i < iface.layout_slots.size(); ++i) {
      out.push_back(make_triple(iface.id, pr::kHasChild,
                                Term::literal(child_literal(i, iface.layout_slots[i]))));
    }
  }
  return out;
}

void write_catalog(const PortletCatalog& catalog, store::TripleStore& out) {
  for (const auto& [id, p] : catalog.all()) {
    for (const auto& t : to_triples(p)) out.insert(t);
  }
}

namespace {

std::string single_literal(const store::TripleStore& in, const std::string& s,
                           const char* predicate) {
  auto objs = in.objects(s, predicate);
  return objs.empty() ? std::string() : objs.front().text;
}

std::vector<PortletId> ordered_children(const store::TripleStore& in,
                                        const std::string& subject) {
  std::vector<std::pair<std::size_t, PortletId>> slots;
  for (const auto& term : in.objects(subject, predicates::kHasChild)) {
    auto colon = term.text.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::kBadRequest, "bad hasChild value " + term.text);
    std::size_t index = std::stoul(term.text.substr(0, colon));
    slots.emplace_back(index, term.text.substr(colon + 1));
  }
  std::sort(slots.begin(), slots.end());
  std::vector<PortletId> out;
  for (auto& [i, id] : slots) out.push_back(std::move(id));
  return out;
}

FacetSet read_facets(const store::TripleStore& in, const std::string& subject) {
  FacetSet out;
  for (const auto& term : in.objects(subject, predicates::kHasFacet))
    out.insert(parse_facet(term.text));
  return out;
}

}  // namespace

PortletCatalog read_catalog(const store::TripleStore& in) {
  std::map<PortletId, Portlet> pending;
  for (const auto& id : in.subjects_with(predicates::kKind)) {
    auto kind = parse_portlet_kind(single_literal(in, id, predicates::kKind));
    if (!kind) continue;
    Portlet p;
    p.id = id;
    p.kind = *kind;
    p.owner = single_literal(in, id, predicates::kOwnedBy);
    p.payload_ref = single_literal(in, id, predicates::kPayload);
    for (const auto& term : in.objects(id, predicates::kHasTag))
      p.folksonomy.insert(Tag{term.text, p.owner});
    p.facets = read_facets(in, id);
    p.children = ordered_children(in, id);
    pending.emplace(id, std::move(p));
  }

  // Insert children before parents so the catalog's acyclicity check holds.
  PortletCatalog catalog;
  std::set<PortletId> visiting;
  std::function<void(const PortletId&)> load = [&](const PortletId& id) {
    if (catalog.contains(id)) return;
    auto it = pending.find(id);
    if (it == pending.end())
      throw Error(ErrorCode::kUnknownPortlet, "dangling child portlet " + id);
    if (!visiting.insert(id).second)
      throw Error(ErrorCode::kCycle, "stored portlets form a cycle at " + id);
    for (const auto& c : it->second.children) load(c);
    catalog.put(it->second);
  };
  for (const auto& [id, p] : pending) load(id);
  return catalog;
}

FacetedTaxonomy read_taxonomy(const store::TripleStore& in) {
  FacetedTaxonomy f;
  for (const auto& node : in.subjects_with(predicates::kKind)) {
    if (single_literal(in, node, predicates::kKind) != "pair") continue;
    Tag tag{single_literal(in, node, predicates::kHasTag),
            single_literal(in, node, predicates::kOwnedBy)};
    FacetedInterface iface;
    iface.id = single_literal(in, node, predicates::kInterface);
    iface.facet_selections = read_facets(in, iface.id);
    iface.layout_slots = ordered_children(in, iface.id);
    f = f.attach(tag, iface);
  }
  return f;
}

}  // namespace facetforge::taxonomy
