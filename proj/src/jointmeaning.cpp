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

#include "facetforge/jointmeaning.hpp"

#include <algorithm>

#include "facetforge/error.hpp"

namespace facetforge::jointmeaning {

namespace {

constexpr const char* kKind = "kind";
constexpr const char* kInterest = "interest";
constexpr const char* kKnows = "knows";

struct Slot {
  matcher::ConceptId key;
  const matcher::Superconcept* superconcept;
  std::string speaker_label;
};

const matcher::Superconcept* superconcept_for(
    const taxonomy::Tag& tag, std::span<const matcher::Superconcept> all) {
  const matcher::Superconcept* by_label = nullptr;
  for (const auto& s : all) {
    if (s.matched_tags.count(tag)) return &s;
    if (!by_label) {
      for (const auto& t : s.matched_tags) {
        if (t.label == tag.label) {
          by_label = &s;
          break;
        }
      }
    }
  }
  return by_label;
}

taxonomy::FacetedInterface interface_for(
    const taxonomy::Portlet& portlet,
    const std::map<matcher::ConceptId, std::string>& labels) {
  auto iface = taxonomy::compose_interface(std::span(&portlet, 1));
  for (const auto& [key, label] : labels) iface.facet_selections.insert({"label", label});
  return iface;
}

}  // namespace

// ---- Community ----

void Community::put(User user) {
  if (user.id.empty()) throw Error(ErrorCode::kBadRequest, "user id is empty");
  std::set<std::string> interests;
  for (const auto& i : user.profile.interests) {
    auto n = taxonomy::normalize_label(i);
    if (!n.empty()) interests.insert(std::move(n));
  }
  user.profile.interests = std::move(interests);
  users_[user.id] = std::move(user);
}

const User* Community::find(const UserId& id) const {
  auto it = users_.find(id);
  return it == users_.end() ? nullptr : &it->second;
}

const User& Community::at(const UserId& id) const {
  const User* u = find(id);
  if (!u) throw Error(ErrorCode::kNotFound, "unknown user " + id);
  return *u;
}

std::vector<User> Community::audience_of(const UserId& speaker) const {
  std::vector<User> out;
  for (const auto& [id, u] : users_) {
    if (id != speaker) out.push_back(u);
  }
  return out;
}

void write_community(const Community& c, store::TripleStore& out) {
  using store::Term;
  using store::make_triple;
  for (const auto& [id, u] : c.users()) {
    out.insert(make_triple(id, kKind, Term::literal("user")));
    for (const auto& i : u.profile.interests)
      out.insert(make_triple(id, kInterest, Term::literal(i)));
    for (const auto& f : u.profile.friends) out.insert(make_triple(id, kKnows, f));
  }
}

Community read_community(const store::TripleStore& in) {
  Community c;
  for (const auto& b : in.query({store::Pattern{store::Term::variable("u"),
                                                store::Term::iri(kKind),
                                                store::Term::literal("user")}})) {
    User u;
    u.id = b.at("u").text;
    for (const auto& t : in.objects(u.id, kInterest)) u.profile.interests.insert(t.text);
    for (const auto& t : in.objects(u.id, kKnows)) u.profile.friends.insert(t.text);
    c.put(std::move(u));
  }
  return c;
}

// ---- label preference ----

LabelPreference::LabelPreference(const matcher::Superconcept& s,
                                 const matcher::Ontology& o,
                                 const FoafProfile& viewer,
                                 std::string speaker_label)
    : interests_(viewer.interests), speaker_label_(std::move(speaker_label)) {
  for (const auto& id : s.members) {
    const auto& c = o.at(id);
    labels_.insert(c.label);
    contexts_[c.label].insert(c.tag_context.begin(), c.tag_context.end());
  }
}

std::size_t LabelPreference::overlap(const std::string& label) const {
  auto it = contexts_.find(label);
  if (it == contexts_.end()) return 0;
  std::size_t n = 0;
  for (const auto& t : it->second) n += interests_.count(t);
  return n;
}

bool LabelPreference::prefers(const std::string& a, const std::string& b) const {
  if (a == b) return false;
  std::size_t oa = overlap(a), ob = overlap(b);
  if (oa != ob) return oa > ob;
  if (oa == 0) {
    if (a == speaker_label_) return true;
    if (b == speaker_label_) return false;
  }
  return a < b;
}

std::vector<std::string> LabelPreference::interesting_labels() const {
  std::vector<std::string> out;
  for (const auto& l : labels_) {
    if (overlap(l) > 0) out.push_back(l);
  }
  return out;
}

std::string audience_label(const matcher::Superconcept& s, const matcher::Ontology& o,
                           const FoafProfile& p, const std::string& speaker_label) {
  LabelPreference pref(s, o, p, speaker_label);
  std::string best = speaker_label;
  for (const auto& l : pref.member_labels()) {
    if (pref.prefers(l, best)) best = l;
  }
  return best;
}

std::string speaker_label_for(const taxonomy::Tag& tag, const matcher::Superconcept& s,
                              const matcher::Ontology& o) {
  std::string best;
  std::size_t best_distance = 0;
  auto probe = taxonomy::to_code_points(tag.label);
  for (const auto& id : s.members) {
    const auto& label = o.at(id).label;
    if (label == tag.label) return label;
    std::size_t d = matcher::edit_distance(probe, taxonomy::to_code_points(label));
    if (best.empty() || d < best_distance || (d == best_distance && label < best)) {
      best = label;
      best_distance = d;
    }
  }
  return best;
}

// ---- fixpoint ----

JointResolution resolve_joint_interface(
    const User& speaker, std::span<const User> audience,
    const taxonomy::Portlet& portlet,
    std::span<const matcher::Superconcept> superconcepts, const matcher::Ontology& o) {
  for (const auto& u : audience) {
    if (u.id == speaker.id)
      throw Error(ErrorCode::kBadRequest, "speaker " + speaker.id + " is in the audience");
  }

  std::vector<Slot> slots;
  for (const auto& tag : portlet.folksonomy) {
    const auto* s = superconcept_for(tag, superconcepts);
    if (!s) {
      throw Error(ErrorCode::kUnmatchedTag,
                  "tag '" + tag.label + "' of portlet " + portlet.id +
                      " has no superconcept");
    }
    bool seen = std::any_of(slots.begin(), slots.end(),
                            [&](const Slot& x) { return x.key == s->key(); });
    if (!seen) slots.push_back({s->key(), s, speaker_label_for(tag, *s, o)});
  }

  using Assignment = std::map<matcher::ConceptId, std::string>;
  Assignment speaker_assignment;
  std::size_t total_labels = 0;
  for (const auto& slot : slots) {
    speaker_assignment[slot.key] = slot.speaker_label;
    std::set<std::string> labels;
    for (const auto& id : slot.superconcept->members) labels.insert(o.at(id).label);
    total_labels += labels.size();
  }

  // Preferences are fixed per (viewer, slot) for the whole iteration.
  std::vector<std::vector<LabelPreference>> prefs(audience.size());
  for (std::size_t v = 0; v < audience.size(); ++v) {
    for (const auto& slot : slots) {
      prefs[v].emplace_back(*slot.superconcept, o, audience[v].profile, slot.speaker_label);
    }
  }

  std::vector<Assignment> state(audience.size(), speaker_assignment);
  JointResolution result;
  result.round_bound = (audience.size() + 1) * std::max<std::size_t>(total_labels, 1);

  for (;;) {
    ++result.rounds;
    std::vector<std::set<std::string>> pool(slots.size());
    for (std::size_t k = 0; k < slots.size(); ++k) {
      pool[k].insert(slots[k].speaker_label);
      for (const auto& a : state) pool[k].insert(a.at(slots[k].key));
    }

    // Every viewer reads only the previous round's state.
    std::vector<Assignment> next = state;
    bool changed = false;
    for (std::size_t v = 0; v < audience.size(); ++v) {
      for (std::size_t k = 0; k < slots.size(); ++k) {
        const auto& pref = prefs[v][k];
        std::string best = state[v].at(slots[k].key);
        for (const auto& l : pool[k]) {
          if (pref.prefers(l, best)) best = l;
        }
        for (const auto& l : pref.interesting_labels()) {
          if (pref.prefers(l, best)) best = l;
        }
        if (best != state[v].at(slots[k].key)) {
          next[v][slots[k].key] = best;
          changed = true;
        }
      }
    }
    state = std::move(next);
    if (!changed) break;
    // Ranks only increase, so this bound is never the reason to stop.
    if (result.rounds >= result.round_bound) break;
  }

  result.views[speaker.id] = ConstruedView{speaker.id, portlet.id, speaker_assignment,
                                           interface_for(portlet, speaker_assignment)};
  for (std::size_t v = 0; v < audience.size(); ++v) {
    result.views[audience[v].id] = ConstruedView{audience[v].id, portlet.id, state[v],
                                                 interface_for(portlet, state[v])};
  }
  return result;
}

}  // namespace facetforge::jointmeaning
