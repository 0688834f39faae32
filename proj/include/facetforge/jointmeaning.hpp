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
#include <set>
#include <span>
#include <string>
#include <vector>

#include "facetforge/matcher.hpp"
#include "facetforge/store.hpp"
#include "facetforge/taxonomy.hpp"

namespace facetforge::jointmeaning {

using taxonomy::UserId;

struct FoafProfile {
  std::set<std::string> interests;  // normalized like tags
  std::set<UserId> friends;         // not necessarily symmetric

  friend bool operator==(const FoafProfile&, const FoafProfile&) = default;
};

struct User {
  UserId id;
  FoafProfile profile;

  friend bool operator==(const User&, const User&) = default;
};

// The user set U. Ids are unique; adding an existing id replaces it.
class Community {
 public:
  void put(User user);  // normalizes interests
  const User* find(const UserId& id) const;
  const User& at(const UserId& id) const;  // throws kNotFound
  std::size_t size() const { return users_.size(); }
  const std::map<UserId, User>& users() const { return users_; }

  // Everyone but `speaker`, i.e. U - {u}.
  std::vector<User> audience_of(const UserId& speaker) const;

 private:
  std::map<UserId, User> users_;
};

//   <u> <kind> "user"   <u> <interest> "sports"   <u> <knows> <v>
void write_community(const Community& c, store::TripleStore& out);
Community read_community(const store::TripleStore& in);

// A viewer's ranking of the labels of one superconcept. Labels whose member
// contexts overlap the viewer's interests rank first (more overlap, then
// lexicographically smaller); the speaker's label comes next; every other
// label ranks last in lexicographic order.
class LabelPreference {
 public:
  LabelPreference(const matcher::Superconcept& s, const matcher::Ontology& o,
                  const FoafProfile& viewer, std::string speaker_label);

  std::size_t overlap(const std::string& label) const;
  // True when `a` ranks strictly above `b`.
  bool prefers(const std::string& a, const std::string& b) const;
  // The labels the viewer relates to through their interests.
  std::vector<std::string> interesting_labels() const;
  const std::set<std::string>& member_labels() const { return labels_; }
  const std::string& speaker_label() const { return speaker_label_; }

 private:
  std::map<std::string, std::set<std::string>> contexts_;  // label -> union
  std::set<std::string> labels_;
  std::set<std::string> interests_;
  std::string speaker_label_;
};

// The viewer's top-ranked member label: maximal interest overlap, ties broken
// lexicographically, falling back to `speaker_label` when nothing overlaps.
std::string audience_label(const matcher::Superconcept& s,
                           const matcher::Ontology& o, const FoafProfile& p,
                           const std::string& speaker_label);

struct ConstruedView {
  UserId viewer;
  taxonomy::PortletId portlet;
  // superconcept key (smallest member id) -> chosen label
  std::map<matcher::ConceptId, std::string> label_assignment;
  taxonomy::FacetedInterface interface;

  friend bool operator==(const ConstruedView&, const ConstruedView&) = default;
};

struct JointResolution {
  std::map<UserId, ConstruedView> views;
  std::size_t rounds = 0;
  // users x total member labels; rounds never exceed it.
  std::size_t round_bound = 0;

  friend bool operator==(const JointResolution&, const JointResolution&) = default;
};

// The label the speaker attaches to a superconcept for one of their tags:
// the tag itself when it names a member, else the closest member label.
std::string speaker_label_for(const taxonomy::Tag& tag,
                              const matcher::Superconcept& s,
                              const matcher::Ontology& o);

// Alternating construal rounds until no view changes. Every round each
// audience member picks their best-ranked label among the shared pool
// (labels anyone held in the previous round), the speaker's label, and the
// labels they relate to by interest. The speaker's view never changes.
// Throws kUnmatchedTag when a portlet tag has no superconcept and
// kBadRequest when the speaker is part of the audience.
JointResolution resolve_joint_interface(const User& speaker,
                                        std::span<const User> audience,
                                        const taxonomy::Portlet& portlet,
                                        std::span<const matcher::Superconcept> superconcepts,
                                        const matcher::Ontology& o);

}  // namespace facetforge::jointmeaning
