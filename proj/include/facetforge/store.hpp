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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace facetforge::store {

enum class TermKind { kIri, kLiteral, kVariable };

// An RDF atom. IRIs are opaque strings; variables carry their name without
// the leading '?'.
struct Term {
  TermKind kind = TermKind::kIri;
  std::string text;

  static Term iri(std::string text) { return {TermKind::kIri, std::move(text)}; }
  static Term literal(std::string text) {
    return {TermKind::kLiteral, std::move(text)};
  }
  static Term variable(std::string name) {
    return {TermKind::kVariable, std::move(name)};
  }

  bool is_variable() const { return kind == TermKind::kVariable; }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// A triple pattern; any position may hold a variable.
using Pattern = Triple;

Triple make_triple(std::string subject, std::string predicate, Term object);
Triple make_triple(std::string subject, std::string predicate,
                   std::string object_iri);

// Throws Error(kMalformedTerm) unless the triple is storable: subject and
// predicate are IRIs, object is an IRI or literal, no text is blank.
void validate_triple(const Triple& t);

// One solution: variable name -> bound term.
using Binding = std::map<std::string, Term>;
using BindingSet = std::vector<Binding>;

class TripleStore {
 public:
  using const_iterator = std::set<Triple>::const_iterator;

  // Returns true if the triple was new. Revision advances only then.
  bool insert(const Triple& t);
  // Returns true if the triple was present.
  bool erase(const Triple& t);
  bool contains(const Triple& t) const { return triples_.count(t) != 0; }

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  std::uint64_t revision() const { return revision_; }

  const_iterator begin() const { return triples_.begin(); }
  const_iterator end() const { return triples_.end(); }
  const std::set<Triple>& triples() const { return triples_; }

  // Conjunctive basic-graph-pattern evaluation by nested-loop join.
  // Results are deduplicated and sorted by the bound term texts, taking the
  // variables in name order.
  BindingSet query(std::span<const Pattern> patterns) const;
  BindingSet query(std::initializer_list<Pattern> patterns) const {
    return query(std::span<const Pattern>(patterns.begin(), patterns.size()));
  }

  // Convenience accessors over single-variable lookups.
  std::vector<Term> objects(const std::string& subject,
                            const std::string& predicate) const;
  std::vector<std::string> subjects_with(const std::string& predicate) const;

 private:
  std::set<Triple> triples_;
  std::uint64_t revision_ = 0;
};

// Line-oriented N-Triples subset:
//   <iri> <iri> <iri> .
//   <iri> <iri> "literal" .
// '#' lines and blank lines are ignored. IRIs escape reserved characters as
// \uXXXX; literals use \" \\ \n \r \t.
std::string format_term(const Term& term);
std::string format_triple(const Triple& t);
void write_ntriples(const TripleStore& store, std::ostream& out);
TripleStore read_ntriples(std::istream& in);

void persist(const TripleStore& store, const std::filesystem::path& path);
TripleStore restore(const std::filesystem::path& path);

}  // namespace facetforge::store
