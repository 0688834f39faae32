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
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "facetforge/store.hpp"
#include "facetforge/taxonomy.hpp"

namespace facetforge::matcher {

using ConceptId = std::string;

struct Concept {
  ConceptId id;
  std::string label;                  // normalized
  std::set<std::string> tag_context;  // normalized tag labels
  std::vector<double> numeric_features;

  friend bool operator==(const Concept&, const Concept&) = default;
};

// A domain ontology. Equivalence edges are stored undirected (smaller id
// first); broader edges are (narrower, broader) and must stay acyclic.
class Ontology {
 public:
  // Replaces any concept with the same id. Labels and contexts are
  // normalized on the way in.
  void add_concept(Concept c);
  void add_equivalence(const ConceptId& a, const ConceptId& b);
  // Throws kCycle if the edge would close a broader-than loop.
  void add_broader(const ConceptId& narrower, const ConceptId& broader);

  const Concept* find(const ConceptId& id) const;
  const Concept& at(const ConceptId& id) const;
  bool empty() const { return concepts_.empty(); }
  std::size_t size() const { return concepts_.size(); }
  const std::map<ConceptId, Concept>& concepts() const { return concepts_; }
  const std::set<std::pair<ConceptId, ConceptId>>& equivalences() const {
    return equivalences_;
  }
  const std::set<std::pair<ConceptId, ConceptId>>& broader_edges() const {
    return broader_;
  }
  // Concepts one equivalence edge away from `id`.
  std::set<ConceptId> equivalent_to(const ConceptId& id) const;
  // The shared feature length, or 0 for an empty ontology.
  std::size_t feature_count() const;

 private:
  void require(const ConceptId& id) const;

  std::map<ConceptId, Concept> concepts_;
  std::set<std::pair<ConceptId, ConceptId>> equivalences_;
  std::set<std::pair<ConceptId, ConceptId>> broader_;
};

// Ontology <-> triples:
//   <c> <label> "sport car"     <c> <context> "sports"
//   <c> <equivalentTo> <d>      <c> <broader> <d>
//   <c> <feature_0> "0.25"
void write_ontology(const Ontology& o, store::TripleStore& out);
Ontology read_ontology(const store::TripleStore& in);

inline constexpr std::size_t kDimensions = 3;

// Per-dimension representations of a concept: label code points, tag-set,
// numeric features.
struct ConceptVector {
  std::u32string label;
  std::set<std::string> tagset;
  std::vector<double> numeric;

  friend bool operator==(const ConceptVector&, const ConceptVector&) = default;
};

ConceptVector vectorize(const Concept& c);

// Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

// Each entry lies in [0,1] and is 0 for identical inputs:
//   [0] edit distance / longer label length
//   [1] 1 - Jaccard(tag sets)
//   [2] |a - b| / (|a| + |b|)   (Euclidean norms)
std::vector<double> dimension_dissimilarities(const ConceptVector& a,
                                              const ConceptVector& b);

// Non-negative, sums to 1 within 1e-9.
class DissimilarityWeights {
 public:
  DissimilarityWeights();  // uniform over kDimensions
  explicit DissimilarityWeights(std::vector<double> w);  // validates

  // raw / sum(raw); uniform rescaling of `raw` gives the same weights.
  static DissimilarityWeights from_unnormalized(std::span<const double> raw);
  // Softmax of unconstrained logits, i.e. from_unnormalized(exp(logits)).
  static DissimilarityWeights from_logits(std::span<const double> logits);

  const std::vector<double>& values() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }

 private:
  std::vector<double> w_;
};

// Weighted sum of per-dimension dissimilarities. Throws kDimensionMismatch.
double dissimilarity(const ConceptVector& a, const ConceptVector& b,
                     const DissimilarityWeights& w);
double weighted_sum(std::span<const double> deltas,
                    const DissimilarityWeights& w);

struct LearningConfig {
  std::uint64_t seed = 42;
  double learning_rate = 0.1;
  std::size_t epochs = 2000;
  double theta = 0.35;  // superconcept link threshold
  double beta = 10.0;   // logistic sharpness
  double holdout_fraction = 0.25;
};

// Parses "key=value" lines; '#' comments allowed. Unknown keys are rejected.
LearningConfig parse_learning_config(const std::string& text);

struct TrainingPair {
  Concept a;
  Concept b;
  bool is_match = false;
};

// Precomputed dissimilarity profile of one labeled pair.
struct Example {
  std::vector<double> deltas;
  bool is_match = false;
};

// match probability = sigmoid(beta * (bias - sum_i w_i * delta_i)) with
// w = softmax(logits). Parameters are laid out as [logits..., bias].
class MatchModel {
 public:
  MatchModel(std::size_t dimensions, double beta)
      : dimensions_(dimensions), beta_(beta) {}

  std::size_t parameter_count() const { return dimensions_ + 1; }
  double beta() const { return beta_; }

  double probability(std::span<const double> params,
                     std::span<const double> deltas) const;
  // Mean binary cross-entropy.
  double loss(std::span<const double> params,
              std::span<const Example> data) const;
  std::vector<double> gradient(std::span<const double> params,
                               std::span<const Example> data) const;
  double accuracy(std::span<const double> params,
                  std::span<const Example> data) const;

 private:
  std::size_t dimensions_;
  double beta_;
};

struct LearnedWeights {
  DissimilarityWeights weights;
  double bias = 0.0;  // decision threshold on the weighted dissimilarity
  double beta = 10.0;
  double training_accuracy = 0.0;
  double holdout_accuracy = 0.0;
  std::size_t training_size = 0;
  std::size_t holdout_size = 0;
  std::vector<double> parameters;  // logits then bias
};

// Full-batch gradient descent. Throws kDegenerateTraining unless both
// classes are present.
LearnedWeights learn_weights(std::span<const TrainingPair> training,
                             const LearningConfig& config);
LearnedWeights learn_weights(std::span<const Example> examples,
                             const LearningConfig& config);

// Parses "conceptA,conceptB,{0|1}" lines against an ontology.
std::vector<TrainingPair> parse_training(const std::string& text,
                                         const Ontology& o);

struct RuleMatch {
  ConceptId concept_id;
  double confidence = 0.0;

  friend bool operator==(const RuleMatch&, const RuleMatch&) = default;
};

inline constexpr double kExactConfidence = 1.0;
inline constexpr double kEquivalentConfidence = 0.9;

// Exact label matches (1.0) plus their one-hop equivalents (0.9), sorted by
// confidence descending then concept id.
std::vector<RuleMatch> apply_rules(const taxonomy::Tag& t, const Ontology& o);

// Learned match between a tag and a concept: the tag is read as a concept
// with its label, a singleton context and the candidate's own features.
double tag_dissimilarity(const taxonomy::Tag& t, const Concept& c,
                         const DissimilarityWeights& w);

struct Superconcept {
  std::set<ConceptId> members;
  std::set<taxonomy::Tag> matched_tags;

  const ConceptId& key() const { return *members.begin(); }

  friend auto operator<=>(const Superconcept&, const Superconcept&) = default;
  friend bool operator==(const Superconcept&, const Superconcept&) = default;
};

// Links are equivalence edges, concepts sharing a rule or learned match for
// the same tag, and concept pairs with dissimilarity < theta. Returns the
// connected components over every concept touched by a link or a match,
// ordered by smallest member id.
std::vector<Superconcept> form_superconcepts(const taxonomy::FacetedTaxonomy& f,
                                             const Ontology& o,
                                             const DissimilarityWeights& w,
                                             double theta);

}  // namespace facetforge::matcher
