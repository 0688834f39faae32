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

#include "facetforge/matcher.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "facetforge/error.hpp"

namespace facetforge::matcher {

namespace {

namespace pred {
constexpr const char* kLabel = "label";
constexpr const char* kContext = "context";
constexpr const char* kEquivalentTo = "equivalentTo";
constexpr const char* kBroader = "broader";
constexpr const char* kFeaturePrefix = "feature_";
}  // namespace pred

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidConfig, "bad number for " + what + ": " + text);
  }
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Uniform in [0,1) from the raw 64-bit engine output, independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(i));
    std::swap(v[i - 1], v[std::min(j, i - 1)]);
  }
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// Disjoint-set forest keyed by concept id.
class UnionFind {
 public:
  void add(const ConceptId& id) { parent_.emplace(id, id); }

  const ConceptId& find(const ConceptId& id) {
    add(id);
    ConceptId root = id;
    while (parent_.at(root) != root) root = parent_.at(root);
    ConceptId cur = id;
    while (parent_.at(cur) != root) {
      ConceptId next = parent_.at(cur);
      parent_[cur] = root;
      cur = next;
    }
    return parent_.find(root)->first;
  }

  void unite(const ConceptId& a, const ConceptId& b) {
    ConceptId ra = find(a);
    ConceptId rb = find(b);
    if (ra == rb) return;
    // Smaller id becomes the root; keeps the forest deterministic.
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
  }

  const std::map<ConceptId, ConceptId>& nodes() const { return parent_; }

 private:
  std::map<ConceptId, ConceptId> parent_;
};

}  // namespace

// ---- Ontology ----

void Ontology::require(const ConceptId& id) const {
  if (!concepts_.count(id))
    throw Error(ErrorCode::kNotFound, "unknown concept " + id);
}

void Ontology::add_concept(Concept c) {
  if (c.id.empty()) throw Error(ErrorCode::kBadRequest, "concept id is empty");
  c.label = taxonomy::normalize_label(c.label);
  if (c.label.empty())
    throw Error(ErrorCode::kEmptyLabel, "concept " + c.id + " has a blank label");
  std::set<std::string> context;
  for (const auto& t : c.tag_context) {
    auto n = taxonomy::normalize_label(t);
    if (!n.empty()) context.insert(std::move(n));
  }
  c.tag_context = std::move(context);

  bool replacing_only = concepts_.size() == 1 && concepts_.count(c.id);
  if (!concepts_.empty() && !replacing_only &&
      c.numeric_features.size() != feature_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "concept " + c.id + " has " +
                    std::to_string(c.numeric_features.size()) +
                    " features, ontology uses " + std::to_string(feature_count()));
  }
  concepts_[c.id] = std::move(c);
}

void Ontology::add_equivalence(const ConceptId& a, const ConceptId& b) {
  require(a);
  require(b);
  if (a == b) return;
  equivalences_.insert(a < b ? std::pair{a, b} : std::pair{b, a});
}

void Ontology::add_broader(const ConceptId& narrower, const ConceptId& broader) {
  require(narrower);
  require(broader);
  // Reject if `narrower` is already reachable going up from `broader`.
  std::vector<ConceptId> stack{broader};
  std::set<ConceptId> seen;
  while (!stack.empty()) {
    ConceptId cur = stack.back();
    stack.pop_back();
    if (cur == narrower)
      throw Error(ErrorCode::kCycle, "broader edge " + narrower + " -> " + broader +
                                         " closes a cycle");
    if (!seen.insert(cur).second) continue;
    for (const auto& [n, b] : broader_) {
      if (n == cur) stack.push_back(b);
    }
  }
  broader_.emplace(narrower, broader);
}

const Concept* Ontology::find(const ConceptId& id) const {
  auto it = concepts_.find(id);
  return it == concepts_.end() ? nullptr : &it->second;
}

const Concept& Ontology::at(const ConceptId& id) const {
  require(id);
  return concepts_.at(id);
}

std::set<ConceptId> Ontology::equivalent_to(const ConceptId& id) const {
  std::set<ConceptId> out;
  for (const auto& [a, b] : equivalences_) {
    if (a == id) out.insert(b);
    if (b == id) out.insert(a);
  }
  return out;
}

std::size_t Ontology::feature_count() const {
  return concepts_.empty() ? 0 : concepts_.begin()->second.numeric_features.size();
}

void write_ontology(const Ontology& o, store::TripleStore& out) {
  using store::Term;
  using store::make_triple;
  for (const auto& [id, c] : o.concepts()) {
    out.insert(make_triple(id, pred::kLabel, Term::literal(c.label)));
    for (const auto& t : c.tag_context)
      out.insert(make_triple(id, pred::kContext, Term::literal(t)));
    for (std::size_t i = 0; i < c.numeric_features.size(); ++i) {
      out.insert(make_triple(id, pred::kFeaturePrefix + std::to_string(i),
                             Term::literal(format_double(c.numeric_features[i]))));
    }
  }
  for (const auto& [a, b] : o.equivalences())
    out.insert(make_triple(a, pred::kEquivalentTo, b));
  for (const auto& [n, b] : o.broader_edges())
    out.insert(make_triple(n, pred::kBroader, b));
}

Ontology read_ontology(const store::TripleStore& in) {
  Ontology o;
  for (const auto& id : in.subjects_with(pred::kLabel)) {
    Concept c;
    c.id = id;
    c.label = in.objects(id, pred::kLabel).front().text;
    for (const auto& t : in.objects(id, pred::kContext)) c.tag_context.insert(t.text);

    std::map<std::size_t, double> features;
    for (const auto& t : in) {
      if (t.subject.text != id) continue;
      const std::string& p = t.predicate.text;
      if (p.rfind(pred::kFeaturePrefix, 0) != 0) continue;
      auto index_text = p.substr(std::char_traits<char>::length(pred::kFeaturePrefix));
      std::size_t index = 0;
      auto [ptr, ec] = std::from_chars(index_text.data(),
                                       index_text.data() + index_text.size(), index);
      if (ec != std::errc() || ptr != index_text.data() + index_text.size())
        throw Error(ErrorCode::kBadRequest, "bad feature predicate " + p);
      features[index] = parse_double(t.object.text, p);
    }
    for (const auto& [i, v] : features) {
      if (i != c.numeric_features.size())
        throw Error(ErrorCode::kDimensionMismatch, "concept " + id + " skips feature " +
                                                       std::to_string(c.numeric_features.size()));
      c.numeric_features.push_back(v);
    }
    o.add_concept(std::move(c));
  }
  for (const auto& b : in.query({store::Pattern{store::Term::variable("a"),
                                                store::Term::iri(pred::kEquivalentTo),
                                                store::Term::variable("b")}})) {
    o.add_equivalence(b.at("a").text, b.at("b").text);
  }
  for (const auto& b : in.query({store::Pattern{store::Term::variable("n"),
                                                store::Term::iri(pred::kBroader),
                                                store::Term::variable("b")}})) {
    o.add_broader(b.at("n").text, b.at("b").text);
  }
  return o;
}

// ---- vectors and dissimilarity ----

ConceptVector vectorize(const Concept& c) {
  return ConceptVector{taxonomy::to_code_points(c.label), c.tag_context,
                       c.numeric_features};
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

std::vector<double> dimension_dissimilarities(const ConceptVector& a,
                                              const ConceptVector& b) {
  if (a.numeric.size() != b.numeric.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "numeric feature lengths differ: " + std::to_string(a.numeric.size()) +
                    " vs " + std::to_string(b.numeric.size()));
  }
  std::vector<double> d(kDimensions, 0.0);

  std::size_t longest = std::max(a.label.size(), b.label.size());
  if (longest > 0)
    d[0] = static_cast<double>(edit_distance(a.label, b.label)) /
           static_cast<double>(longest);

  std::size_t common = 0;
  for (const auto& t : a.tagset) common += b.tagset.count(t);
  std::size_t together = a.tagset.size() + b.tagset.size() - common;
  if (together > 0)
    d[1] = 1.0 - static_cast<double>(common) / static_cast<double>(together);

  double diff = 0, norm_a = 0, norm_b = 0;
  for (std::size_t i = 0; i < a.numeric.size(); ++i) {
    diff += (a.numeric[i] - b.numeric[i]) * (a.numeric[i] - b.numeric[i]);
    norm_a += a.numeric[i] * a.numeric[i];
    norm_b += b.numeric[i] * b.numeric[i];
  }
  double scale = std::sqrt(norm_a) + std::sqrt(norm_b);
  if (scale > 0) d[2] = std::min(1.0, std::sqrt(diff) / scale);
  return d;
}

DissimilarityWeights::DissimilarityWeights()
    : w_(kDimensions, 1.0 / static_cast<double>(kDimensions)) {}

DissimilarityWeights::DissimilarityWeights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw Error(ErrorCode::kBadWeights, "no weights");
  double sum = 0;
  for (double x : w_) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw Error(ErrorCode::kBadWeights, "weights must be finite and >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::kBadWeights, "weights sum to " + format_double(sum));
}

DissimilarityWeights DissimilarityWeights::from_unnormalized(
    std::span<const double> raw) {
  double sum = 0;
  for (double x : raw) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw Error(ErrorCode::kBadWeights, "raw weights must be finite and >= 0");
    sum += x;
  }
  if (!(sum > 0)) throw Error(ErrorCode::kBadWeights, "raw weights sum to zero");
  std::vector<double> w;
  w.reserve(raw.size());
  for (double x : raw) w.push_back(x / sum);
  return DissimilarityWeights(std::move(w));
}

DissimilarityWeights DissimilarityWeights::from_logits(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorCode::kBadWeights, "no logits");
  double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> raw;
  raw.reserve(logits.size());
  for (double z : logits) raw.push_back(std::exp(z - top));
  return from_unnormalized(raw);
}

double weighted_sum(std::span<const double> deltas, const DissimilarityWeights& w) {
  if (deltas.size() != w.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(deltas.size()) + " dissimilarities for " +
                    std::to_string(w.size()) + " weights");
  }
  double s = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) s += w[i] * deltas[i];
  return s;
}

double dissimilarity(const ConceptVector& a, const ConceptVector& b,
                     const DissimilarityWeights& w) {
  if (w.size() != kDimensions) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(kDimensions) + " weights, got " +
                    std::to_string(w.size()));
  }
  return weighted_sum(dimension_dissimilarities(a, b), w);
}

// ---- learning ----

LearningConfig parse_learning_config(const std::string& text) {
  LearningConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::kInvalidConfig, "expected key=value: " + t);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "seed") {
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), cfg.seed);
      if (ec != std::errc() || ptr != value.data() + value.size())
        throw Error(ErrorCode::kInvalidConfig, "bad seed: " + value);
    } else if (key == "epochs") {
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), cfg.epochs);
      if (ec != std::errc() || ptr != value.data() + value.size())
        throw Error(ErrorCode::kInvalidConfig, "bad epochs: " + value);
    } else if (key == "learning_rate") {
      cfg.learning_rate = parse_double(value, key);
    } else if (key == "theta") {
      cfg.theta = parse_double(value, key);
    } else if (key == "beta") {
      cfg.beta = parse_double(value, key);
    } else if (key == "holdout_fraction") {
      cfg.holdout_fraction = parse_double(value, key);
    } else {
      throw Error(ErrorCode::kInvalidConfig, "unknown key " + key);
    }
  }
  if (!(cfg.theta > 0 && cfg.theta < 1))
    throw Error(ErrorCode::kInvalidConfig, "theta must lie in (0,1)");
  if (!(cfg.beta > 0)) throw Error(ErrorCode::kInvalidConfig, "beta must be > 0");
  if (!(cfg.learning_rate > 0))
    throw Error(ErrorCode::kInvalidConfig, "learning_rate must be > 0");
  if (!(cfg.holdout_fraction >= 0 && cfg.holdout_fraction < 1))
    throw Error(ErrorCode::kInvalidConfig, "holdout_fraction must lie in [0,1)");
  return cfg;
}

double MatchModel::probability(std::span<const double> params,
                               std::span<const double> deltas) const {
  auto w = DissimilarityWeights::from_logits(params.first(dimensions_));
  double bias = params[dimensions_];
  return sigmoid(beta_ * (bias - weighted_sum(deltas, w)));
}

double MatchModel::loss(std::span<const double> params,
                        std::span<const Example> data) const {
  auto w = DissimilarityWeights::from_logits(params.first(dimensions_));
  double bias = params[dimensions_];
  double total = 0;
  for (const auto& ex : data) {
    double a = beta_ * (bias - weighted_sum(ex.deltas, w));
    // -log sigmoid(a) = log(1 + e^-a), written stably.
    double z = ex.is_match ? -a : a;
    total += z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  }
  return total / static_cast<double>(data.size());
}

std::vector<double> MatchModel::gradient(std::span<const double> params,
                                         std::span<const Example> data) const {
  auto w = DissimilarityWeights::from_logits(params.first(dimensions_));
  double bias = params[dimensions_];
  std::vector<double> g(parameter_count(), 0.0);
  for (const auto& ex : data) {
    double s = weighted_sum(ex.deltas, w);
    double err = sigmoid(beta_ * (bias - s)) - (ex.is_match ? 1.0 : 0.0);
    // d a / d logit_j = -beta * w_j * (delta_j - s) through the softmax.
    for (std::size_t j = 0; j < dimensions_; ++j)
      g[j] += err * -beta_ * w[j] * (ex.deltas[j] - s);
    g[dimensions_] += err * beta_;
  }
  for (double& x : g) x /= static_cast<double>(data.size());
  return g;
}

double MatchModel::accuracy(std::span<const double> params,
                            std::span<const Example> data) const {
  if (data.empty()) return 0.0;
  std::size_t right = 0;
  for (const auto& ex : data) {
    bool predicted = probability(params, ex.deltas) >= 0.5;
    if (predicted == ex.is_match) ++right;
  }
  return static_cast<double>(right) / static_cast<double>(data.size());
}

LearnedWeights learn_weights(std::span<const Example> examples,
                             const LearningConfig& config) {
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].deltas.size() != kDimensions)
      throw Error(ErrorCode::kDimensionMismatch, "example has wrong dimensionality");
    (examples[i].is_match ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    throw Error(ErrorCode::kDegenerateTraining,
                "training needs at least one match and one non-match");
  }

  // Stratified split so both partitions keep the class balance.
  std::mt19937_64 rng(config.seed);
  shuffle(positives, rng);
  shuffle(negatives, rng);
  std::vector<Example> train, holdout;
  for (const auto* cls : {&positives, &negatives}) {
    auto n_hold = static_cast<std::size_t>(
        std::floor(config.holdout_fraction * static_cast<double>(cls->size())));
    if (n_hold == cls->size()) n_hold = cls->size() - 1;
    for (std::size_t k = 0; k < cls->size(); ++k) {
      (k < n_hold ? holdout : train).push_back(examples[(*cls)[k]]);
    }
  }

  MatchModel model(kDimensions, config.beta);
  std::vector<double> params(model.parameter_count(), 0.0);
  params[kDimensions] = 0.5;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    auto g = model.gradient(params, train);
    for (std::size_t i = 0; i < params.size(); ++i)
      params[i] -= config.learning_rate * g[i];
  }

  LearnedWeights out;
  out.weights = DissimilarityWeights::from_logits(std::span(params).first(kDimensions));
  out.bias = params[kDimensions];
  out.beta = config.beta;
  out.training_accuracy = model.accuracy(params, train);
  out.holdout_accuracy = model.accuracy(params, holdout);
  out.training_size = train.size();
  out.holdout_size = holdout.size();
  out.parameters = params;
  return out;
}

LearnedWeights learn_weights(std::span<const TrainingPair> training,
                             const LearningConfig& config) {
  std::vector<Example> examples;
  examples.reserve(training.size());
  for (const auto& p : training) {
    examples.push_back(
        {dimension_dissimilarities(vectorize(p.a), vectorize(p.b)), p.is_match});
  }
  return learn_weights(std::span<const Example>(examples), config);
}

std::vector<TrainingPair> parse_training(const std::string& text, const Ontology& o) {
  std::vector<TrainingPair> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 3) throw ParseError(line_no, "expected conceptA,conceptB,{0|1}");
    if (fields[2] != "0" && fields[2] != "1")
      throw ParseError(line_no, "label must be 0 or 1");
    const Concept* a = o.find(fields[0]);
    const Concept* b = o.find(fields[1]);
    if (!a) throw ParseError(line_no, "unknown concept " + fields[0]);
    if (!b) throw ParseError(line_no, "unknown concept " + fields[1]);
    out.push_back({*a, *b, fields[2] == "1"});
  }
  return out;
}

// ---- rules and superconcepts ----

std::vector<RuleMatch> apply_rules(const taxonomy::Tag& t, const Ontology& o) {
  std::map<ConceptId, double> best;
  for (const auto& [id, c] : o.concepts()) {
    if (c.label == t.label) best[id] = kExactConfidence;
  }
  std::vector<ConceptId> exact;
  for (const auto& [id, conf] : best) exact.push_back(id);
  for (const auto& id : exact) {
    for (const auto& other : o.equivalent_to(id)) best.emplace(other, kEquivalentConfidence);
  }
  std::vector<RuleMatch> out;
  for (const auto& [id, conf] : best) out.push_back({id, conf});
  std::stable_sort(out.begin(), out.end(), [](const RuleMatch& a, const RuleMatch& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.concept_id < b.concept_id;
  });
  return out;
}

double tag_dissimilarity(const taxonomy::Tag& t, const Concept& c,
                         const DissimilarityWeights& w) {
  Concept probe{"", t.label, {t.label}, c.numeric_features};
  return dissimilarity(vectorize(probe), vectorize(c), w);
}

std::vector<Superconcept> form_superconcepts(const taxonomy::FacetedTaxonomy& f,
                                             const Ontology& o,
                                             const DissimilarityWeights& w,
                                             double theta) {
  if (!(theta > 0 && theta < 1))
    throw Error(ErrorCode::kInvalidConfig, "theta must lie in (0,1)");
  if (w.size() != kDimensions)
    throw Error(ErrorCode::kDimensionMismatch, "weights do not match dimensions");

  UnionFind uf;
  for (const auto& [a, b] : o.equivalences()) uf.unite(a, b);

  std::map<taxonomy::Tag, std::set<ConceptId>> tag_hits;
  for (const auto& tag : f.tags()) {
    std::set<ConceptId> hits;
    for (const auto& m : apply_rules(tag, o)) hits.insert(m.concept_id);
    for (const auto& [id, c] : o.concepts()) {
      if (tag_dissimilarity(tag, c, w) < theta) hits.insert(id);
    }
    for (const auto& id : hits) uf.unite(*hits.begin(), id);
    if (!hits.empty()) tag_hits.emplace(tag, std::move(hits));
  }

  std::vector<std::pair<ConceptId, ConceptVector>> vectors;
  for (const auto& [id, c] : o.concepts()) vectors.emplace_back(id, vectorize(c));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      if (dissimilarity(vectors[i].second, vectors[j].second, w) < theta)
        uf.unite(vectors[i].first, vectors[j].first);
    }
  }

  std::map<ConceptId, Superconcept> classes;
  std::vector<ConceptId> ids;
  for (const auto& [id, parent] : uf.nodes()) ids.push_back(id);
  for (const auto& id : ids) classes[uf.find(id)].members.insert(id);
  for (const auto& [tag, hits] : tag_hits) {
    classes[uf.find(*hits.begin())].matched_tags.insert(tag);
  }

  std::vector<Superconcept> out;
  for (auto& [root, s] : classes) out.push_back(std::move(s));
  return out;
}

}  // namespace facetforge::matcher
