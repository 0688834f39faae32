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

#include "facetforge/gateway.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include <sys/socket.h>

#include <httplib.h>

#include "facetforge/evaluation.hpp"
#include "facetforge/jointmeaning.hpp"
#include "facetforge/matcher.hpp"
#include "facetforge/navigation.hpp"
#include "facetforge/taxonomy.hpp"

namespace facetforge::gateway {

namespace {

using store::Term;
using store::TripleStore;
using store::make_triple;

constexpr const char* kMatcherNode = "matcher";
constexpr const char* kWeightPrefix = "weight_";
constexpr const char* kBias = "bias";
constexpr const char* kTheta = "theta";
constexpr const char* kHoldout = "holdoutAccuracy";
constexpr const char* kConstraint = "constraint";
constexpr const char* kZoomed = "zoomed";
constexpr const char* kTask = "task";
constexpr const char* kAnalysis = "analysis";
constexpr const char* kAttribute = "attribute";

// ---- json field access ----

const json& field(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key))
    throw Error(ErrorCode::kBadRequest, std::string("missing field '") + key + "'");
  return body.at(key);
}

std::string text_field(const json& body, const char* key) {
  const json& v = field(body, key);
  if (!v.is_string())
    throw Error(ErrorCode::kBadRequest, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::string text_or(const json& body, const char* key, const std::string& fallback) {
  if (!body.is_object() || !body.contains(key) || body.at(key).is_null()) return fallback;
  return text_field(body, key);
}

std::vector<std::string> string_list(const json& body, const char* key) {
  std::vector<std::string> out;
  if (!body.is_object() || !body.contains(key)) return out;
  const json& v = body.at(key);
  if (!v.is_array())
    throw Error(ErrorCode::kBadRequest, std::string("field '") + key + "' must be a list");
  for (const auto& e : v) {
    if (!e.is_string())
      throw Error(ErrorCode::kBadRequest, std::string("field '") + key + "' holds a non-string");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> pair_list(const json& body, const char* key) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!body.is_object() || !body.contains(key)) return out;
  for (const auto& e : body.at(key)) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw Error(ErrorCode::kBadRequest, std::string("field '") + key + "' needs [a, b] pairs");
    out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return out;
}

double number(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  throw Error(ErrorCode::kBadRequest, what + " must be a number");
}

// ---- store helpers ----

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::kStorageUnavailable, "stored number '" + text + "' is corrupt");
  return v;
}

void erase_subject(TripleStore& s, const std::string& subject,
                   const std::set<std::string>& predicates) {
  std::vector<store::Triple> doomed;
  for (const auto& t : s) {
    if (t.subject.text == subject && predicates.count(t.predicate.text)) doomed.push_back(t);
  }
  for (const auto& t : doomed) s.erase(t);
}

std::string only_literal(const TripleStore& s, const std::string& subject,
                         const std::string& predicate) {
  auto objs = s.objects(subject, predicate);
  return objs.empty() ? std::string() : objs.front().text;
}

// Portlet and ontology predicates owned by one subject.
const std::set<std::string>& portlet_predicates() {
  namespace p = taxonomy::predicates;
  static const std::set<std::string> preds{p::kKind,     p::kHasTag,   p::kHasFacet,
                                           p::kHasChild, p::kOwnedBy,  p::kPayload};
  return preds;
}

void replace_catalog(TripleStore& s, const taxonomy::PortletCatalog& before,
                     const taxonomy::PortletCatalog& after) {
  for (const auto& [id, p] : before.all()) erase_subject(s, id, portlet_predicates());
  taxonomy::write_catalog(after, s);
}

void replace_community(TripleStore& s, const jointmeaning::Community& c) {
  static const std::set<std::string> preds{"kind", "interest", "knows"};
  for (const auto& [id, u] : c.users()) erase_subject(s, id, preds);
  jointmeaning::write_community(c, s);
}

void replace_ontology(TripleStore& s, const matcher::Ontology& before,
                      const matcher::Ontology& after) {
  for (const auto& [id, c] : before.concepts()) {
    std::vector<store::Triple> doomed;
    for (const auto& t : s) {
      if (t.subject.text != id) continue;
      const auto& p = t.predicate.text;
      if (p == "label" || p == "context" || p.rfind("feature_", 0) == 0) doomed.push_back(t);
    }
    for (const auto& t : doomed) s.erase(t);
  }
  matcher::write_ontology(after, s);
}

// ---- matcher settings ----

struct MatchSettings {
  matcher::DissimilarityWeights weights;
  double bias = 0.0;
  double theta = matcher::LearningConfig{}.theta;
  bool learned = false;
  double holdout_accuracy = 0.0;
};

MatchSettings read_settings(const TripleStore& s) {
  MatchSettings m;
  std::map<std::size_t, double> w;
  for (const auto& t : s) {
    if (t.subject.text != kMatcherNode) continue;
    const auto& p = t.predicate.text;
    if (p.rfind(kWeightPrefix, 0) == 0) {
      w[std::stoul(p.substr(std::char_traits<char>::length(kWeightPrefix)))] =
          parse_double(t.object.text);
    } else if (p == kBias) {
      m.bias = parse_double(t.object.text);
    } else if (p == kTheta) {
      m.theta = parse_double(t.object.text);
    } else if (p == kHoldout) {
      m.holdout_accuracy = parse_double(t.object.text);
    }
  }
  if (!w.empty()) {
    std::vector<double> values;
    for (const auto& [i, v] : w) values.push_back(v);
    m.weights = matcher::DissimilarityWeights::from_unnormalized(values);
    m.learned = true;
  }
  return m;
}

void write_settings(TripleStore& s, const matcher::LearnedWeights& lw, double theta) {
  std::vector<store::Triple> doomed;
  for (const auto& t : s)
    if (t.subject.text == kMatcherNode) doomed.push_back(t);
  for (const auto& t : doomed) s.erase(t);
  for (std::size_t i = 0; i < lw.weights.size(); ++i) {
    s.insert(make_triple(kMatcherNode, kWeightPrefix + std::to_string(i),
                         Term::literal(format_double(lw.weights[i]))));
  }
  s.insert(make_triple(kMatcherNode, kBias, Term::literal(format_double(lw.bias))));
  s.insert(make_triple(kMatcherNode, kTheta, Term::literal(format_double(theta))));
  s.insert(make_triple(kMatcherNode, kHoldout,
                       Term::literal(format_double(lw.holdout_accuracy))));
}

// ---- view state ----

std::string view_node(const std::string& user) { return "viewstate:" + user; }

navigation::View read_view(const TripleStore& s, const std::string& user) {
  auto catalog = taxonomy::read_catalog(s);
  std::vector<taxonomy::Portlet> all;
  for (const auto& [id, p] : catalog.all()) all.push_back(p);
  auto v = navigation::View::over(all);
  auto node = view_node(user);
  for (const auto& t : s.objects(node, kConstraint)) v.constraints.insert(taxonomy::parse_facet(t.text));
  std::map<std::size_t, std::string> zoomed;
  for (const auto& t : s.objects(node, kZoomed)) {
    auto colon = t.text.find(':');
    zoomed[std::stoul(t.text.substr(0, colon))] = t.text.substr(colon + 1);
  }
  for (const auto& [i, f] : zoomed) v.zoom_stack.push_back(f);
  return v;
}

void write_view(TripleStore& s, const std::string& user, const navigation::View& v) {
  auto node = view_node(user);
  erase_subject(s, node, {kConstraint, kZoomed});
  for (const auto& c : v.constraints)
    s.insert(make_triple(node, kConstraint, Term::literal(taxonomy::format_facet(c))));
  for (std::size_t i = 0; i < v.zoom_stack.size(); ++i)
    s.insert(make_triple(node, kZoomed, Term::literal(std::to_string(i) + ":" + v.zoom_stack[i])));
}

json view_json(const std::string& user, const navigation::View& v) {
  json out;
  out["user"] = user;
  out["constraints"] = json::array();
  for (const auto& c : v.constraints) out["constraints"].push_back(taxonomy::format_facet(c));
  out["zoom"] = v.zoom_stack;
  out["members"] = navigation::members(v);
  out["groups"] = json::object();
  for (const auto& [value, ids] : navigation::zoom_groups(v)) out["groups"][value] = ids;
  std::set<std::string> names;
  for (const auto& id : navigation::members(v))
    for (const auto& f : v.universe.at(id)) names.insert(f.name);
  out["facets"] = json::object();
  for (const auto& n : names) {
    json counts = json::object();
    for (const auto& [value, count] : navigation::member_histogram(v, n)) counts[value] = count;
    out["facets"][n] = counts;
  }
  return out;
}

// ---- usability matrices ----

std::string matrix_node(const std::string& id) { return "matrix:" + id; }

void write_matrix(TripleStore& s, const std::string& id, const evaluation::EvaluationMatrix& m) {
  auto node = matrix_node(id);
  s.insert(make_triple(node, kTask, Term::literal(m.task)));
  if (!m.analysis.empty()) s.insert(make_triple(node, kAnalysis, Term::literal(m.analysis)));
  for (std::size_t i = 0; i < m.attributes.size(); ++i) {
    const auto& a = m.attributes[i];
    s.insert(make_triple(node, kAttribute,
                         Term::literal(std::to_string(i) + ":" + a.name + "," +
                                       format_double(a.score) + "," + format_double(a.weight))));
  }
}

evaluation::EvaluationMatrix read_matrix(const TripleStore& s, const std::string& id) {
  auto node = matrix_node(id);
  auto task = s.objects(node, kTask);
  if (task.empty()) throw Error(ErrorCode::kNotFound, "unknown matrix " + id);
  std::map<std::size_t, std::string> rows;
  for (const auto& t : s.objects(node, kAttribute)) {
    auto colon = t.text.find(':');
    rows[std::stoul(t.text.substr(0, colon))] = t.text.substr(colon + 1);
  }
  std::string text = task.front().text + "\n";
  for (const auto& [i, row] : rows) text += row + "\n";
  auto m = evaluation::parse_matrix(text);
  m.analysis = only_literal(s, node, kAnalysis);
  return m;
}

// ---- module state -> json ----

json user_json(const jointmeaning::User& u) {
  return {{"id", u.id},
          {"interests", u.profile.interests},
          {"friends", u.profile.friends}};
}

json portlet_json(const taxonomy::Portlet& p) {
  json facets = json::array();
  for (const auto& f : p.facets) facets.push_back(taxonomy::format_facet(f));
  json tags = json::array();
  for (const auto& t : p.folksonomy) tags.push_back(t.label);
  return {{"id", p.id},
          {"kind", std::string(taxonomy::to_string(p.kind))},
          {"owner", p.owner},
          {"payload", p.payload_ref},
          {"facets", facets},
          {"children", p.children},
          {"tags", tags}};
}

json superparsedjson(const matcher::Superconcept& s, const matcher::Ontology& o) {
  std::set<std::string> labels;
  for (const auto& id : s.members) labels.insert(o.at(id).label);
  std::set<std::string> tags;
  for (const auto& t : s.matched_tags) tags.insert(t.label);
  return {{"key", s.key()}, {"members", s.members}, {"labels", labels}, {"tags", tags}};
}

json weights_json(const matcher::LearnedWeights& lw, double theta) {
  return {{"weights", lw.weights.values()},
          {"bias", lw.bias},
          {"beta", lw.beta},
          {"theta", theta},
          {"training_accuracy", lw.training_accuracy},
          {"holdout_accuracy", lw.holdout_accuracy},
          {"training_size", lw.training_size},
          {"holdout_size", lw.holdout_size}};
}

json score_json(const evaluation::EvaluationMatrix& m, const evaluation::TaskScore& s) {
  return {{"task", m.task},
          {"average", s.average},
          {"weighted", s.weighted},
          {"per_attribute", s.weighted_per_attribute},
          {"summary", evaluation::format_score(s)}};
}

std::vector<matcher::Superconcept> current_superconcepts(const TripleStore& s,
                                                         const matcher::Ontology& o,
                                                         std::optional<double> theta) {
  auto settings = read_settings(s);
  auto catalog = taxonomy::read_catalog(s);
  return matcher::form_superconcepts(catalog.taxonomy(), o, settings.weights,
                                     theta.value_or(settings.theta));
}

evaluation::EvaluationMatrix matrix_from_body(const TripleStore& s, const json& body) {
  if (body.contains("csv")) return evaluation::parse_matrix(text_field(body, "csv"));
  if (body.contains("matrix")) return read_matrix(s, text_field(body, "matrix"));
  evaluation::EvaluationMatrix m;
  m.task = text_or(body, "task", "");
  m.analysis = text_or(body, "analysis", "");
  for (const auto& a : field(body, "attributes")) {
    m.attributes.push_back({text_field(a, "name"), number(field(a, "score"), "score"),
                            number(field(a, "weight"), "weight")});
  }
  return m;
}

}  // namespace

// ---- errors ----

json error_body(const Error& e) {
  return {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownPortlet:
    case ErrorCode::kUnknownNode:
      return 404;
    case ErrorCode::kCycle:
    case ErrorCode::kAlreadyZoomed:
    case ErrorCode::kEmptyZoomStack:
    case ErrorCode::kDuplicatePortlet:
      return 409;
    case ErrorCode::kUnmatchedTag:
    case ErrorCode::kUnreachable:
    case ErrorCode::kDegenerateTraining:
      return 422;
    case ErrorCode::kIoFailure:
      return 500;
    case ErrorCode::kStorageUnavailable:
    case ErrorCode::kPortInUse:
      return 503;
    default:
      return 400;
  }
}

// ---- Service ----

Service::Service(std::filesystem::path data_path) : path_(std::move(data_path)) {
  std::error_code ec;
  if (std::filesystem::exists(*path_, ec)) {
    try {
      store_ = store::restore(*path_);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw Error(ErrorCode::kStorageUnavailable, e.what());
    }
    return;
  }
  auto dir = path_->parent_path();
  if (dir.empty()) dir = ".";
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kStorageUnavailable,
                "data directory " + dir.string() + " does not exist");
  }
}

template <class F>
json Service::mutate(F&& apply) {
  std::unique_lock lock(mutex_);
  TripleStore next = store_;
  json out = apply(next);
  if (path_) {
    try {
      store::persist(next, *path_);
    } catch (const Error& e) {
      throw Error(ErrorCode::kStorageUnavailable, e.what());
    }
  }
  store_ = std::move(next);
  return out;
}

store::TripleStore Service::snapshot() const {
  std::shared_lock lock(mutex_);
  return store_;
}

json Service::add_user(const json& body) {
  jointmeaning::User u;
  u.id = text_field(body, "id");
  for (const auto& i : string_list(body, "interests")) u.profile.interests.insert(i);
  for (const auto& f : string_list(body, "friends")) u.profile.friends.insert(f);
  return mutate([&](TripleStore& s) {
    auto c = jointmeaning::read_community(s);
    c.put(u);
    replace_community(s, c);
    return user_json(c.at(u.id));
  });
}

json Service::users() const {
  std::shared_lock lock(mutex_);
  json out = json::array();
  auto community = jointmeaning::read_community(store_);
  for (const auto& [id, u] : community.users()) out.push_back(user_json(u));
  return out;
}

json Service::add_portlet(const json& body) {
  taxonomy::Portlet p;
  p.id = text_field(body, "id");
  auto kind = taxonomy::parse_portlet_kind(text_or(body, "kind", "text"));
  if (!kind) throw Error(ErrorCode::kBadRequest, "unknown portlet kind");
  p.kind = *kind;
  p.owner = text_field(body, "owner");
  p.payload_ref = text_or(body, "payload", "");
  for (const auto& f : string_list(body, "facets")) p.facets.insert(taxonomy::parse_facet(f));
  p.children = string_list(body, "children");
  for (const auto& t : string_list(body, "tags")) p.folksonomy.insert(taxonomy::create_tag(t, p.owner));
  return mutate([&](TripleStore& s) {
    auto before = taxonomy::read_catalog(s);
    auto after = before;
    after.put(p);
    replace_catalog(s, before, after);
    return portlet_json(after.at(p.id));
  });
}

json Service::portlets() const {
  std::shared_lock lock(mutex_);
  json out = json::array();
  auto catalog = taxonomy::read_catalog(store_);
  for (const auto& [id, p] : catalog.all()) out.push_back(portlet_json(p));
  return out;
}

json Service::add_tag(const json& body) {
  auto portlet = text_field(body, "portlet");
  auto label = text_field(body, "label");
  return mutate([&](TripleStore& s) {
    auto before = taxonomy::read_catalog(s);
    const auto* p = before.find(portlet);
    if (!p) throw Error(ErrorCode::kNotFound, "unknown portlet " + portlet);
    auto tag = taxonomy::create_tag(label, p->owner);
    auto after = before;
    after.add_tag(portlet, tag);
    replace_catalog(s, before, after);
    return json{{"portlet", portlet}, {"tag", tag.label}, {"owner", tag.owner}};
  });
}

json Service::load_ontology(const json& body) {
  matcher::Ontology incoming;
  if (body.contains("ntriples")) {
    std::istringstream in(text_field(body, "ntriples"));
    incoming = matcher::read_ontology(store::read_ntriples(in));
  }
  return mutate([&](TripleStore& s) {
    auto before = matcher::read_ontology(s);
    auto after = before;
    for (const auto& [id, c] : incoming.concepts()) after.add_concept(c);
    if (body.contains("concepts")) {
      for (const auto& c : field(body, "concepts")) {
        matcher::Concept parsed;
        parsed.id = text_field(c, "id");
        parsed.label = text_field(c, "label");
        for (const auto& t : string_list(c, "context")) parsed.tag_context.insert(t);
        if (c.contains("features")) {
          for (const auto& v : c.at("features")) parsed.numeric_features.push_back(number(v, "feature"));
        }
        after.add_concept(std::move(parsed));
      }
    }
    for (const auto& [a, b] : incoming.equivalences()) after.add_equivalence(a, b);
    for (const auto& [n, b] : incoming.broader_edges()) after.add_broader(n, b);
    for (const auto& [a, b] : pair_list(body, "equivalences")) after.add_equivalence(a, b);
    for (const auto& [n, b] : pair_list(body, "broader")) after.add_broader(n, b);
    replace_ontology(s, before, after);
    return json{{"concepts", after.size()},
                {"equivalences", after.equivalences().size()},
                {"broader", after.broader_edges().size()}};
  });
}

json Service::load_graph(const json& body) {
  return mutate([&](TripleStore& s) {
    auto g = navigation::read_graph(s);
    if (body.contains("nodes")) {
      for (const auto& n : field(body, "nodes")) {
        taxonomy::FacetSet facets;
        for (const auto& f : string_list(n, "facets")) facets.insert(taxonomy::parse_facet(f));
        g.add_node(text_field(n, "id"), std::move(facets));
      }
    }
    for (const auto& [a, b] : pair_list(body, "links")) g.add_link(a, b);
    navigation::write_graph(g, s);
    return json{{"nodes", g.nodes().size()}, {"links", g.links().size()}};
  });
}

json Service::learn(const json& body) {
  matcher::LearningConfig config;
  if (body.contains("config")) {
    const json& c = body.at("config");
    if (c.is_string()) {
      config = matcher::parse_learning_config(c.get<std::string>());
    } else if (c.is_object()) {
      std::string text;
      for (const auto& [k, v] : c.items()) text += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
      config = matcher::parse_learning_config(text);
    } else {
      throw Error(ErrorCode::kBadRequest, "config must be text or an object");
    }
  }
  auto training = text_field(body, "training");
  return mutate([&](TripleStore& s) {
    auto o = matcher::read_ontology(s);
    auto pairs = matcher::parse_training(training, o);
    auto lw = matcher::learn_weights(pairs, config);
    write_settings(s, lw, config.theta);
    return weights_json(lw, config.theta);
  });
}

json Service::superconcepts(const json& body) const {
  std::optional<double> theta;
  if (body.is_object() && body.contains("theta") && !body.at("theta").is_null())
    theta = number(body.at("theta"), "theta");
  std::shared_lock lock(mutex_);
  auto o = matcher::read_ontology(store_);
  json list = json::array();
  for (const auto& sc : current_superconcepts(store_, o, theta)) list.push_back(superparsedjson(sc, o));
  auto settings = read_settings(store_);
  return {{"theta", theta.value_or(settings.theta)},
          {"weights", settings.weights.values()},
          {"superconcepts", list}};
}

json Service::view(const std::string& viewer, const std::string& portlet_id,
                   const std::optional<std::string>& speaker_id) const {
  std::shared_lock lock(mutex_);
  auto catalog = taxonomy::read_catalog(store_);
  const auto* portlet = catalog.find(portlet_id);
  if (!portlet) throw Error(ErrorCode::kNotFound, "unknown portlet " + portlet_id);
  auto community = jointmeaning::read_community(store_);

  std::string sid = speaker_id.value_or(portlet->owner);
  jointmeaning::User speaker{sid, {}};
  if (const auto* u = community.find(sid)) {
    speaker = *u;
  } else if (speaker_id) {
    throw Error(ErrorCode::kNotFound, "unknown user " + sid);
  }
  if (viewer != sid && !community.find(viewer))
    throw Error(ErrorCode::kNotFound, "unknown user " + viewer);

  auto o = matcher::read_ontology(store_);
  auto supers = current_superconcepts(store_, o, std::nullopt);
  auto audience = community.audience_of(sid);
  auto r = jointmeaning::resolve_joint_interface(speaker, audience, *portlet, supers, o);
  const auto& v = r.views.at(viewer);

  json label = nullptr;
  if (!portlet->folksonomy.empty()) {
    const auto& first = *portlet->folksonomy.begin();
    for (const auto& sc : supers) {
      if (sc.matched_tags.count(first)) {
        label = v.label_assignment.at(sc.key());
        break;
      }
    }
  }
  json facets = json::array();
  for (const auto& f : v.interface.facet_selections) facets.push_back(taxonomy::format_facet(f));
  return {{"viewer", viewer},
          {"speaker", sid},
          {"portlet", portlet_id},
          {"label", label},
          {"labels", v.label_assignment},
          {"interface", {{"id", v.interface.id}, {"facets", facets}, {"slots", v.interface.layout_slots}}},
          {"rounds", r.rounds},
          {"round_bound", r.round_bound}};
}

json Service::view_state(const std::string& user) const {
  std::shared_lock lock(mutex_);
  return view_json(user, read_view(store_, user));
}

json Service::filter(const std::string& user, const json& body) {
  auto facet = text_field(body, "facet");
  auto value = text_field(body, "value");
  bool remove = body.contains("remove") && body.at("remove").is_boolean() && body.at("remove").get<bool>();
  return mutate([&](TripleStore& s) {
    auto v = read_view(s, user);
    v = remove ? navigation::unfilter(v, facet, value) : navigation::filter(v, facet, value);
    write_view(s, user, v);
    return view_json(user, v);
  });
}

json Service::zoom(const std::string& user, const json& body) {
  auto action = text_or(body, "action", "zoom");
  if (action != "zoom" && action != "unzoom")
    throw Error(ErrorCode::kBadRequest, "action must be zoom or unzoom");
  std::string facet = action == "zoom" ? text_field(body, "facet") : "";
  return mutate([&](TripleStore& s) {
    auto v = read_view(s, user);
    v = action == "zoom" ? navigation::zoom(v, facet) : navigation::unzoom(v);
    write_view(s, user, v);
    return view_json(user, v);
  });
}

json Service::navigate(const std::string& from, const std::vector<std::string>& goals,
                       const std::optional<std::string>& user) const {
  std::shared_lock lock(mutex_);
  auto g = navigation::read_graph(store_);
  std::function<bool(const navigation::NodeId&)> allowed;
  if (user) {
    auto community = jointmeaning::read_community(store_);
    allowed = navigation::interest_filter(g, community.at(*user).profile.interests);
  }
  std::set<navigation::NodeId> goal_set(goals.begin(), goals.end());
  auto path = navigation::plan_won(g, from, goal_set, allowed);
  json out{{"from", from}, {"goals", goal_set}, {"path", path}, {"length", path.size()}};
  if (user) out["user"] = *user;
  return out;
}

json Service::eval(const json& body) const {
  std::shared_lock lock(mutex_);
  auto m = matrix_from_body(store_, body);
  return score_json(m, evaluation::score_task(m));
}

json Service::ingest_ntriples(const std::string& text) {
  std::istringstream in(text);
  auto incoming = store::read_ntriples(in);
  return mutate([&](TripleStore& s) {
    std::size_t added = 0;
    for (const auto& t : incoming) added += s.insert(t) ? 1 : 0;
    // Refuse input that leaves the workspace unreadable.
    taxonomy::read_catalog(s);
    matcher::read_ontology(s);
    navigation::read_graph(s);
    return json{{"added", added}, {"size", s.size()}};
  });
}

json Service::seed_demo() {
  using taxonomy::Portlet;
  using taxonomy::PortletKind;
  jointmeaning::Community users;
  users.put({"u0", {{"cars", "italy"}, {"a1", "b1"}}});
  users.put({"a1", {{"sports"}, {"u0"}}});
  users.put({"b1", {{"luxury"}, {"u0"}}});

  matcher::Ontology o;
  o.add_concept({"ferrari", "Ferrari", {"italy", "racing"}, {0.95, 0.9}});
  o.add_concept({"sportcar", "Sport car", {"sports", "speed"}, {0.9, 0.6}});
  o.add_concept({"expensivecar", "Expensive car", {"luxury", "money"}, {0.6, 0.95}});
  o.add_concept({"fiat", "Fiat", {"family", "city"}, {0.3, 0.2}});
  o.add_concept({"bicycle", "Bicycle", {"outdoor"}, {0.1, 0.05}});
  o.add_equivalence("ferrari", "sportcar");
  o.add_equivalence("ferrari", "expensivecar");
  o.add_equivalence("sportcar", "expensivecar");

  auto portlet = [](std::string id, PortletKind kind, std::string owner, std::string payload,
                    taxonomy::FacetSet facets, std::vector<std::string> tags,
                    std::vector<std::string> children = {}) {
    Portlet p;
    p.id = std::move(id);
    p.kind = kind;
    p.owner = std::move(owner);
    p.payload_ref = std::move(payload);
    p.facets = std::move(facets);
    for (const auto& t : tags) p.folksonomy.insert(taxonomy::create_tag(t, p.owner));
    p.children = std::move(children);
    return p;
  };
  taxonomy::PortletCatalog catalog;
  catalog.put(portlet("p1", PortletKind::kPicture, "u0", "img/ferrari.jpg",
                      {{"brand", "ferrari"}, {"type", "photo"}, {"color", "red"}}, {"Ferrari"}));
  catalog.put(portlet("p2", PortletKind::kPicture, "u0", "img/fiat.jpg",
                      {{"brand", "fiat"}, {"type", "photo"}, {"color", "blue"}}, {"Fiat"}));
  catalog.put(portlet("p3", PortletKind::kVideo, "a1", "video/lap.mp4",
                      {{"brand", "ferrari"}, {"type", "video"}, {"color", "red"}}, {"sport car"}));
  catalog.put(portlet("F1", PortletKind::kText, "u0", "text/ferrari.md", {{"brand", "ferrari"}}, {}));
  catalog.put(portlet("F2", PortletKind::kPicture, "u0", "img/garage.jpg", {{"type", "photo"}}, {}));
  catalog.put(portlet("F", PortletKind::kText, "u0", "", {}, {}, {"F1", "F2"}));

  navigation::NavGraph g;
  g.add_node("home");
  g.add_node("topic:sports", {{"topic", "sports"}});
  g.add_node("topic:luxury", {{"topic", "luxury"}});
  g.add_node("topic:italy", {{"topic", "italy"}});
  g.add_node("p1");
  g.add_node("p2");
  g.add_node("p3");
  g.add_node("F");
  for (auto t : {"topic:italy", "topic:luxury", "topic:sports"}) g.add_link("home", t);
  g.add_link("topic:sports", "p1");
  g.add_link("topic:sports", "p3");
  g.add_link("topic:luxury", "p1");
  g.add_link("topic:italy", "p1");
  g.add_link("topic:italy", "p2");
  g.add_link("p1", "F");
  g.add_link("p3", "F");

  evaluation::EvaluationMatrix table2{
      "Share a photo of a car between friends with same interest in cars",
      "application-dependent",
      {{"predictability", 8, 0.1},
       {"understandability", 8, 0.1},
       {"richness", 5, 0.5},
       {"comprehensibility", 6, 0.3}}};

  return mutate([&](TripleStore& s) {
    s = TripleStore{};
    jointmeaning::write_community(users, s);
    matcher::write_ontology(o, s);
    taxonomy::write_catalog(catalog, s);
    navigation::write_graph(g, s);
    write_matrix(s, "table2", table2);
    return json{{"users", users.size()},
                {"concepts", o.size()},
                {"portlets", catalog.size()},
                {"nodes", g.nodes().size()},
                {"matrices", 1},
                {"triples", s.size()}};
  });
}

// ---- HTTP ----

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
};

namespace {

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadRequest, std::string("body is not JSON: ") + e.what());
  }
}

template <class F>
httplib::Server::Handler handler(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    json out;
    try {
      out = f(req);
      res.status = 200;
    } catch (const Error& e) {
      out = error_body(e);
      res.status = http_status(e.code());
    } catch (const json::exception& e) {
      out = error_body(Error(ErrorCode::kBadRequest, e.what()));
      res.status = 400;
    } catch (const std::exception& e) {
      out = {{"error", {{"code", "internal"}, {"message", e.what()}}}};
      res.status = 500;
    }
    res.set_content(out.dump(), "application/json");
  };
}

std::vector<std::string> goals_of(const httplib::Request& req) {
  std::vector<std::string> goals;
  auto n = req.get_param_value_count("to");
  for (std::size_t i = 0; i < n; ++i) {
    std::string v = req.get_param_value("to", i);
    std::size_t start = 0;
    for (;;) {
      auto comma = v.find(',', start);
      auto piece = v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!piece.empty()) goals.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return goals;
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  Service& s = impl_->service;

  // SO_REUSEPORT would let a second server share the port silently.
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  svr.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    Error e(res.status == 404 ? ErrorCode::kNotFound : ErrorCode::kBadRequest,
            "no route for " + req.method + " " + req.path);
    res.set_content(error_body(e).dump(), "application/json");
  });

  svr.Get("/health", handler([](const httplib::Request&) { return json{{"status", "ok"}}; }));
  svr.Get("/users", handler([&s](const httplib::Request&) { return s.users(); }));
  svr.Post("/users", handler([&s](const httplib::Request& r) { return s.add_user(parse_body(r)); }));
  svr.Get("/portlets", handler([&s](const httplib::Request&) { return s.portlets(); }));
  svr.Post("/portlets",
           handler([&s](const httplib::Request& r) { return s.add_portlet(parse_body(r)); }));
  svr.Post("/tags", handler([&s](const httplib::Request& r) { return s.add_tag(parse_body(r)); }));
  svr.Post("/ontology/load",
           handler([&s](const httplib::Request& r) { return s.load_ontology(parse_body(r)); }));
  svr.Post("/graph", handler([&s](const httplib::Request& r) { return s.load_graph(parse_body(r)); }));
  svr.Post("/ingest",
           handler([&s](const httplib::Request& r) { return s.ingest_ntriples(r.body); }));
  svr.Post("/match/learn",
           handler([&s](const httplib::Request& r) { return s.learn(parse_body(r)); }));
  svr.Post("/match/superconcepts",
           handler([&s](const httplib::Request& r) { return s.superconcepts(parse_body(r)); }));
  svr.Post(R"(/views/([^/]+)/filter)", handler([&s](const httplib::Request& r) {
             return s.filter(r.matches[1], parse_body(r));
           }));
  svr.Post(R"(/views/([^/]+)/zoom)", handler([&s](const httplib::Request& r) {
             return s.zoom(r.matches[1], parse_body(r));
           }));
  svr.Get(R"(/views/([^/]+)/([^/]+))", handler([&s](const httplib::Request& r) {
            std::optional<std::string> speaker;
            if (r.has_param("speaker")) speaker = r.get_param_value("speaker");
            return s.view(r.matches[1], r.matches[2], speaker);
          }));
  svr.Get(R"(/views/([^/]+))",
          handler([&s](const httplib::Request& r) { return s.view_state(r.matches[1]); }));
  svr.Get("/navigate", handler([&s](const httplib::Request& r) {
            if (!r.has_param("from")) throw Error(ErrorCode::kBadRequest, "missing 'from'");
            std::optional<std::string> user;
            if (r.has_param("user")) user = r.get_param_value("user");
            return s.navigate(r.get_param_value("from"), goals_of(r), user);
          }));
  svr.Post("/eval", handler([&s](const httplib::Request& r) { return s.eval(parse_body(r)); }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::kPortInUse, "no free port on " + host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kPortInUse, "port " + std::to_string(port) + " is in use");
  }
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

int port_from_env() {
  const char* raw = std::getenv("FACETFORGE_PORT");
  if (!raw || !*raw) return 8080;
  std::string text(raw);
  int port = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), port);
  if (ec != std::errc() || ptr != text.data() + text.size() || port < 0 || port > 65535)
    throw Error(ErrorCode::kInvalidConfig, "FACETFORGE_PORT='" + text + "' is not a port");
  return port;
}

std::filesystem::path data_path_from_env(const std::filesystem::path& fallback) {
  const char* raw = std::getenv("FACETFORGE_DATA");
  if (!raw || !*raw) return fallback;
  return raw;
}

}  // namespace facetforge::gateway
