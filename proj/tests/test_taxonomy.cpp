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

#include <doctest.h>

#include "facetforge/error.hpp"
#include "facetforge/taxonomy.hpp"
#include "support.hpp"

using namespace facetforge;
using namespace facetforge::taxonomy;

namespace {

Portlet portlet(const std::string& id, FacetSet facets, std::vector<PortletId> children = {}) {
  Portlet p;
  p.id = id;
  p.kind = PortletKind::kPicture;
  p.owner = "u0";
  p.facets = std::move(facets);
  p.children = std::move(children);
  return p;
}

}  // namespace

TEST_CASE("tag normalization") {
  CHECK(create_tag("Ferrari", "u0").label == "ferrari");
  CHECK(create_tag("sport car", "u0").label == "sport car");
  CHECK(create_tag("  EXPENSIVE Car ", "u0").label == "expensive car");
  // Decomposed e + combining acute composes; the fold lowers it first.
  CHECK(create_tag("CAFE\xCC\x81", "u0").label == "caf\xC3\xA9");
  CHECK(create_tag("\xE2\x80\x83Stra\xC3\x9F" "e\xC2\xA0", "u0").label == "stra\xC3\x9F" "e");
  CHECK(create_tag("Ferrari", "u0") == create_tag("ferrari ", "u0"));

  try {
    create_tag("   \t ", "u0");
    FAIL("expected EmptyLabel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyLabel);
  }
}

TEST_CASE("normalization is idempotent on random unicode") {
  const std::vector<std::string> pieces{"A", "b", " ", "\t", "\xC3\x89", "e\xCC\x81",
                                        "\xC3\x9F", "\xE1\xBA\x9E", "\xCE\xA3", "\xCF\x82",
                                        "\xEF\xAC\x81", "\xE2\x84\xAB", "K", "\xC4\xB0"};
  testing::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (std::size_t k = 0, n = rng.below(8); k < n; ++k) s += rng.pick(pieces);
    auto once = normalize_label(s);
    CHECK(normalize_label(once) == once);
  }
}

TEST_CASE("attach_pair keeps set semantics") {
  FacetedTaxonomy f;
  Tag ferrari = create_tag("Ferrari", "u0");
  FacetedInterface phi1{"phi1", {{"brand", "ferrari"}}, {"p1"}};
  FacetedInterface phi2{"phi2", {{"type", "photo"}}, {"p2"}};

  f = f.attach(ferrari, phi1);
  CHECK(f.size() == 1);
  f = f.attach(ferrari, phi1);
  CHECK(f.size() == 1);

  f = f.attach(ferrari, phi2);
  CHECK(f.size() == 2);
  CHECK(f.contains(ferrari, phi1));
  CHECK(f.contains(ferrari, phi2));
  CHECK(f.tags().size() == 1);

  // One interface with many tags is allowed too.
  f = f.attach(create_tag("sport car", "u1"), phi1);
  CHECK(f.size() == 3);
}

TEST_CASE("attach k distinct pairs in any order") {
  testing::Rng rng(9);
  std::vector<FacetPair> pairs;
  for (int i = 0; i < 40; ++i) {
    pairs.push_back({Tag{"t" + std::to_string(rng.below(6)), "u"},
                     FacetedInterface{"phi" + std::to_string(rng.below(6)), {}, {}}});
  }
  std::set<FacetPair> distinct(pairs.begin(), pairs.end());
  FacetedTaxonomy forward, backward;
  for (const auto& p : pairs) forward = forward.attach(p.tag, p.interface);
  for (auto it = pairs.rbegin(); it != pairs.rend(); ++it)
    backward = backward.attach(it->tag, it->interface);
  CHECK(forward.size() == distinct.size());
  CHECK(forward == backward);
}

TEST_CASE("compose_interface") {
  Portlet f1 = portlet("F1", {{"brand", "ferrari"}});
  Portlet f2 = portlet("F2", {{"type", "photo"}});

  SUBCASE("two portlets") {
    std::vector<Portlet> in{f1, f2};
    auto iface = compose_interface(in);
    CHECK(iface.facet_selections == FacetSet{{"brand", "ferrari"}, {"type", "photo"}});
    CHECK(iface.layout_slots == std::vector<PortletId>{"F1", "F2"});
  }
  SUBCASE("singleton") {
    std::vector<Portlet> in{f1};
    CHECK(compose_interface(in).facet_selections == f1.facets);
  }
  SUBCASE("duplicate ids") {
    std::vector<Portlet> in{f1, f1};
    try {
      compose_interface(in);
      FAIL("expected DuplicatePortlet");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDuplicatePortlet);
    }
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(compose_interface(std::span<const Portlet>{}), Error);
  }
  SUBCASE("multi-valued facets never conflict") {
    std::vector<Portlet> in{portlet("a", {{"color", "red"}}), portlet("b", {{"color", "blue"}})};
    CHECK(compose_interface(in).facet_selections.size() == 2);
  }
}

TEST_CASE("facet_histogram") {
  CHECK(facet_histogram({}, "color").empty());
  std::vector<Portlet> ps{portlet("p1", {{"color", "red"}}), portlet("p2", {{"color", "red"}}),
                          portlet("p3", {{"color", "blue"}, {"size", "big"}})};
  auto h = facet_histogram(ps, "color");
  CHECK(h == std::map<std::string, std::size_t>{{"blue", 1}, {"red", 2}});
  CHECK(facet_histogram(ps, "brand").empty());
}

TEST_CASE("portlet catalog keeps containment acyclic") {
  PortletCatalog c;
  c.put(portlet("F1", {}));
  c.put(portlet("F2", {}));
  c.put(portlet("F", {}, {"F1", "F2"}));
  CHECK(c.descendants("F") == std::vector<PortletId>{"F1", "F2"});

  SUBCASE("unknown child") {
    try {
      c.put(portlet("G", {}, {"missing"}));
      FAIL("expected UnknownPortlet");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnknownPortlet);
    }
  }
  SUBCASE("self containment") {
    CHECK_THROWS_AS(c.add_child("F", "F"), Error);
  }
  SUBCASE("indirect cycle") {
    try {
      c.add_child("F1", "F");
      FAIL("expected Cycle");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCycle);
    }
    CHECK(c.at("F1").children.empty());
  }
  SUBCASE("kind is fixed at creation") {
    Portlet again = portlet("F1", {});
    again.kind = PortletKind::kVideo;
    CHECK_THROWS_AS(c.put(again), Error);
  }
}

TEST_CASE("portlets and taxonomies survive the triple mapping") {
  PortletCatalog c;
  Portlet f1 = portlet("F1", {{"brand", "ferrari"}});
  f1.folksonomy.insert(create_tag("Ferrari", "u0"));
  f1.payload_ref = "img/ferrari.jpg";
  c.put(f1);
  Portlet f2 = portlet("F2", {{"type", "photo"}});
  f2.kind = PortletKind::kCode;
  c.put(f2);
  c.put(portlet("F", {}, {"F2", "F1"}));

  store::TripleStore s;
  write_catalog(c, s);
  auto back = read_catalog(s);
  CHECK(back.all() == c.all());
  CHECK(back.at("F").children == std::vector<PortletId>{"F2", "F1"});

  auto f = c.taxonomy();
  CHECK(f.size() == 1);
  store::TripleStore t;
  for (const auto& triple : to_triples(f)) t.insert(triple);
  CHECK(read_taxonomy(t) == f);
}
