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

#include "facetforge/synthetic.hpp"

#include <random>
#include <string>

namespace facetforge::matcher {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(unit() * static_cast<double>(n)));
  }
  char letter() { return static_cast<char>('a' + below(26)); }

  std::string word() {
    std::string w;
    for (std::size_t i = 0, n = 6 + below(4); i < n; ++i) w += letter();
    return w;
  }

  // Zero or one random edit.
  std::string perturb(std::string w) {
    switch (below(4)) {
      case 0: return w;
      case 1: w[below(w.size())] = letter(); return w;
      case 2: w.insert(w.begin() + static_cast<std::ptrdiff_t>(below(w.size() + 1)), letter()); return w;
      default: w.erase(w.begin() + static_cast<std::ptrdiff_t>(below(w.size()))); return w;
    }
  }

  std::set<std::string> tags(std::size_t n) {
    std::set<std::string> out;
    while (out.size() < n) out.insert("tag" + std::to_string(below(40)));
    return out;
  }

  std::vector<double> features(std::size_t n) {
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(unit());
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

std::vector<TrainingPair> synthetic_corpus(std::uint64_t seed, std::size_t pairs) {
  constexpr std::size_t kFeatures = 4;
  Draw d(seed);
  std::vector<TrainingPair> out;
  for (std::size_t i = 0; i < pairs; ++i) {
    bool match = i % 2 == 0;
    Concept a{"a" + std::to_string(i), d.word(), d.tags(4), d.features(kFeatures)};
    Concept b{"b" + std::to_string(i), "", {}, d.features(kFeatures)};
    if (match) {
      b.label = d.perturb(a.label);
      for (const auto& t : a.tag_context) {
        b.tag_context.insert(d.unit() < 0.5 ? t : "tag" + std::to_string(d.below(40)));
      }
    } else {
      b.label = d.word();
      b.tag_context = d.tags(4);
    }
    out.push_back({std::move(a), std::move(b), match});
  }
  return out;
}

std::vector<Example> separable_examples(std::uint64_t seed, std::size_t count) {
  Draw d(seed);
  std::vector<Example> out;
  for (std::size_t i = 0; i < count; ++i) {
    bool match = i % 2 == 0;
    double first = match ? 0.2 * d.unit() : 0.6 + 0.4 * d.unit();
    out.push_back({{first, d.unit(), d.unit()}, match});
  }
  return out;
}

}  // namespace facetforge::matcher
