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
#include <vector>

#include "facetforge/matcher.hpp"

namespace facetforge::matcher {

// Labeled concept pairs for exercising learn_weights. Matching pairs share a
// label up to one edit and about half their tag context; non-matching pairs
// draw both independently. Numeric features are pure noise in both classes,
// so only the first two dimensions carry signal. Classes alternate, so
// `pairs` / 2 of each.
std::vector<TrainingPair> synthetic_corpus(std::uint64_t seed, std::size_t pairs = 200);

// Dissimilarity profiles where dimension 0 alone separates the classes
// (matches in [0, 0.2], non-matches in [0.6, 1]) and the others are uniform
// noise.
std::vector<Example> separable_examples(std::uint64_t seed, std::size_t count);

}  // namespace facetforge::matcher
