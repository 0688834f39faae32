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

#include <string>
#include <vector>

namespace facetforge::evaluation {

struct Attribute {
  std::string name;
  double score = 0.0;
  double weight = 0.0;
};

struct ScoreBounds {
  double min = 0.0;
  double max = 10.0;
};

// A usability scoring matrix for one task: attribute scores with weights
// that sum to one.
struct EvaluationMatrix {
  std::string task;
  // "application-independent" or "application-dependent"; informational.
  std::string analysis;
  std::vector<Attribute> attributes;
};

struct TaskScore {
  double average = 0.0;
  double weighted = 0.0;
  std::vector<double> weighted_per_attribute;
};

// Throws kEmptyMatrix, kBadWeights (negative weight or |sum - 1| > 1e-9) or
// kBadScore (score outside `bounds`).
void validate(const EvaluationMatrix& m, const ScoreBounds& bounds = {});

TaskScore score_task(const EvaluationMatrix& m, const ScoreBounds& bounds = {});

// First non-comment line is the task (an optional "task," prefix is
// stripped); every further line is "name,score,weight".
EvaluationMatrix parse_matrix(const std::string& text);
EvaluationMatrix load_matrix(const std::string& path);

// "average=6.75 weighted=5.9"
std::string format_score(const TaskScore& s);
// Shortest decimal that rounds to the value after 12 significant digits.
std::string format_number(double v);

}  // namespace facetforge::evaluation
