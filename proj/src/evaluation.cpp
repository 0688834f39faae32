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

#include "facetforge/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "facetforge/error.hpp"

namespace facetforge::evaluation {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

double parse_number(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(line_no, "not a number: '" + text + "'");
}

}  // namespace

void validate(const EvaluationMatrix& m, const ScoreBounds& bounds) {
  if (m.attributes.empty()) throw Error(ErrorCode::kEmptyMatrix, "matrix has no attributes");
  double sum = 0;
  for (const auto& a : m.attributes) {
    if (!(a.score >= bounds.min && a.score <= bounds.max)) {
      throw Error(ErrorCode::kBadScore, "score of " + a.name + " outside [" +
                                            format_number(bounds.min) + "," +
                                            format_number(bounds.max) + "]");
    }
    if (!(a.weight >= 0) || !std::isfinite(a.weight))
      throw Error(ErrorCode::kBadWeights, "weight of " + a.name + " must be >= 0");
    sum += a.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::kBadWeights, "weights sum to " + format_number(sum));
}

TaskScore score_task(const EvaluationMatrix& m, const ScoreBounds& bounds) {
  validate(m, bounds);
  TaskScore s;
  double total = 0;
  for (const auto& a : m.attributes) {
    total += a.score;
    double w = a.score * a.weight;
    s.weighted_per_attribute.push_back(w);
    s.weighted += w;
  }
  s.average = total / static_cast<double>(m.attributes.size());
  return s;
}

EvaluationMatrix parse_matrix(const std::string& text) {
  EvaluationMatrix m;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_task = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!have_task) {
      if (t.rfind("task,", 0) == 0) t = trim(t.substr(5));
      if (t.empty()) throw ParseError(line_no, "empty task name");
      m.task = t;
      have_task = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (fields.size() != 3 || fields[0].empty())
      throw ParseError(line_no, "expected name,score,weight");
    m.attributes.push_back(
        {fields[0], parse_number(fields[1], line_no), parse_number(fields[2], line_no)});
  }
  if (!have_task) throw Error(ErrorCode::kEmptyMatrix, "matrix file has no task line");
  return m;
}

EvaluationMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_score(const TaskScore& s) {
  return "average=" + format_number(s.average) + " weighted=" + format_number(s.weighted);
}

}  // namespace facetforge::evaluation
