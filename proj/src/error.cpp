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

#include "facetforge/error.hpp"

namespace facetforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedTerm: return "malformed_term";
    case ErrorCode::kEmptyQuery: return "empty_query";
    case ErrorCode::kIoFailure: return "io_failure";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kEmptyLabel: return "empty_label";
    case ErrorCode::kDuplicatePortlet: return "duplicate_portlet";
    case ErrorCode::kCycle: return "cycle";
    case ErrorCode::kUnknownPortlet: return "unknown_portlet";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kDegenerateTraining: return "degenerate_training";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kUnmatchedTag: return "unmatched_tag";
    case ErrorCode::kAlreadyZoomed: return "already_zoomed";
    case ErrorCode::kEmptyZoomStack: return "empty_zoom_stack";
    case ErrorCode::kUnreachable: return "unreachable";
    case ErrorCode::kUnknownNode: return "unknown_node";
    case ErrorCode::kBadWeights: return "bad_weights";
    case ErrorCode::kEmptyMatrix: return "empty_matrix";
    case ErrorCode::kBadScore: return "bad_score";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kBadRequest: return "bad_request";
    case ErrorCode::kPortInUse: return "port_in_use";
    case ErrorCode::kStorageUnavailable: return "storage_unavailable";
  }
  return "unknown";
}

}  // namespace facetforge
