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

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "facetforge/error.hpp"
#include "facetforge/store.hpp"

namespace facetforge::gateway {

using json = nlohmann::json;

// {"error": {"code": "not_found", "message": "..."}}
json error_body(const Error& e);
int http_status(ErrorCode code);

// The workspace behind both the HTTP service and the CLI. All state is a
// single triple store; every mutation is applied to a copy, persisted, and
// only then published, so a failed write leaves the workspace unchanged.
// Readers share the lock; writers are serialized.
class Service {
 public:
  // In-memory workspace.
  Service() = default;
  // Restores `data_path` when present; otherwise starts empty and writes
  // there on the first mutation. Throws kStorageUnavailable when the file
  // or its directory cannot be used.
  explicit Service(std::filesystem::path data_path);

  // {"id", "interests": [...], "friends": [...]}
  json add_user(const json& body);
  json users() const;
  // {"id", "kind", "owner", "payload", "facets": ["name=value"],
  //  "children": [...], "tags": [...]}
  json add_portlet(const json& body);
  json portlets() const;
  // {"portlet", "label"}; the tag is attributed to the portlet owner.
  json add_tag(const json& body);
  // {"ntriples": "..."} or {"concepts": [{"id","label","context","features"}],
  //  "equivalences": [[a,b]], "broader": [[narrower,broader]]}
  json load_ontology(const json& body);
  // {"nodes": [{"id","facets"}], "links": [[from,to]]}
  json load_graph(const json& body);
  // {"training": "a,b,1\n...", "config": "key=value\n..." | {...}}
  json learn(const json& body);
  // {"theta": optional override}
  json superconcepts(const json& body) const;
  // Joint-meaning view of `portlet` for `viewer`. The speaker defaults to
  // the portlet owner.
  json view(const std::string& viewer, const std::string& portlet,
            const std::optional<std::string>& speaker = std::nullopt) const;
  // Filter/zoom state of one user.
  json view_state(const std::string& user) const;
  // {"facet", "value", "remove": optional bool}
  json filter(const std::string& user, const json& body);
  // {"facet"} or {"action": "unzoom"}
  json zoom(const std::string& user, const json& body);
  // Shortest route to the nearest goal; `user` enables the interest
  // pre-filter.
  json navigate(const std::string& from, const std::vector<std::string>& goals,
                const std::optional<std::string>& user = std::nullopt) const;
  // {"csv": "..."} | {"matrix": "<stored id>"} |
  // {"task", "attributes": [{"name","score","weight"}]}
  json eval(const json& body) const;
  // Merges N-Triples text into the workspace.
  json ingest_ntriples(const std::string& text);
  // Loads the demo fixture: the speaker/audience scenario, a navigation
  // graph and the stored usability matrix "table2".
  json seed_demo();

  store::TripleStore snapshot() const;
  const std::optional<std::filesystem::path>& data_path() const { return path_; }

 private:
  template <class F>
  json mutate(F&& apply);

  mutable std::shared_mutex mutex_;
  store::TripleStore store_;
  std::optional<std::filesystem::path> path_;
};

// HTTP/1.1 JSON adapter over a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port.
  // Throws kPortInUse.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// FACETFORGE_PORT or 8080; kInvalidConfig on garbage.
int port_from_env();
// FACETFORGE_DATA or `fallback`.
std::filesystem::path data_path_from_env(const std::filesystem::path& fallback);

}  // namespace facetforge::gateway
