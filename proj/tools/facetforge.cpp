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

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facetforge/gateway.hpp"

namespace {

using facetforge::Error;
using facetforge::ErrorCode;
using facetforge::gateway::HttpServer;
using facetforge::gateway::Service;
using facetforge::gateway::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string join(const json& list, const std::string& sep) {
  std::string out;
  for (const auto& e : list) {
    if (!out.empty()) out += sep;
    out += e.get<std::string>();
  }
  return out;
}

// A JSON document may carry any of: ontology, users, portlets, tags, graph.
json ingest_document(Service& s, const json& doc) {
  json out = json::object();
  if (doc.contains("ontology")) out["ontology"] = s.load_ontology(doc.at("ontology"));
  std::size_t users = 0, portlets = 0, tags = 0;
  for (const auto& u : doc.value("users", json::array())) {
    s.add_user(u);
    ++users;
  }
  for (const auto& p : doc.value("portlets", json::array())) {
    s.add_portlet(p);
    ++portlets;
  }
  for (const auto& t : doc.value("tags", json::array())) {
    s.add_tag(t);
    ++tags;
  }
  if (doc.contains("graph")) out["graph"] = s.load_graph(doc.at("graph"));
  out["users"] = users;
  out["portlets"] = portlets;
  out["tags"] = tags;
  return out;
}

HttpServer* running = nullptr;

void on_signal(int) {
  if (running) running->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FacetForge: faceted portlets, tag matching and joint-meaning views"};
  app.require_subcommand(1);

  std::string data;
  bool as_json = false;
  app.add_option("--data", data, "workspace file (default: $FACETFORGE_DATA or facetforge.nt)");
  app.add_flag("--json", as_json, "print the raw service response");

  std::string ingest_file;
  auto* ingest = app.add_subcommand("ingest", "merge an N-Triples (.nt) or JSON document");
  ingest->add_option("file", ingest_file)->required()->check(CLI::ExistingFile);

  std::string tag_portlet, tag_label;
  auto* tag = app.add_subcommand("tag", "attach a folksonomy tag to a portlet");
  tag->add_option("--portlet", tag_portlet)->required();
  tag->add_option("--label", tag_label)->required();

  std::string training_file, config_file;
  auto* learn = app.add_subcommand("learn", "learn dissimilarity weights from labeled pairs");
  learn->add_option("--training", training_file, "lines of conceptA,conceptB,{0|1}")
      ->required()
      ->check(CLI::ExistingFile);
  learn->add_option("--config", config_file, "key=value learning settings")->check(CLI::ExistingFile);

  std::optional<double> theta;
  auto* match = app.add_subcommand("match", "form superconcepts from tags and the ontology");
  match->add_option("--theta", theta, "link threshold in (0,1)");

  std::string speaker, viewer, portlet;
  auto* resolve = app.add_subcommand("resolve", "print the label a viewer sees on a portlet");
  resolve->add_option("--speaker", speaker, "defaults to the portlet owner");
  resolve->add_option("--viewer", viewer)->required();
  resolve->add_option("--portlet", portlet)->required();

  std::string nav_from, nav_user;
  std::vector<std::string> nav_to;
  auto* navigate = app.add_subcommand("navigate", "shortest route to the nearest goal node");
  navigate->add_option("--from", nav_from)->required();
  navigate->add_option("--to", nav_to)->required();
  navigate->add_option("--user", nav_user, "skip nodes unrelated to this user's interests");

  std::string eval_file, eval_matrix;
  auto* eval = app.add_subcommand("eval", "score a usability matrix");
  auto* eval_file_opt = eval->add_option("file", eval_file)->check(CLI::ExistingFile);
  auto* eval_matrix_opt = eval->add_option("--matrix", eval_matrix, "stored matrix id");
  eval_file_opt->excludes(eval_matrix_opt);
  eval->require_option(1);

  std::string host = "127.0.0.1";
  std::optional<int> port;
  auto* serve = app.add_subcommand("serve", "run the HTTP JSON service");
  serve->add_option("--host", host);
  serve->add_option("--port", port, "default: $FACETFORGE_PORT or 8080")->check(CLI::Range(0, 65535));

  auto* seed = app.add_subcommand("seed-demo", "replace the workspace with the demo fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto path = data.empty() ? facetforge::gateway::data_path_from_env("facetforge.nt")
                             : std::filesystem::path(data);
    Service service(path);
    json out;
    std::string text;

    if (*ingest) {
      if (ingest_file.ends_with(".nt")) {
        out = service.ingest_ntriples(read_file(ingest_file));
        text = "added " + out["added"].dump() + " triples, store holds " + out["size"].dump();
      } else {
        json doc;
        try {
          doc = json::parse(read_file(ingest_file));
        } catch (const json::exception& e) {
          throw Error(ErrorCode::kBadRequest, ingest_file + " is not JSON: " + e.what());
        }
        out = ingest_document(service, doc);
        text = "ingested " + out["users"].dump() + " users, " + out["portlets"].dump() +
               " portlets, " + out["tags"].dump() + " tags";
      }
    } else if (*tag) {
      out = service.add_tag({{"portlet", tag_portlet}, {"label", tag_label}});
      text = "tagged " + tag_portlet + " with " + out["tag"].get<std::string>();
    } else if (*learn) {
      json body{{"training", read_file(training_file)}};
      if (!config_file.empty()) body["config"] = read_file(config_file);
      out = service.learn(body);
      std::ostringstream line;
      line << "weights=";
      for (std::size_t i = 0; i < out["weights"].size(); ++i)
        line << (i ? "," : "") << out["weights"][i].get<double>();
      line << " bias=" << out["bias"].get<double>()
           << " training_accuracy=" << out["training_accuracy"].get<double>()
           << " holdout_accuracy=" << out["holdout_accuracy"].get<double>();
      text = line.str();
    } else if (*match) {
      json body = json::object();
      if (theta) body["theta"] = *theta;
      out = service.superconcepts(body);
      for (const auto& sc : out["superconcepts"]) {
        if (!text.empty()) text += "\n";
        text += sc["key"].get<std::string>() + ": " + join(sc["labels"], " | ");
        if (!sc["tags"].empty()) text += "  [tags: " + join(sc["tags"], ", ") + "]";
      }
    } else if (*resolve) {
      out = service.view(viewer, portlet,
                         speaker.empty() ? std::nullopt : std::optional<std::string>(speaker));
      text = out["label"].is_null() ? "(untagged)" : out["label"].get<std::string>();
    } else if (*navigate) {
      out = service.navigate(nav_from, nav_to,
                             nav_user.empty() ? std::nullopt : std::optional<std::string>(nav_user));
      text = nav_from;
      for (const auto& n : out["path"]) text += " -> " + n.get<std::string>();
    } else if (*eval) {
      out = eval_matrix.empty() ? service.eval({{"csv", read_file(eval_file)}})
                                : service.eval({{"matrix", eval_matrix}});
      text = out["summary"].get<std::string>();
    } else if (*seed) {
      out = service.seed_demo();
      text = "seeded demo: " + out["users"].dump() + " users, " + out["concepts"].dump() +
             " concepts, " + out["portlets"].dump() + " portlets, " + out["nodes"].dump() +
             " navigation nodes, " + out["matrices"].dump() + " matrix";
    } else if (*serve) {
      HttpServer server(service);
      int bound = server.bind(host, port.value_or(facetforge::gateway::port_from_env()));
      running = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << std::endl;
      server.listen();
      running = nullptr;
      return 0;
    }

    std::cout << (as_json ? out.dump(2) : text) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "facetforge: " << facetforge::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "facetforge: " << e.what() << "\n";
    return 1;
  }
}
