// Copyright 2026 The ecgfuse Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <deque>

#include "ecgfuse/io_util.hpp"
#include "ecgfuse/json_io.hpp"

namespace ecgfuse {

namespace {
constexpr const char* kModelFormat = "ecgfuse.gbdt.v1";

template <typename T>
void read_optional(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
  }
}
}  // namespace

void require_known_keys(const json& object, std::initializer_list<const char*> allowed,
                        const std::string& context) {
  if (!object.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(context + ": unknown key \"" + key + "\"");
  }
}

void to_json(json& j, const GbdtConfig& c) {
  j = json{{"n_rounds", c.n_rounds},
           {"max_depth", c.max_depth},
           {"learning_rate", c.learning_rate},
           {"subsample", c.subsample},
           {"colsample_bytree", c.colsample_bytree},
           {"reg_lambda", c.reg_lambda},
           {"gamma", c.gamma},
           {"min_child_weight", c.min_child_weight},
           {"base_score", c.base_score},
           {"seed", c.seed}};
}

void from_json(const json& j, GbdtConfig& c) {
  require_known_keys(j,
                     {"n_rounds", "max_depth", "learning_rate", "subsample",
                      "colsample_bytree", "reg_lambda", "gamma", "min_child_weight",
                      "base_score", "seed"},
                     "classifier");
  read_optional(j, "n_rounds", c.n_rounds);
  read_optional(j, "max_depth", c.max_depth);
  read_optional(j, "learning_rate", c.learning_rate);
  read_optional(j, "subsample", c.subsample);
  read_optional(j, "colsample_bytree", c.colsample_bytree);
  read_optional(j, "reg_lambda", c.reg_lambda);
  read_optional(j, "gamma", c.gamma);
  read_optional(j, "min_child_weight", c.min_child_weight);
  read_optional(j, "base_score", c.base_score);
  read_optional(j, "seed", c.seed);
}

namespace {
json node_to_json(const std::vector<TreeNode>& nodes, int id) {
  const TreeNode& n = nodes[static_cast<std::size_t>(id)];
  if (n.is_leaf()) return json{{"weight", n.weight}};
  return json{{"feature", n.feature},
              {"threshold", n.threshold},
              {"left", node_to_json(nodes, n.left)},
              {"right", node_to_json(nodes, n.right)}};
}
}  // namespace

void to_json(json& j, const Tree& tree) { j = node_to_json(tree.nodes(), 0); }

// Rebuilds the flat array breadth-first, which is the order training emits.
Tree tree_from_json(const json& j, std::size_t n_features) {
  std::vector<TreeNode> nodes;
  std::deque<std::pair<const json*, int>> queue{{&j, 0}};
  nodes.emplace_back();
  while (!queue.empty()) {
    auto [obj, id] = queue.front();
    queue.pop_front();
    if (!obj->is_object()) throw ValidationError("tree node must be an object");
    if (obj->contains("weight")) {
      require_known_keys(*obj, {"weight"}, "leaf");
      nodes[static_cast<std::size_t>(id)].weight = obj->at("weight").get<double>();
      continue;
    }
    require_known_keys(*obj, {"feature", "threshold", "left", "right"}, "tree node");
    const int feature = obj->at("feature").get<int>();
    if (feature < 0 || static_cast<std::size_t>(feature) >= n_features) {
      throw ValidationError("tree node feature index " + std::to_string(feature) +
                            " out of range");
    }
    const int left = static_cast<int>(nodes.size());
    TreeNode& n = nodes[static_cast<std::size_t>(id)];
    n.feature = feature;
    n.threshold = obj->at("threshold").get<double>();
    n.left = left;
    n.right = left + 1;
    nodes.resize(nodes.size() + 2);
    queue.emplace_back(&obj->at("left"), left);
    queue.emplace_back(&obj->at("right"), left + 1);
  }
  return Tree(std::move(nodes));
}

void to_json(json& j, const MinMaxScaler& s) {
  j = json{{"mins", s.mins}, {"maxs", s.maxs}};
}

std::string model_to_json(const GbdtModel& model) {
  json trees = json::array();
  for (const auto& t : model.trees) trees.push_back(t);
  json doc{{"format", kModelFormat},
           {"n_features", model.n_features},
           {"config", model.config},
           {"trees", std::move(trees)}};
  return doc.dump(1) + "\n";
}

GbdtModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model JSON: ") + e.what());
  }
  try {
    require_known_keys(doc, {"format", "n_features", "config", "trees"}, "model");
    if (doc.at("format") != kModelFormat) {
      throw ValidationError("model JSON: unsupported format tag");
    }
    GbdtModel model;
    model.n_features = doc.at("n_features").get<std::size_t>();
    model.config = doc.at("config").get<GbdtConfig>();
    model.config.validate();
    for (const auto& t : doc.at("trees")) {
      model.trees.push_back(tree_from_json(t, model.n_features));
    }
    return model;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model JSON: ") + e.what());
  }
}

void save_model(const GbdtModel& model, const std::string& path) {
  write_file_atomic(path, model_to_json(model));
}

GbdtModel load_model(const std::string& path) {
  return model_from_json(read_text_file(path));
}

}  // namespace ecgfuse
