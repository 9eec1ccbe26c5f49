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

#pragma once

#include <json.hpp>

#include "ecgfuse/fusion.hpp"
#include "ecgfuse/gbdt.hpp"

namespace ecgfuse {

using json = nlohmann::json;

/// Rejects keys outside `allowed` so typos in config files fail loudly.
void require_known_keys(const json& object, std::initializer_list<const char*> allowed,
                        const std::string& context);

void to_json(json& j, const GbdtConfig& c);
/// Missing keys keep their defaults.
void from_json(const json& j, GbdtConfig& c);

void to_json(json& j, const Tree& tree);
Tree tree_from_json(const json& j, std::size_t n_features);

void to_json(json& j, const MinMaxScaler& s);

}  // namespace ecgfuse
