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

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace ecgfuse {

/// Writes all bytes; throws IoError carrying the offset of the failed chunk.
void write_all(std::ostream& sink, std::span<const std::uint8_t> bytes);

/// Writes to "<path>.tmp" then renames over `path`.
void write_file_atomic(const std::string& path,
                       std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::string& path, std::string_view text);

std::string read_text_file(const std::string& path);

}  // namespace ecgfuse
