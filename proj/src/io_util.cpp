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

#include "ecgfuse/io_util.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecgfuse/errors.hpp"

namespace ecgfuse {

void write_all(std::ostream& sink, std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kChunk = 1 << 16;
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t len = std::min(kChunk, bytes.size() - offset);
    sink.write(reinterpret_cast<const char*>(bytes.data() + offset),
               static_cast<std::streamsize>(len));
    if (!sink) throw IoError("write failed", offset);
    offset += len;
  }
  sink.flush();
  if (!sink) throw IoError("flush failed", offset);
}

void write_file_atomic(const std::string& path,
                       std::span<const std::uint8_t> bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    write_all(out, bytes);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename " + tmp + " to " + path);
  }
}

void write_file_atomic(const std::string& path, std::string_view text) {
  write_file_atomic(
      path, std::span<const std::uint8_t>(
                reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ecgfuse
