// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "json.hpp"

namespace ltkit::io {

// Insertion-ordered JSON; all serialized artifacts use it so output field
// order is the order the code writes, byte-stable across runs.
using Json = nlohmann::ordered_json;

// Calls fn(line_number, parsed_object) for every non-empty line.
// Line numbers are 1-based. Throws ValidationError with the line number on
// malformed JSON, ConfigError if the file cannot be opened.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const Json&)>& fn);

std::string read_file(const std::filesystem::path& path);

// Write-temp-then-rename. The rename is atomic on POSIX, so readers never
// observe a partially written file.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace ltkit::io
