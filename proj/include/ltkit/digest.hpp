// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace ltkit {

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

// 64-bit FNV-1a. Used to derive deterministic per-problem RNG streams;
// not a substitute for sha256_hex in content addressing.
std::uint64_t fnv1a64(std::string_view data);

// SplitMix64 step, used to mix seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ltkit
