// Copyright 2026 The noisefp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <type_traits>

namespace noisefp {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to turn structured keys into independent seeds.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over the bytes of `s`. Stable across platforms, unlike std::hash.
std::uint64_t hash_string(std::string_view s);

/// Derives a child seed from a parent seed and a list of integer/string tags.
template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t seed, const Tags&... tags) {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  auto absorb = [&h](const auto& tag) {
    using T = std::decay_t<decltype(tag)>;
    if constexpr (std::is_convertible_v<T, std::string_view>) {
      h = mix64(h ^ hash_string(std::string_view(tag)));
    } else {
      h = mix64(h ^ static_cast<std::uint64_t>(tag));
    }
  };
  (absorb(tags), ...);
  return h;
}

}  // namespace noisefp
