// Copyright 2026 The QCM Authors
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
#include <string_view>

// Counter-based random streams. A stream is a 64-bit key; the k-th draw is a
// pure function of (key, k), so results never depend on evaluation order or
// on how work is split across threads.
namespace qcm::rng {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a offset basis
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return mix64(h);
}

/// Child key for a labeled sub-stream.
constexpr std::uint64_t derive(std::uint64_t parent, std::string_view label) {
  return mix64(parent ^ hash_label(label));
}

constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t index) {
  return mix64(parent + kGolden * (index + 1) + 0x632BE59BD9B4E019ULL);
}

class Stream {
 public:
  constexpr explicit Stream(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t bits_at(std::uint64_t counter) const {
    return mix64(key_ + kGolden * (counter + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform_at(std::uint64_t counter) const {
    return static_cast<double>(bits_at(counter) >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t next_bits() { return bits_at(counter_++); }
  constexpr double next_uniform() { return uniform_at(counter_++); }

  /// Uniform integer in [0, bound) by rejection, bound > 0.
  constexpr std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
      const std::uint64_t r = next_bits();
      if (r < limit) return r % bound;
    }
  }

  constexpr std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qcm::rng
