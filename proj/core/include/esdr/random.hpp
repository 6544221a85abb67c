#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "esdr/linalg.hpp"

namespace esdr {

using Engine = std::mt19937_64;

/// Stable 64-bit tag for a named sub-stream (FNV-1a).
constexpr std::uint64_t stream_tag(std::string_view name) {
  std::uint64_t h = 14695981039346656037ull;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

/// Derives a child seed from a root seed and a path of stream identifiers.
/// The mapping goes through std::seed_seq, whose algorithm is fixed by the
/// standard, so derived streams do not depend on evaluation order or on how
/// many workers are running.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

inline Engine derive_engine(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  return Engine(derive_seed(root, path));
}

/// rows x cols matrix of i.i.d. N(0,1) draws, filled row by row.
Matrix standard_normal(Index rows, Index cols, Engine& engine);

}  // namespace esdr
