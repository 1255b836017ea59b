#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "fracspec/linalg.hpp"

namespace fracspec {

// Binary cache for 2D exterior-tail vectors.
// Layout: 24-byte header = magic "FTL1" (4 bytes), s as little-endian float64
// (8), n as little-endian uint32 (4), 8 reserved zero bytes; then n*n
// little-endian float64 tail values in node order p = ix*n + iy.
namespace tail_cache {

// Directory from FRACSPEC_CACHE_DIR, or nullopt when unset/empty.
std::optional<std::filesystem::path> directory_from_env();

std::filesystem::path file_name(const std::filesystem::path& dir, double s,
                                double lo, double hi, std::size_t n);

// nullopt on missing file, bad magic, or (s, n) mismatch: stale entries are
// recomputed, never trusted.
std::optional<Vector> load(const std::filesystem::path& file, double s,
                           std::size_t n);

bool store(const std::filesystem::path& file, double s, std::size_t n,
           const Vector& tails);

}  // namespace tail_cache
}  // namespace fracspec
