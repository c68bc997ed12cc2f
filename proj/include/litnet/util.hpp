#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace litnet {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
/// Collapses every run of whitespace (including newlines) to one space and trims.
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);
/// Lowercase ASCII slug: runs of non-alphanumerics become a single '-'.
std::string slugify(std::string_view s);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

std::string utc_timestamp_now();

/// Uniform integer in [0, bound) drawn by rejection from a 64-bit Mersenne
/// Twister. std::uniform_int_distribution is implementation-defined, so seeded
/// samples would differ between standard libraries.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound);

/// Uniform sample without replacement of min(k, n) indices out of [0, n),
/// returned in ascending order. Deterministic for a given seed on every platform.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace litnet
