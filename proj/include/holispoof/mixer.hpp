#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holispoof/manifest.hpp"

namespace holispoof {

// Deterministic Fisher-Yates permutation of {0, ..., n-1} driven by a
// std::mt19937_64 with modulo-bounded draws, so the result is identical on
// every platform for a given seed.
std::vector<size_t> seeded_permutation(size_t n, std::uint64_t seed);

// Label-stratified sampling. A pool no larger than cap is returned whole in
// its original order. Otherwise exactly cap entries are drawn: per-class
// quotas follow largest-remainder apportionment of the pool's real/fake
// ratio (a single leftover slot goes to the class with the larger
// remainder, ties to real), and each class is drawn via a seeded shuffle.
// Output order is the selected reals in shuffle order, then the fakes.
// Throws ZeroCap and EmptyInput.
std::vector<ManifestEntry> stratified_sample(
    const std::vector<ManifestEntry>& pool, std::uint64_t cap,
    std::uint64_t seed);

struct MixDatasetSpec {
  std::string manifest_path;
  std::string dataset_tag;
  std::uint64_t cap = 0;
};

struct MixDatasetSummary {
  std::string dataset_tag;
  std::uint64_t pool_size = 0;
  std::uint64_t selected = 0;
  std::uint64_t real = 0;
  std::uint64_t fake = 0;
};

struct MixResult {
  std::uint64_t seed = 0;
  std::vector<MixDatasetSummary> datasets;
  std::vector<ManifestEntry> entries;
};

// Concatenates per-dataset stratified samples in spec order. Every entry's
// dataset_tag is set from its spec and its sample_id is prefixed with
// "<tag>/". Each dataset shuffles with seed xor fnv1a64(tag) so equal-sized
// pools do not share a permutation. Throws ManifestNotFound, ConfigError
// (empty tag or duplicate tag), DuplicateSampleId, ZeroCap.
MixResult build_mixed_manifest(const std::vector<MixDatasetSpec>& specs,
                               std::uint64_t seed);

// Writes the mixed manifest: a '#' header line carrying the seed and
// per-dataset counts as JSON, then one entry per line.
void write_mixed_manifest(const std::string& path, const MixResult& result);

}  // namespace holispoof
