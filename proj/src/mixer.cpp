#include "holispoof/mixer.hpp"

#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "holispoof/errors.hpp"
#include "holispoof/hash.hpp"
#include "json.hpp"

namespace holispoof {

std::vector<size_t> seeded_permutation(size_t n, std::uint64_t seed) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 engine(seed);
  for (size_t i = n; i > 1; --i) {
    const size_t j = static_cast<size_t>(engine() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

namespace {

// Largest-remainder split of cap between the two classes. Exact integer
// arithmetic; remainders sum to 0 or pool_size, so at most one leftover
// slot exists.
std::pair<std::uint64_t, std::uint64_t> class_quotas(std::uint64_t real_n,
                                                     std::uint64_t fake_n,
                                                     std::uint64_t cap) {
  const std::uint64_t total = real_n + fake_n;
  std::uint64_t real_q = cap * real_n / total;
  std::uint64_t fake_q = cap * fake_n / total;
  if (real_q + fake_q < cap) {
    const std::uint64_t real_rem = cap * real_n % total;
    const std::uint64_t fake_rem = cap * fake_n % total;
    if (real_rem >= fake_rem)
      ++real_q;
    else
      ++fake_q;
  }
  return {real_q, fake_q};
}

}  // namespace

std::vector<ManifestEntry> stratified_sample(
    const std::vector<ManifestEntry>& pool, std::uint64_t cap,
    std::uint64_t seed) {
  if (cap == 0) raise(ErrorCode::ZeroCap, "sampling cap must be positive");
  if (pool.empty()) raise(ErrorCode::EmptyInput, "sampling pool is empty");
  if (pool.size() <= cap) return pool;

  std::vector<size_t> real_idx, fake_idx;
  for (size_t i = 0; i < pool.size(); ++i)
    (pool[i].label == Label::real ? real_idx : fake_idx).push_back(i);

  const auto [real_q, fake_q] =
      class_quotas(real_idx.size(), fake_idx.size(), cap);

  // One engine drives both class shuffles, reals first, so the draw order
  // is part of the documented contract.
  std::mt19937_64 engine(seed);
  const auto shuffle_in_place = [&engine](std::vector<size_t>& idx) {
    for (size_t i = idx.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(engine() % i);
      std::swap(idx[i - 1], idx[j]);
    }
  };
  shuffle_in_place(real_idx);
  shuffle_in_place(fake_idx);

  std::vector<ManifestEntry> out;
  out.reserve(cap);
  for (std::uint64_t i = 0; i < real_q; ++i) out.push_back(pool[real_idx[i]]);
  for (std::uint64_t i = 0; i < fake_q; ++i) out.push_back(pool[fake_idx[i]]);
  return out;
}

MixResult build_mixed_manifest(const std::vector<MixDatasetSpec>& specs,
                               std::uint64_t seed) {
  MixResult result;
  result.seed = seed;
  std::set<std::string> tags;
  std::set<std::string> ids;
  for (const MixDatasetSpec& spec : specs) {
    if (spec.dataset_tag.empty())
      raise(ErrorCode::ConfigError,
            "dataset " + spec.manifest_path + " needs a non-empty tag");
    if (!tags.insert(spec.dataset_tag).second)
      raise(ErrorCode::ConfigError,
            "dataset tag " + spec.dataset_tag + " appears twice");

    const std::vector<ManifestEntry> pool = read_manifest(spec.manifest_path);
    std::vector<ManifestEntry> selected =
        stratified_sample(pool, spec.cap, seed ^ fnv1a64(spec.dataset_tag));

    MixDatasetSummary summary;
    summary.dataset_tag = spec.dataset_tag;
    summary.pool_size = pool.size();
    summary.selected = selected.size();
    for (ManifestEntry& entry : selected) {
      entry.dataset_tag = spec.dataset_tag;
      entry.sample_id = spec.dataset_tag + "/" + entry.sample_id;
      if (!ids.insert(entry.sample_id).second)
        raise(ErrorCode::DuplicateSampleId,
              entry.sample_id + " appears twice in the mix");
      ++(entry.label == Label::real ? summary.real : summary.fake);
      result.entries.push_back(std::move(entry));
    }
    result.datasets.push_back(std::move(summary));
  }
  return result;
}

void write_mixed_manifest(const std::string& path, const MixResult& result) {
  nlohmann::ordered_json header;
  header["seed"] = result.seed;
  header["total"] = result.entries.size();
  nlohmann::ordered_json datasets = nlohmann::ordered_json::array();
  for (const MixDatasetSummary& d : result.datasets) {
    datasets.push_back({{"tag", d.dataset_tag},
                        {"pool", d.pool_size},
                        {"selected", d.selected},
                        {"real", d.real},
                        {"fake", d.fake}});
  }
  header["datasets"] = std::move(datasets);
  write_manifest(path, result.entries, {header.dump()});
}

}  // namespace holispoof
