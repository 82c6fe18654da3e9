#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sketchtensor {

/// One count-sketch hash pair: a bucket map h: [I] -> [J] and a sign map
/// s: [I] -> {-1,+1}, both fully tabulated from i.i.d. uniform draws of a
/// SplitMix64 stream. Tabulated maps are fully independent, hence 2-wise
/// independent. Immutable after construction; safe to share across threads.
///
/// Draw order is pinned for reproducibility: for each index i in turn,
/// bucket[i] is drawn first, then sign[i] (sign = +1 when the top bit of
/// the raw draw is 0).
class HashPair {
 public:
  /// Tabulates a fresh pair. Throws std::invalid_argument if either
  /// dimension is zero.
  HashPair(std::size_t input_dim, std::size_t hash_len, std::uint64_t seed);

  /// Wraps explicitly given maps (used for hand-built and composed pairs).
  /// Such a pair has no seed and cannot be serialized to a sidecar.
  HashPair(std::vector<std::uint32_t> bucket_map, std::vector<std::int8_t> sign_map,
           std::size_t hash_len);

  std::size_t input_dim() const { return bucket_map_.size(); }
  std::size_t hash_len() const { return hash_len_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  /// Bucket of index i, 0-based in [0, hash_len).
  std::uint32_t bucket(std::size_t i) const { return bucket_map_[i]; }
  /// Sign of index i, -1 or +1.
  int sign(std::size_t i) const { return sign_map_[i]; }

  const std::vector<std::uint32_t>& bucket_map() const { return bucket_map_; }
  const std::vector<std::int8_t>& sign_map() const { return sign_map_; }

 private:
  std::vector<std::uint32_t> bucket_map_;
  std::vector<std::int8_t> sign_map_;
  std::size_t hash_len_;
  std::optional<std::uint64_t> seed_;
};

/// An ordered list of hash pairs, one per tensor mode. The composed pair
/// over multi-indices sums buckets and multiplies signs; its bucket range
/// is [0, composed_len) with composed_len = sum(hash_len) - (modes - 1).
/// Buckets being 0-based absorbs the -N+1 shift of the 1-based convention.
class HashFamily {
 public:
  /// Derives one pair per mode from a master seed: pair n is tabulated
  /// from the SplitMix64 stream seeded with (master_seed XOR n).
  HashFamily(const std::vector<std::size_t>& input_dims,
             const std::vector<std::size_t>& hash_lens, std::uint64_t master_seed);

  /// Same hash length for every mode.
  HashFamily(const std::vector<std::size_t>& input_dims, std::size_t hash_len,
             std::uint64_t master_seed);

  /// Wraps explicit pairs (hand-built families have no master seed).
  explicit HashFamily(std::vector<HashPair> pairs);

  std::size_t modes() const { return pairs_.size(); }
  const HashPair& pair(std::size_t n) const { return pairs_[n]; }
  const std::vector<HashPair>& pairs() const { return pairs_; }
  std::optional<std::uint64_t> master_seed() const { return master_seed_; }

  std::vector<std::size_t> input_dims() const;
  std::vector<std::size_t> hash_lens() const;

  /// sum(J_n) - N + 1, the length of the composed sketch.
  std::size_t composed_len() const;

  /// Composed (bucket, sign) of one multi-index. Never materializes the
  /// full-length composed maps. Throws std::invalid_argument when an index
  /// is out of range.
  std::pair<std::size_t, int> compose(const std::vector<std::size_t>& multi_index) const;

  /// Explicitly tabulates the composed pair over all prod(I_n) indices,
  /// flat index 0-based column-major (first mode fastest). Intended for
  /// oracle tests and the long-pair count-sketch baseline.
  HashPair materialize_composed_pair() const;

 private:
  std::vector<HashPair> pairs_;
  std::optional<std::uint64_t> master_seed_;
};

/// Derives the master seed of the d-th independent family from a base seed.
/// The sum is passed through the SplitMix64 finalizer so that pair seeds of
/// different families cannot collide through the XOR-with-mode rule.
std::uint64_t family_seed(std::uint64_t base_seed, std::size_t d);

}  // namespace sketchtensor
