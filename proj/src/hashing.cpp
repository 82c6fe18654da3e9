#include "sketchtensor/hashing.hpp"

#include <numeric>
#include <stdexcept>

#include "sketchtensor/rng.hpp"

namespace sketchtensor {

HashPair::HashPair(std::size_t input_dim, std::size_t hash_len, std::uint64_t seed)
    : hash_len_(hash_len), seed_(seed) {
  if (input_dim == 0 || hash_len == 0) {
    throw std::invalid_argument("HashPair: dimensions must be positive");
  }
  bucket_map_.resize(input_dim);
  sign_map_.resize(input_dim);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < input_dim; ++i) {
    bucket_map_[i] = static_cast<std::uint32_t>(rng.next_below(hash_len));
    sign_map_[i] = (rng.next() >> 63) ? -1 : +1;
  }
}

HashPair::HashPair(std::vector<std::uint32_t> bucket_map, std::vector<std::int8_t> sign_map,
                   std::size_t hash_len)
    : bucket_map_(std::move(bucket_map)), sign_map_(std::move(sign_map)),
      hash_len_(hash_len) {
  if (bucket_map_.empty() || hash_len == 0) {
    throw std::invalid_argument("HashPair: dimensions must be positive");
  }
  if (bucket_map_.size() != sign_map_.size()) {
    throw std::invalid_argument("HashPair: bucket and sign maps differ in length");
  }
  for (std::uint32_t b : bucket_map_) {
    if (b >= hash_len) throw std::invalid_argument("HashPair: bucket out of range");
  }
  for (std::int8_t s : sign_map_) {
    if (s != -1 && s != +1) throw std::invalid_argument("HashPair: sign must be +/-1");
  }
}

HashFamily::HashFamily(const std::vector<std::size_t>& input_dims,
                       const std::vector<std::size_t>& hash_lens,
                       std::uint64_t master_seed)
    : master_seed_(master_seed) {
  if (input_dims.empty() || input_dims.size() != hash_lens.size()) {
    throw std::invalid_argument("HashFamily: need one hash length per mode");
  }
  pairs_.reserve(input_dims.size());
  for (std::size_t n = 0; n < input_dims.size(); ++n) {
    pairs_.emplace_back(input_dims[n], hash_lens[n],
                        master_seed ^ static_cast<std::uint64_t>(n));
  }
}

HashFamily::HashFamily(const std::vector<std::size_t>& input_dims, std::size_t hash_len,
                       std::uint64_t master_seed)
    : HashFamily(input_dims, std::vector<std::size_t>(input_dims.size(), hash_len),
                 master_seed) {}

HashFamily::HashFamily(std::vector<HashPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw std::invalid_argument("HashFamily: no pairs");
}

std::vector<std::size_t> HashFamily::input_dims() const {
  std::vector<std::size_t> dims(pairs_.size());
  for (std::size_t n = 0; n < pairs_.size(); ++n) dims[n] = pairs_[n].input_dim();
  return dims;
}

std::vector<std::size_t> HashFamily::hash_lens() const {
  std::vector<std::size_t> lens(pairs_.size());
  for (std::size_t n = 0; n < pairs_.size(); ++n) lens[n] = pairs_[n].hash_len();
  return lens;
}

std::size_t HashFamily::composed_len() const {
  std::size_t total = 0;
  for (const HashPair& p : pairs_) total += p.hash_len();
  return total - pairs_.size() + 1;
}

std::pair<std::size_t, int> HashFamily::compose(
    const std::vector<std::size_t>& multi_index) const {
  if (multi_index.size() != pairs_.size()) {
    throw std::invalid_argument("compose: index order does not match family");
  }
  std::size_t bucket = 0;
  int sign = 1;
  for (std::size_t n = 0; n < pairs_.size(); ++n) {
    if (multi_index[n] >= pairs_[n].input_dim()) {
      throw std::invalid_argument("compose: index out of range");
    }
    bucket += pairs_[n].bucket(multi_index[n]);
    sign *= pairs_[n].sign(multi_index[n]);
  }
  return {bucket, sign};
}

HashPair HashFamily::materialize_composed_pair() const {
  std::size_t total = 1;
  for (const HashPair& p : pairs_) total *= p.input_dim();
  std::vector<std::uint32_t> buckets(total);
  std::vector<std::int8_t> signs(total);
  std::vector<std::size_t> idx(pairs_.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t bucket = 0;
    int sign = 1;
    for (std::size_t n = 0; n < pairs_.size(); ++n) {
      bucket += pairs_[n].bucket(idx[n]);
      sign *= pairs_[n].sign(idx[n]);
    }
    buckets[flat] = static_cast<std::uint32_t>(bucket);
    signs[flat] = static_cast<std::int8_t>(sign);
    for (std::size_t n = 0; n < pairs_.size(); ++n) {  // first mode fastest
      if (++idx[n] < pairs_[n].input_dim()) break;
      idx[n] = 0;
    }
  }
  return HashPair(std::move(buckets), std::move(signs), composed_len());
}

std::uint64_t family_seed(std::uint64_t base_seed, std::size_t d) {
  return SplitMix64::mix(base_seed + static_cast<std::uint64_t>(d));
}

}  // namespace sketchtensor
