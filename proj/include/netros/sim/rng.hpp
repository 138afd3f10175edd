#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>

namespace netros::sim {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL);

/// Named, independent random substreams derived from one seed. A substream's
/// draws depend only on the seed and its name, never on how other substreams
/// were consumed.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64 &substream(std::string_view name);

  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view name);

private:
  std::uint64_t seed_;
  std::map<std::string, std::mt19937_64, std::less<>> streams_;
};

/// Lognormal draw with the given mean and coefficient of variation; cv == 0
/// returns the mean exactly.
double draw_lognormal(std::mt19937_64 &engine, double mean, double cv);

} // namespace netros::sim
