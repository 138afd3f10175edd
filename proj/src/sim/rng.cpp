#include "netros/sim/rng.hpp"

#include <cmath>

namespace netros::sim {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t RngStream::derive_seed(std::uint64_t seed, std::string_view name) {
  // splitmix64 finalizer over the mixed seed
  std::uint64_t z = seed ^ fnv1a64(name);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 &RngStream::substream(std::string_view name) {
  auto it = streams_.find(name);
  if (it == streams_.end()) {
    it = streams_.emplace(std::string(name), std::mt19937_64(derive_seed(seed_, name))).first;
  }
  return it->second;
}

double draw_lognormal(std::mt19937_64 &engine, double mean, double cv) {
  if (cv <= 0.0 || mean <= 0.0) return mean;
  double sigma2 = std::log1p(cv * cv);
  std::lognormal_distribution<double> dist(std::log(mean) - 0.5 * sigma2, std::sqrt(sigma2));
  return dist(engine);
}

} // namespace netros::sim
