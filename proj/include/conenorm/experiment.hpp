#pragma once

// Distribution of kappa_H over random positive matrices with i.i.d. uniform
// entries in [k, 10].
//
// Every sample owns a std::mt19937_64 stream seeded from SplitMix64 over
// (seed, k, index), so results do not depend on evaluation order. Uniforms
// are formed as (x >> 11) * 2^-53 rather than through <random>
// distributions, whose output is implementation-defined.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "conenorm/cone_geometry.hpp"
#include "conenorm/matrix.hpp"

namespace conenorm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t k, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ k) ^ index);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

inline NonnegMatrix sample_uniform_matrix(std::size_t n, double low, double high, std::mt19937_64& gen) {
  Vector data(n * n);
  for (double& v : data) v = low + (high - low) * unit_uniform(gen);
  return NonnegMatrix(n, n, std::move(data));
}

struct KappaSample {
  int k;
  std::size_t index;
  double kappa;
};

struct KappaDistOptions {
  std::size_t n = 10;
  int k_min = 1;
  int k_max = 5;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double upper = 10.0;
};

inline std::vector<KappaSample> kappa_distribution(const KappaDistOptions& opt) {
  if (opt.n == 0) throw std::invalid_argument("kappa_distribution: n must be positive");
  if (opt.k_min < 0 || opt.k_min > opt.k_max || opt.k_max > opt.upper) {
    throw std::invalid_argument("kappa_distribution: need 0 <= k_min <= k_max <= " +
                                std::to_string(opt.upper));
  }
  std::vector<KappaSample> out;
  out.reserve(static_cast<std::size_t>(opt.k_max - opt.k_min + 1) * opt.samples);
  for (int k = opt.k_min; k <= opt.k_max; ++k) {
    for (std::size_t i = 0; i < opt.samples; ++i) {
      std::mt19937_64 gen(stream_seed(opt.seed, static_cast<std::uint64_t>(k), i));
      const NonnegMatrix a = sample_uniform_matrix(opt.n, k, opt.upper, gen);
      out.push_back({k, i, birkhoff_ratio(a)});
    }
  }
  return out;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty input");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Median kappa for each k in [k_min, k_max], in order.
inline std::vector<double> medians_by_k(const std::vector<KappaSample>& samples, int k_min, int k_max) {
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) {
    std::vector<double> ks;
    for (const auto& s : samples)
      if (s.k == k) ks.push_back(s.kappa);
    out.push_back(median(std::move(ks)));
  }
  return out;
}

inline void write_kappa_csv(std::ostream& os, const std::vector<KappaSample>& samples) {
  os << "k,sample_index,kappa\n";
  char buf[64];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.kappa);
    os << s.k << ',' << s.index << ',' << buf << '\n';
  }
}

}  // namespace conenorm
