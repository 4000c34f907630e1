#pragma once

// Random nonnegative fields for the probes. The families mix the known
// extremal configurations (disjoint spikes, near-equal fields, harmonic
// profiles) with generic random fields.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qlab/measure.hpp"
#include "qlab/rng.hpp"

namespace qlab::sampling {

enum class Family { uniform, log_spread, spike, sparse, near_constant, harmonic, count };

inline ScalarField field(Rng& rng, std::size_t n, Family family) {
  std::vector<double> v(n, 0.0);
  switch (family) {
    case Family::uniform:
      for (auto& x : v) x = rng.uniform();
      break;
    case Family::log_spread:
      for (auto& x : v) x = rng.log_uniform(1e-4, 1e4);
      break;
    case Family::spike:
      v[rng.index(n)] = rng.log_uniform(1e-2, 1e2);
      break;
    case Family::sparse:
      for (auto& x : v)
        if (rng.coin(0.3)) x = rng.uniform(0.1, 1.0);
      if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[rng.index(n)] = 1.0;
      break;
    case Family::near_constant: {
      const double c = rng.log_uniform(1e-2, 1e2);
      for (auto& x : v) x = c * (1.0 + 1e-3 * rng.uniform(-1.0, 1.0));
      break;
    }
    case Family::harmonic: {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
      for (std::size_t k = 0; k < n; ++k) v[perm[k]] = 1.0 / static_cast<double>(k + 1);
      break;
    }
    case Family::count:
      break;
  }
  return ScalarField(std::move(v));
}

inline ScalarField field(Rng& rng, std::size_t n) {
  return field(rng, n, static_cast<Family>(rng.index(static_cast<std::size_t>(Family::count))));
}

/// Random partition of n atoms into between 1 and n blocks.
inline Partition partition(Rng& rng, std::size_t n) {
  const std::size_t k = 1 + rng.index(n);
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i < k ? i : rng.index(k);
  for (std::size_t i = n; i > 1; --i) std::swap(label[i - 1], label[rng.index(i)]);
  std::vector<std::vector<std::size_t>> blocks(k);
  for (std::size_t i = 0; i < n; ++i) blocks[label[i]].push_back(i);
  return Partition(std::move(blocks), n);
}

/// Random permutation of 0..n-1.
inline std::vector<std::size_t> permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  return perm;
}

}  // namespace qlab::sampling
