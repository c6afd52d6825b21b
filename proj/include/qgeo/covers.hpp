#pragma once

#include <cstdint>
#include <vector>

namespace qgeo {

class SplitMix64;

// Fractional uniform cover of the index set {1, ..., j}: subsets A_i with
// weights alpha_i >= 0 such that sum_i alpha_i * 1[l in A_i] = 1 for every l.
// Indices are 1-based to match the interchange file format.
struct UniformCover {
  int j = 0;
  std::vector<std::vector<int>> sets;
  std::vector<double> alphas;
};

// Throws std::invalid_argument unless the cover is uniform within `tol`,
// every set is a nonempty subset of {1..j} without duplicates, and every
// alpha is nonnegative (zero-weight sets are allowed and ignored).
void validate_cover(const UniformCover& cover, double tol = 1e-12);

// A_i = {1..j} \ {i} with alpha_i = 1/(j-1). Requires j >= 2.
UniformCover leave_one_out_cover(int j);

// Partition of {1..j} into singletons, alpha_i = 1.
UniformCover singleton_cover(int j);

// Random valid cover for property tests: either a random partition
// (alphas 1) or, for j >= 2, a leave-one-out cover.
UniformCover random_cover(int j, SplitMix64& rng);

}  // namespace qgeo
