#include "qgeo/covers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qgeo/rng.hpp"

namespace qgeo {

void validate_cover(const UniformCover& cover, double tol) {
  if (cover.j < 1) throw std::invalid_argument("cover: j must be >= 1");
  if (cover.sets.size() != cover.alphas.size())
    throw std::invalid_argument("cover: sets and alphas must have the same length");
  std::vector<double> load(static_cast<std::size_t>(cover.j), 0.0);
  for (std::size_t i = 0; i < cover.sets.size(); ++i) {
    const auto& set = cover.sets[i];
    double alpha = cover.alphas[i];
    if (!(alpha >= 0.0))
      throw std::invalid_argument("cover: alphas must be nonnegative (set " + std::to_string(i) + ")");
    if (set.empty() && alpha > 0.0)
      throw std::invalid_argument("cover: empty set with positive weight (set " + std::to_string(i) + ")");
    std::vector<int> sorted = set;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t c = 0; c < sorted.size(); ++c) {
      int l = sorted[c];
      if (l < 1 || l > cover.j)
        throw std::invalid_argument("cover: index " + std::to_string(l) + " outside 1.." +
                                    std::to_string(cover.j));
      if (c > 0 && sorted[c - 1] == l)
        throw std::invalid_argument("cover: duplicate index " + std::to_string(l) + " in set " +
                                    std::to_string(i));
      load[static_cast<std::size_t>(l - 1)] += alpha;
    }
  }
  for (int l = 0; l < cover.j; ++l) {
    if (std::abs(load[static_cast<std::size_t>(l)] - 1.0) > tol)
      throw std::invalid_argument("cover: index " + std::to_string(l + 1) + " has total weight " +
                                  std::to_string(load[static_cast<std::size_t>(l)]) +
                                  ", expected 1 within tolerance");
  }
}

UniformCover leave_one_out_cover(int j) {
  if (j < 2) throw std::invalid_argument("leave_one_out_cover: requires j >= 2");
  UniformCover cover;
  cover.j = j;
  for (int i = 1; i <= j; ++i) {
    std::vector<int> set;
    for (int l = 1; l <= j; ++l)
      if (l != i) set.push_back(l);
    cover.sets.push_back(std::move(set));
    cover.alphas.push_back(1.0 / (j - 1));
  }
  return cover;
}

UniformCover singleton_cover(int j) {
  if (j < 1) throw std::invalid_argument("singleton_cover: requires j >= 1");
  UniformCover cover;
  cover.j = j;
  for (int i = 1; i <= j; ++i) {
    cover.sets.push_back({i});
    cover.alphas.push_back(1.0);
  }
  return cover;
}

UniformCover random_cover(int j, SplitMix64& rng) {
  if (j >= 2 && rng.next_double() < 0.5) return leave_one_out_cover(j);
  // Random partition: assign each index to one of up to j blocks.
  int blocks = 1 + static_cast<int>(rng.next_double() * j);
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(blocks));
  for (int l = 1; l <= j; ++l) {
    int b = static_cast<int>(rng.next_double() * blocks);
    if (b >= blocks) b = blocks - 1;
    sets[static_cast<std::size_t>(b)].push_back(l);
  }
  UniformCover cover;
  cover.j = j;
  for (auto& s : sets) {
    if (s.empty()) continue;
    cover.sets.push_back(std::move(s));
    cover.alphas.push_back(1.0);
  }
  return cover;
}

}  // namespace qgeo
