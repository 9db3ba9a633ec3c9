#pragma once

#include <vector>

#include "agsense/common/error.hpp"
#include "agsense/common/rng.hpp"

namespace agsense::data {

// k disjoint, covering folds; returns per-sample fold assignment.
// Stratified mode shuffles within each class and deals onto folds with a
// global cursor, so fold sizes differ by at most one and each class is
// split as evenly as possible (class ratio within +-1 sample per fold).
inline std::vector<int> kfold_split(const std::vector<int>& labels, int k,
                                    uint64_t seed, bool stratified) {
  std::size_t n = labels.size();
  if (k < 2) throw ValidationError("k-fold: k must be at least 2");
  if (static_cast<std::size_t>(k) > n)
    throw ValidationError("k-fold: k=" + std::to_string(k) +
                          " exceeds sample count " + std::to_string(n));
  std::vector<int> fold(n, -1);
  Rng rng(derive_seed(seed, "kfold"));
  if (!stratified) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t i = 0; i < n; ++i)
      fold[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return fold;
  }

  // collect distinct classes in first-appearance order
  std::vector<int> classes;
  for (int y : labels) {
    bool seen = false;
    for (int c : classes)
      if (c == y) seen = true;
    if (!seen) classes.push_back(y);
  }
  std::size_t cursor = 0;
  for (int c : classes) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] == c) members.push_back(i);
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i) {
      fold[members[i]] =
          static_cast<int>((cursor + i) % static_cast<std::size_t>(k));
    }
    cursor += members.size();
  }
  return fold;
}

}  // namespace agsense::data
