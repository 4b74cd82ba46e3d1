// Copyright 2026 The svx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace svx {

/// Union-find with path halving and union by size. Roots carry the region
/// statistics the graph-based merge needs: voxel size, internal difference
/// Int(R), and a "carried" flag for regions that already reached output.
class RegionForest {
 public:
  RegionForest() = default;

  /// `n` singleton regions of size 1.
  explicit RegionForest(std::size_t n) : parent_(n), size_(n, 1), internal_(n, 0.0), carried_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0u);
    regions_ = n;
  }

  /// Singleton regions with explicit initial sizes (zero is allowed for nodes
  /// that only stand in for an already-counted region).
  explicit RegionForest(std::vector<std::uint64_t> sizes)
      : parent_(sizes.size()), size_(std::move(sizes)), internal_(size_.size(), 0.0), carried_(size_.size(), 0) {
    std::iota(parent_.begin(), parent_.end(), 0u);
    regions_ = parent_.size();
  }

  std::size_t node_count() const { return parent_.size(); }
  std::size_t region_count() const { return regions_; }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Root of `x` without path compression.
  std::uint32_t root(std::uint32_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  /// Joins two distinct roots; returns the surviving root. Int and the
  /// carried flag of the survivor are the max / OR of both.
  std::uint32_t join(std::uint32_t a, std::uint32_t b) {
    if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    internal_[a] = std::max(internal_[a], internal_[b]);
    carried_[a] = carried_[a] | carried_[b];
    --regions_;
    return a;
  }

  std::uint64_t size(std::uint32_t root) const { return size_[root]; }
  void set_size(std::uint32_t root, std::uint64_t s) { size_[root] = s; }
  double internal(std::uint32_t root) const { return internal_[root]; }
  void set_internal(std::uint32_t root, double v) { internal_[root] = v; }
  bool carried(std::uint32_t root) const { return carried_[root] != 0; }
  void set_carried(std::uint32_t root) { carried_[root] = 1; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint64_t> size_;
  std::vector<double> internal_;
  std::vector<std::uint8_t> carried_;
  std::size_t regions_ = 0;
};

}  // namespace svx
