#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "quenchlab/error.hpp"

namespace quenchlab {

using SiteIndex = int;
using SitePair = std::pair<SiteIndex, SiteIndex>;

/// Finite box of Z^d with free boundaries. Sites are numbered in row-major
/// order with coordinate 0 varying fastest.
class SiteLattice {
 public:
  SiteLattice(int dimension, std::vector<int> sides) : sides_(std::move(sides)) {
    if (dimension < 1) throw InvalidArgument("lattice dimension must be >= 1");
    if (static_cast<int>(sides_.size()) != dimension)
      throw InvalidArgument("lattice needs exactly one side length per dimension");
    size_ = 1;
    for (int s : sides_) {
      if (s < 1) throw InvalidArgument("lattice sides must be >= 1");
      size_ *= s;
    }
    strides_.resize(sides_.size());
    int stride = 1;
    for (std::size_t a = 0; a < sides_.size(); ++a) {
      strides_[a] = stride;
      stride *= sides_[a];
    }
  }

  int dimension() const { return static_cast<int>(sides_.size()); }
  const std::vector<int>& sides() const { return sides_; }
  int size() const { return size_; }

  std::vector<int> coordinates(SiteIndex site) const {
    std::vector<int> coords(sides_.size());
    for (std::size_t a = 0; a < sides_.size(); ++a) coords[a] = (site / strides_[a]) % sides_[a];
    return coords;
  }

  SiteIndex index(const std::vector<int>& coords) const {
    SiteIndex site = 0;
    for (std::size_t a = 0; a < sides_.size(); ++a) site += coords[a] * strides_[a];
    return site;
  }

  double distance(SiteIndex a, SiteIndex b) const {
    const auto ca = coordinates(a);
    const auto cb = coordinates(b);
    double sq = 0.0;
    for (std::size_t k = 0; k < ca.size(); ++k) {
      const double diff = ca[k] - cb[k];
      sq += diff * diff;
    }
    return std::sqrt(sq);
  }

  /// Unordered nearest-neighbour pairs (i < j), no wraparound.
  std::vector<SitePair> nearest_neighbor_pairs() const {
    std::vector<SitePair> pairs;
    for (SiteIndex i = 0; i < size_; ++i) {
      const auto c = coordinates(i);
      for (std::size_t a = 0; a < sides_.size(); ++a)
        if (c[a] + 1 < sides_[a]) pairs.emplace_back(i, i + strides_[a]);
    }
    return pairs;
  }

  /// Every unordered pair of distinct sites (i < j).
  std::vector<SitePair> all_pairs() const {
    std::vector<SitePair> pairs;
    for (SiteIndex i = 0; i < size_; ++i)
      for (SiteIndex j = i + 1; j < size_; ++j) pairs.emplace_back(i, j);
    return pairs;
  }

  bool operator==(const SiteLattice&) const = default;

 private:
  std::vector<int> sides_;
  std::vector<int> strides_;
  int size_ = 0;
};

inline SiteLattice build_lattice(int dimension, std::vector<int> sides) {
  return SiteLattice(dimension, std::move(sides));
}

}  // namespace quenchlab
