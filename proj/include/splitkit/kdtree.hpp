#pragma once

#include "splitkit/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace splitkit {

/// Exact nearest-neighbor index over the rows of a matrix, with lazy
/// deletion. Removed rows are tombstoned; once removals exceed half the
/// size at the last build, the tree is compacted over the live rows.
/// Queries return the exact Euclidean argmin among live rows, ties broken
/// by the smallest row index.
class NNIndex {
 public:
  explicit NNIndex(const Matrix& data)
      : data_(data), live_(static_cast<std::size_t>(data.rows()), 1) {
    if (data_.rows() < 1) throw std::invalid_argument("NNIndex: empty data");
    live_count_ = data_.rows();
    std::vector<Index> rows(static_cast<std::size_t>(data_.rows()));
    std::iota(rows.begin(), rows.end(), Index{0});
    build(rows);
  }

  Index size() const { return data_.rows(); }
  Index live_count() const { return live_count_; }
  bool is_live(Index row) const { return live_[static_cast<std::size_t>(row)] != 0; }
  int rebuilds() const { return rebuilds_; }

  /// Nearest live row to q and its Euclidean distance.
  std::pair<Index, double> nearest(const Eigen::Ref<const Eigen::RowVectorXd>& q) const {
    if (live_count_ < 1) throw std::runtime_error("NNIndex::nearest: empty index");
    if (q.size() != data_.cols())
      throw std::invalid_argument("NNIndex::nearest: dimension mismatch");
    Best best;
    search(root_, q.data(), best);
    return {best.row, std::sqrt(best.d2)};
  }

  /// Tombstones a live row; compacts the tree when more than half of the
  /// rows present at the last build have been removed since.
  void remove(Index row) {
    if (row < 0 || row >= data_.rows())
      throw std::invalid_argument("NNIndex::remove: row out of range");
    if (!live_[static_cast<std::size_t>(row)])
      throw std::invalid_argument("NNIndex::remove: row already removed");
    live_[static_cast<std::size_t>(row)] = 0;
    --live_count_;
    if (++removed_since_build_ > built_count_ / 2) {
      std::vector<Index> rows;
      rows.reserve(static_cast<std::size_t>(live_count_));
      for (Index r = 0; r < data_.rows(); ++r)
        if (live_[static_cast<std::size_t>(r)]) rows.push_back(r);
      build(rows);
      ++rebuilds_;
    }
  }

 private:
  struct Node {
    Index row = -1;
    int axis = 0;
    Index left = -1;
    Index right = -1;
  };

  struct Best {
    double d2 = std::numeric_limits<double>::infinity();
    Index row = -1;
  };

  void build(std::vector<Index>& rows) {
    nodes_.clear();
    nodes_.reserve(rows.size());
    root_ = build_range(rows, 0, static_cast<Index>(rows.size()));
    built_count_ = static_cast<Index>(rows.size());
    removed_since_build_ = 0;
  }

  Index build_range(std::vector<Index>& rows, Index lo, Index hi) {
    if (lo >= hi) return -1;
    // Split on the coordinate with the widest spread over this subset.
    int axis = 0;
    double best_spread = -1.0;
    for (int k = 0; k < data_.cols(); ++k) {
      double mn = data_(rows[static_cast<std::size_t>(lo)], k);
      double mx = mn;
      for (Index t = lo + 1; t < hi; ++t) {
        const double v = data_(rows[static_cast<std::size_t>(t)], k);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      if (mx - mn > best_spread) {
        best_spread = mx - mn;
        axis = k;
      }
    }
    const Index mid = lo + (hi - lo) / 2;
    std::nth_element(rows.begin() + lo, rows.begin() + mid, rows.begin() + hi,
                     [&](Index a, Index b) {
                       const double va = data_(a, axis);
                       const double vb = data_(b, axis);
                       return va < vb || (va == vb && a < b);
                     });
    const Index id = static_cast<Index>(nodes_.size());
    nodes_.push_back({rows[static_cast<std::size_t>(mid)], axis, -1, -1});
    const Index left = build_range(rows, lo, mid);
    const Index right = build_range(rows, mid + 1, hi);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  void search(Index node_id, const double* q, Best& best) const {
    if (node_id < 0) return;
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (live_[static_cast<std::size_t>(node.row)]) {
      const double d2 = detail::squared_distance(q, data_.row(node.row).data(), data_.cols());
      if (d2 < best.d2 || (d2 == best.d2 && node.row < best.row)) {
        best.d2 = d2;
        best.row = node.row;
      }
    }
    const double diff = q[node.axis] - data_(node.row, node.axis);
    const Index near = diff < 0.0 ? node.left : node.right;
    const Index far = diff < 0.0 ? node.right : node.left;
    search(near, q, best);
    // <= keeps equal-distance candidates reachable for the index tie-break.
    if (diff * diff <= best.d2) search(far, q, best);
  }

  Matrix data_;
  std::vector<Node> nodes_;
  std::vector<char> live_;
  Index root_ = -1;
  Index live_count_ = 0;
  Index built_count_ = 0;
  Index removed_since_build_ = 0;
  int rebuilds_ = 0;
};

}  // namespace splitkit
