#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "stclust/core.hpp"

namespace stclust {

enum class BackendKind : std::uint8_t { LinearScan, KdTree };

// Immutable range-query structure over one point set. Kd-tree variant uses
// median splits (wider-extent axis, ties to x) with leaf size 16; the linear
// variant scans. Both report exactly the points with dist(p, q) <= epsilon,
// by ascending original index, so backends are interchangeable bit-for-bit.
class PointIndex {
public:
    PointIndex() = default;
    PointIndex(const std::vector<PlanarPoint>& points, BackendKind kind);

    void query(double px, double py, double epsilon, std::vector<std::int32_t>& out) const;

    std::int32_t size() const { return static_cast<std::int32_t>(xs_.size()); }
    int depth() const { return depth_; }

private:
    struct Node {
        double xmin, xmax, ymin, ymax;
        std::int32_t left = -1, right = -1;  // -1 on leaves
        std::int32_t begin = 0, end = 0;     // leaf range into order_
    };

    std::int32_t build(std::int32_t begin, std::int32_t end, int level);

    BackendKind kind_ = BackendKind::LinearScan;
    std::vector<double> xs_, ys_;           // original index order
    std::vector<std::int32_t> order_;       // kd permutation: position -> index
    std::vector<double> ox_, oy_;           // coordinates in permuted order
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    int depth_ = 0;
};

// Paired indexes over the relevant and irrelevant sets of a dataset. One
// range_query call resolves both sides and bumps the query counter once.
// Queries are const and safe to issue concurrently; the dataset is copied in,
// so the backend owns everything it needs.
class RangeQueryBackend {
public:
    RangeQueryBackend() = default;
    RangeQueryBackend(const LabeledDataset& dataset, BackendKind kind);

    static RangeQueryBackend build(const LabeledDataset& dataset, BackendKind kind);

    // Appends nothing; out vectors are cleared first. Sorted ascending.
    void range_query(const PlanarPoint& p, double epsilon, std::vector<std::int32_t>& x_out,
                     std::vector<std::int32_t>& y_out) const;

    std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> range_query(
        const PlanarPoint& p, double epsilon) const;

    BackendKind kind() const { return kind_; }
    std::int32_t n() const { return x_index_.size(); }
    std::int32_t m() const { return y_index_.size(); }
    int tree_depth() const;  // max over both trees; 0 for LinearScan

    // Number of range_query calls since build/reset; the visit-once invariant
    // of the clustering walks is asserted against this.
    std::uint64_t query_count() const { return queries_->load(std::memory_order_relaxed); }
    void reset_query_count() const { queries_->store(0, std::memory_order_relaxed); }

private:
    BackendKind kind_ = BackendKind::LinearScan;
    PointIndex x_index_, y_index_;
    std::unique_ptr<std::atomic<std::uint64_t>> queries_ =
        std::make_unique<std::atomic<std::uint64_t>>(0);
};

}  // namespace stclust
