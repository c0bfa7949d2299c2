#include "stclust/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stclust/errors.hpp"

namespace stclust {

namespace {
constexpr std::int32_t kLeafSize = 16;
}

PointIndex::PointIndex(const std::vector<PlanarPoint>& points, BackendKind kind) : kind_(kind) {
    const auto count = static_cast<std::int32_t>(points.size());
    xs_.resize(count);
    ys_.resize(count);
    for (std::int32_t i = 0; i < count; ++i) {
        xs_[i] = points[i].x;
        ys_[i] = points[i].y;
    }
    if (kind_ != BackendKind::KdTree || count == 0) return;

    order_.resize(count);
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * (count / kLeafSize + 1));
    root_ = build(0, count, 1);
    ox_.resize(count);
    oy_.resize(count);
    for (std::int32_t pos = 0; pos < count; ++pos) {
        ox_[pos] = xs_[order_[pos]];
        oy_[pos] = ys_[order_[pos]];
    }
}

std::int32_t PointIndex::build(std::int32_t begin, std::int32_t end, int level) {
    depth_ = std::max(depth_, level);
    Node node;
    node.xmin = node.ymin = std::numeric_limits<double>::infinity();
    node.xmax = node.ymax = -std::numeric_limits<double>::infinity();
    for (std::int32_t i = begin; i < end; ++i) {
        const double x = xs_[order_[i]], y = ys_[order_[i]];
        node.xmin = std::min(node.xmin, x);
        node.xmax = std::max(node.xmax, x);
        node.ymin = std::min(node.ymin, y);
        node.ymax = std::max(node.ymax, y);
    }
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeafSize) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }
    // Median split along the wider extent; tie on index keeps it deterministic.
    const bool split_x = (node.xmax - node.xmin) >= (node.ymax - node.ymin);
    const std::int32_t mid = begin + (end - begin) / 2;
    const auto& coords = split_x ? xs_ : ys_;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&coords](std::int32_t a, std::int32_t b) {
                         return coords[a] < coords[b] || (coords[a] == coords[b] && a < b);
                     });
    const std::int32_t left = build(begin, mid, level + 1);
    const std::int32_t right = build(mid, end, level + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void PointIndex::query(double px, double py, double epsilon,
                       std::vector<std::int32_t>& out) const {
    const double eps_sq = epsilon * epsilon;
    if (kind_ == BackendKind::LinearScan || root_ < 0) {
        const auto count = static_cast<std::int32_t>(xs_.size());
        for (std::int32_t i = 0; i < count; ++i) {
            const double dx = xs_[i] - px, dy = ys_[i] - py;
            if (dx * dx + dy * dy <= eps_sq) out.push_back(i);
        }
        return;  // ascending by construction
    }

    // Prune on the box distance only; every reported point still passes the
    // same dx*dx + dy*dy <= eps_sq test the linear scan uses, so the two
    // backends agree even on boundary ties.
    const std::size_t first = out.size();
    std::vector<std::int32_t> stack;
    stack.push_back(root_);
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        const double dx = std::max({0.0, node.xmin - px, px - node.xmax});
        const double dy = std::max({0.0, node.ymin - py, py - node.ymax});
        if (dx * dx + dy * dy > eps_sq) continue;
        if (node.left < 0) {
            for (std::int32_t pos = node.begin; pos < node.end; ++pos) {
                const double qx = ox_[pos] - px, qy = oy_[pos] - py;
                if (qx * qx + qy * qy <= eps_sq) out.push_back(order_[pos]);
            }
        } else {
            stack.push_back(node.right);
            stack.push_back(node.left);
        }
    }
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
}

RangeQueryBackend::RangeQueryBackend(const LabeledDataset& dataset, BackendKind kind)
    : kind_(kind),
      x_index_(dataset.relevant, kind),
      y_index_(dataset.irrelevant, kind) {}

RangeQueryBackend RangeQueryBackend::build(const LabeledDataset& dataset, BackendKind kind) {
    return RangeQueryBackend(dataset, kind);
}

void RangeQueryBackend::range_query(const PlanarPoint& p, double epsilon,
                                    std::vector<std::int32_t>& x_out,
                                    std::vector<std::int32_t>& y_out) const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw Error("range_query: epsilon must be finite and non-negative");
    x_out.clear();
    y_out.clear();
    queries_->fetch_add(1, std::memory_order_relaxed);
    x_index_.query(p.x, p.y, epsilon, x_out);
    y_index_.query(p.x, p.y, epsilon, y_out);
}

std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> RangeQueryBackend::range_query(
    const PlanarPoint& p, double epsilon) const {
    std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> result;
    range_query(p, epsilon, result.first, result.second);
    return result;
}

int RangeQueryBackend::tree_depth() const {
    return std::max(x_index_.depth(), y_index_.depth());
}

}  // namespace stclust
