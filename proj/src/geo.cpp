#include "stclust/geo.hpp"

#include <algorithm>
#include <cmath>

#include "stclust/errors.hpp"

namespace stclust {

namespace {
constexpr double kPi = 3.14159265358979323846;

double cross(const PlanarPoint& o, const PlanarPoint& a, const PlanarPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool inside_convex(const Polygon& poly, double px, double py) {
    const std::size_t k = poly.size();
    if (k < 3) return false;
    for (std::size_t i = 0; i < k; ++i) {
        const PlanarPoint& a = poly[i];
        const PlanarPoint& b = poly[(i + 1) % k];
        if ((b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x) < 0.0) return false;
    }
    return true;
}

bool inside_disk(const Disk& d, double px, double py) {
    const double dx = px - d.cx, dy = py - d.cy;
    return dx * dx + dy * dy <= d.radius * d.radius;
}
}  // namespace

Projection Projection::at(double origin_lat, double origin_lon) {
    if (!std::isfinite(origin_lat) || origin_lat < -90.0 || origin_lat > 90.0)
        throw OutOfRangeCoordinate("projection origin latitude outside [-90, 90]");
    if (!std::isfinite(origin_lon) || origin_lon < -180.0 || origin_lon > 180.0)
        throw OutOfRangeCoordinate("projection origin longitude outside [-180, 180]");
    Projection p;
    p.origin_lat = origin_lat;
    p.origin_lon = origin_lon;
    p.meters_per_deg_lat = kMetersPerDegLat;
    p.meters_per_deg_lon = kMetersPerDegLat * std::cos(origin_lat * kPi / 180.0);
    return p;
}

PlanarPoint project(double lat, double lon, const Projection& proj, std::int32_t source_index) {
    if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0)
        throw OutOfRangeCoordinate("latitude outside [-90, 90]");
    if (!std::isfinite(lon) || lon < -180.0 || lon > 180.0)
        throw OutOfRangeCoordinate("longitude outside [-180, 180]");
    return {(lon - proj.origin_lon) * proj.meters_per_deg_lon,
            (lat - proj.origin_lat) * proj.meters_per_deg_lat, source_index};
}

std::pair<double, double> unproject(double x, double y, const Projection& proj) {
    return {proj.origin_lat + y / proj.meters_per_deg_lat,
            proj.origin_lon + x / proj.meters_per_deg_lon};
}

double dist_sq(const PlanarPoint& a, const PlanarPoint& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double dist(const PlanarPoint& a, const PlanarPoint& b) { return std::sqrt(dist_sq(a, b)); }

Polygon convex_hull(std::vector<PlanarPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const PlanarPoint& a, const PlanarPoint& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const PlanarPoint& a, const PlanarPoint& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;

    // Monotone chain; popping on cross <= 0 drops collinear interior points.
    Polygon hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower hull
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper hull
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // last point == first point
    return hull;
}

double polygon_area(const Polygon& poly) {
    if (poly.size() < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0, k = poly.size(); i < k; ++i) {
        const PlanarPoint& a = poly[i];
        const PlanarPoint& b = poly[(i + 1) % k];
        acc += a.x * b.y - b.x * a.y;
    }
    return std::abs(acc) * 0.5;
}

double union_area(const ShapeUnion& shapes, double cell_size) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size))
        throw Error("union_area: cell_size must be positive");

    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool any = false;
    auto grow = [&](double x, double y) {
        if (!any) {
            xmin = xmax = x;
            ymin = ymax = y;
            any = true;
        } else {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    };
    for (const auto& poly : shapes.polygons)
        for (const auto& v : poly) grow(v.x, v.y);
    for (const auto& d : shapes.disks) {
        grow(d.cx - d.radius, d.cy - d.radius);
        grow(d.cx + d.radius, d.cy + d.radius);
    }
    if (!any) return 0.0;
    if (shapes.clip) {
        const Disk& c = *shapes.clip;
        if (c.radius <= 0.0) return 0.0;
        xmin = std::max(xmin, c.cx - c.radius);
        xmax = std::min(xmax, c.cx + c.radius);
        ymin = std::max(ymin, c.cy - c.radius);
        ymax = std::min(ymax, c.cy + c.radius);
        if (xmin >= xmax || ymin >= ymax) return 0.0;
    }

    const auto nx = static_cast<std::int64_t>(std::ceil((xmax - xmin) / cell_size));
    const auto ny = static_cast<std::int64_t>(std::ceil((ymax - ymin) / cell_size));
    if (nx <= 0 || ny <= 0) return 0.0;
    if (nx * ny > 250'000'000)
        throw Error("union_area: raster would exceed 250M cells; use a coarser cell_size");

    std::int64_t inside = 0;
    for (std::int64_t iy = 0; iy < ny; ++iy) {
        const double py = ymin + (static_cast<double>(iy) + 0.5) * cell_size;
        for (std::int64_t ix = 0; ix < nx; ++ix) {
            const double px = xmin + (static_cast<double>(ix) + 0.5) * cell_size;
            if (shapes.clip && !inside_disk(*shapes.clip, px, py)) continue;
            bool hit = false;
            for (const auto& poly : shapes.polygons)
                if (inside_convex(poly, px, py)) {
                    hit = true;
                    break;
                }
            if (!hit)
                for (const auto& d : shapes.disks)
                    if (inside_disk(d, px, py)) {
                        hit = true;
                        break;
                    }
            inside += hit;
        }
    }
    return static_cast<double>(inside) * cell_size * cell_size;
}

double polygon_union_area(const std::vector<Polygon>& polygons, double cell_size) {
    ShapeUnion u;
    u.polygons = polygons;
    return union_area(u, cell_size);
}

}  // namespace stclust
