#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "stclust/core.hpp"

namespace stclust {

// Meters per degree of latitude in the local equirectangular frame.
inline constexpr double kMetersPerDegLat = 111320.0;

// Local equirectangular projection anchored at (origin_lat, origin_lon).
// x grows east, y grows north, both in meters. Good for city-scale regions;
// not valid at the poles (cos(origin_lat) -> 0 collapses longitudes).
struct Projection {
    double origin_lat = 0.0;
    double origin_lon = 0.0;
    double meters_per_deg_lat = kMetersPerDegLat;
    double meters_per_deg_lon = kMetersPerDegLat;

    static Projection at(double origin_lat, double origin_lon);
};

PlanarPoint project(double lat, double lon, const Projection& proj,
                    std::int32_t source_index = -1);

// Inverse of project: planar meters back to (lat, lon) degrees.
std::pair<double, double> unproject(double x, double y, const Projection& proj);

double dist(const PlanarPoint& a, const PlanarPoint& b);
double dist_sq(const PlanarPoint& a, const PlanarPoint& b);

// Vertices in order; convex, counter-clockwise when produced by convex_hull.
using Polygon = std::vector<PlanarPoint>;

struct Disk {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

// Counter-clockwise convex hull (monotone chain). Collinear points interior
// to an edge are dropped. Degenerate inputs come back as-is: one point -> one
// vertex, all-collinear -> the two extreme endpoints. Duplicates collapse.
Polygon convex_hull(std::vector<PlanarPoint> points);

// Signed-area-free polygon area via the shoelace formula (0 for < 3 vertices).
double polygon_area(const Polygon& poly);

// Area of a union of convex polygons and disks, optionally clipped to a disk,
// estimated by counting raster cells (of cell_size meters) whose centers fall
// inside. Exact up to O(perimeter * cell_size).
struct ShapeUnion {
    std::vector<Polygon> polygons;
    std::vector<Disk> disks;
    std::optional<Disk> clip;
};

double union_area(const ShapeUnion& shapes, double cell_size = 10.0);

// Convenience wrapper for polygon-only unions.
double polygon_union_area(const std::vector<Polygon>& polygons, double cell_size = 10.0);

}  // namespace stclust
