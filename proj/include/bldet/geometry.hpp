#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "bldet/common.hpp"

namespace bldet {

inline constexpr double kPi = 3.14159265358979323846;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Straight candidate line. Construction canonicalizes the orientation:
// s.x <= e.x, and s.y <= e.y when the segment is vertical, so that
// "rightward" and "leftward" are well defined downstream.
struct LineSegment {
    Point s;
    Point e;

    LineSegment() = default;
    LineSegment(Point a, Point b) : s(a), e(b) {
        if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(b.x) || !std::isfinite(b.y))
            throw DegenerateGeometryError("line segment endpoints must be finite");
        if (e.x < s.x || (e.x == s.x && e.y < s.y)) std::swap(s, e);
    }

    double length() const { return distance(s, e); }
    Point midpoint() const { return {(s.x + e.x) / 2.0, (s.y + e.y) / 2.0}; }

    friend bool operator==(const LineSegment& a, const LineSegment& b) { return a.s == b.s && a.e == b.e; }
};

inline double segment_length(const LineSegment& l) { return l.length(); }

// Absolute acute angle between the segment's carrier line and the horizontal,
// in degrees within [0, 90].
inline double angle_to_horizontal(const LineSegment& l) {
    const double dx = l.e.x - l.s.x;
    const double dy = l.e.y - l.s.y;
    if (dx == 0.0 && dy == 0.0) throw DegenerateGeometryError("angle of a zero-length segment is undefined");
    return std::atan2(std::abs(dy), std::abs(dx)) * 180.0 / kPi;
}

struct Projection {
    double t;         // normalized parameter along the carrier line; in [0,1] iff on the segment
    double distance;  // perpendicular distance from the point to the carrier line
};

inline Projection project_onto(const LineSegment& l, const Point& p) {
    const double dx = l.e.x - l.s.x;
    const double dy = l.e.y - l.s.y;
    const double len_sq = dx * dx + dy * dy;
    if (len_sq == 0.0) throw DegenerateGeometryError("cannot project onto a zero-length segment");
    const double px = p.x - l.s.x;
    const double py = p.y - l.s.y;
    const double t = (px * dx + py * dy) / len_sq;
    const double dist = std::abs(dx * py - dy * px) / std::sqrt(len_sq);
    return {t, dist};
}

// Coverage predicate for error pruning: l1 is covered by l2 when both of its
// endpoints project inside the segment l2 and the closer endpoint is nearer
// than d_max to l2's carrier line. Perpendicular distance is affine along l1,
// so the endpoint check suffices.
inline bool is_covered_by(const LineSegment& l1, const LineSegment& l2, double d_max) {
    if (l1.length() == 0.0 || l2.length() == 0.0)
        throw DegenerateGeometryError("coverage of degenerate segments is undefined");
    const Projection ps = project_onto(l2, l1.s);
    const Projection pe = project_onto(l2, l1.e);
    if (ps.t < 0.0 || ps.t > 1.0 || pe.t < 0.0 || pe.t > 1.0) return false;
    return std::min(ps.distance, pe.distance) < d_max;
}

// Total-least-squares fit: the line through the centroid along the principal
// axis of the point cloud, which minimizes summed squared perpendicular
// distance. Segment endpoints are the projections of the two extreme points
// onto that line. Isotropic clouds fall back to the horizontal axis.
inline LineSegment fit_segment(std::span<const Point> pixels) {
    if (pixels.size() < 2) throw DegenerateGeometryError("need at least 2 points to fit a segment");
    const double n = static_cast<double>(pixels.size());
    double cx = 0.0, cy = 0.0;
    for (const Point& p : pixels) {
        cx += p.x;
        cy += p.y;
    }
    cx /= n;
    cy /= n;

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    bool all_equal = true;
    for (const Point& p : pixels) {
        const double dx = p.x - cx;
        const double dy = p.y - cy;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
        if (!(p == pixels[0])) all_equal = false;
    }
    if (all_equal) throw DegenerateGeometryError("need at least 2 distinct points to fit a segment");

    double theta;
    if (sxy == 0.0) {
        theta = (sxx >= syy) ? 0.0 : kPi / 2.0;  // equal moments tie toward horizontal
    } else {
        theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    }
    const double ux = std::cos(theta);
    const double uy = std::sin(theta);

    double t_min = 0.0, t_max = 0.0;
    bool first = true;
    for (const Point& p : pixels) {
        const double t = (p.x - cx) * ux + (p.y - cy) * uy;
        if (first || t < t_min) t_min = t;
        if (first || t > t_max) t_max = t;
        first = false;
    }
    return LineSegment({cx + t_min * ux, cy + t_min * uy}, {cx + t_max * ux, cy + t_max * uy});
}

inline LineSegment fit_segment(const std::vector<Point>& pixels) {
    return fit_segment(std::span<const Point>(pixels.data(), pixels.size()));
}

// Ordered point chain; a baseline, poly-baseline, or closed region boundary.
struct Polyline {
    std::vector<Point> points;

    double length() const {
        double total = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
        return total;
    }

    friend bool operator==(const Polyline& a, const Polyline& b) { return a.points == b.points; }
};

inline void validate_polyline(const Polyline& line) {
    if (line.points.size() < 2) throw DegenerateGeometryError("polyline needs at least 2 points");
    for (std::size_t i = 1; i < line.points.size(); ++i)
        if (line.points[i] == line.points[i - 1]) throw DegenerateGeometryError("polyline has repeated consecutive points");
}

inline double point_segment_distance(const Point& p, const Point& a, const Point& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len_sq = dx * dx + dy * dy;
    if (len_sq == 0.0) return distance(p, a);
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, {a.x + t * dx, a.y + t * dy});
}

inline double point_polyline_distance(const Point& p, const Polyline& line) {
    double best = distance(p, line.points.front());
    for (std::size_t i = 1; i < line.points.size(); ++i)
        best = std::min(best, point_segment_distance(p, line.points[i - 1], line.points[i]));
    return best;
}

// Even-odd test against a closed polygon (last vertex implicitly joined to
// the first). Points on the boundary count as inside.
inline bool point_in_polygon(const Point& p, const Polyline& polygon) {
    const auto& pts = polygon.points;
    if (pts.size() < 2) return false;
    bool inside = false;
    for (std::size_t i = 0, j = pts.size() - 1; i < pts.size(); j = i++) {
        const Point& a = pts[j];
        const Point& b = pts[i];
        if (point_segment_distance(p, a, b) < 1e-9) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

}  // namespace bldet
