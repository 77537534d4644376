#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bldet/common.hpp"
#include "bldet/geometry.hpp"

namespace bldet {

// Rectangular grid of per-pixel foreground probabilities in [0,1], row-major.
// Doubles as a binary mask when every value is exactly 0 or 1.
class ProbabilityGrid {
  public:
    ProbabilityGrid() = default;

    ProbabilityGrid(int width, int height, double fill = 0.0) : width_(width), height_(height) {
        if (width < 0 || height < 0) throw DimensionError("grid dimensions must be nonnegative");
        if (fill < 0.0 || fill > 1.0) throw InvalidMaskError("grid values must lie in [0,1]");
        values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    static ProbabilityGrid from_values(int width, int height, std::vector<double> values) {
        if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw DimensionError("value count does not match grid dimensions");
        for (double v : values)
            if (!(v >= 0.0 && v <= 1.0)) throw InvalidMaskError("grid values must lie in [0,1]");
        ProbabilityGrid g;
        g.width_ = width;
        g.height_ = height;
        g.values_ = std::move(values);
        return g;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return values_.size(); }

    double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    // Padded read: pixels outside the grid report `outside`.
    double at_or(int x, int y, double outside) const { return in_bounds(x, y) ? at(x, y) : outside; }

    const std::vector<double>& values() const { return values_; }

    bool is_binary() const {
        for (double v : values_)
            if (v != 0.0 && v != 1.0) return false;
        return true;
    }

    friend bool operator==(const ProbabilityGrid& a, const ProbabilityGrid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.values_ == b.values_;
    }

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

inline ProbabilityGrid threshold(const ProbabilityGrid& grid, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidMaskError("threshold must lie in [0,1]");
    ProbabilityGrid out(grid.width(), grid.height(), 0.0);
    for (int y = 0; y < grid.height(); ++y)
        for (int x = 0; x < grid.width(); ++x)
            if (grid.at(x, y) > t) out.at(x, y) = 1.0;  // strictly greater
    return out;
}

// Labeled foreground components. Label 0 is background; component ids are
// assigned in row-major order of each component's first pixel, so labeling is
// reproducible.
struct ComponentSet {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;   // row-major, 0 = background
    std::vector<std::int64_t> sizes;    // indexed by id; sizes[0] == 0

    int count() const { return static_cast<int>(sizes.size()) - 1; }
};

inline ComponentSet connected_components(const ProbabilityGrid& mask, int connectivity, std::int64_t min_size) {
    if (connectivity != 4 && connectivity != 8) throw InvalidMaskError("connectivity must be 4 or 8");
    if (!mask.is_binary()) throw InvalidMaskError("connected_components requires a binary mask");
    if (min_size < 1) min_size = 1;

    const int w = mask.width();
    const int h = mask.height();
    ComponentSet cs;
    cs.width = w;
    cs.height = h;
    cs.labels.assign(static_cast<std::size_t>(w) * h, 0);
    cs.sizes.push_back(0);

    std::vector<char> visited(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> member;

    static constexpr int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int n_dirs = connectivity == 4 ? 4 : 8;

    for (std::size_t start = 0; start < cs.labels.size(); ++start) {
        if (visited[start] || mask.values()[start] != 1.0) continue;
        member.clear();
        stack.assign(1, start);
        visited[start] = 1;
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            member.push_back(idx);
            const int x = static_cast<int>(idx % w);
            const int y = static_cast<int>(idx / w);
            for (int d = 0; d < n_dirs; ++d) {
                const int nx = x + dx8[d];
                const int ny = y + dy8[d];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                if (!visited[nidx] && mask.values()[nidx] == 1.0) {
                    visited[nidx] = 1;
                    stack.push_back(nidx);
                }
            }
        }
        if (static_cast<std::int64_t>(member.size()) < min_size) continue;  // relabeled background
        const auto id = static_cast<std::int32_t>(cs.sizes.size());
        cs.sizes.push_back(static_cast<std::int64_t>(member.size()));
        for (std::size_t idx : member) cs.labels[idx] = id;
    }
    return cs;
}

// Pixel centers of every surviving component, grouped by id (1-based ids map
// to index id-1).
inline std::vector<std::vector<Point>> component_points(const ComponentSet& cs) {
    std::vector<std::vector<Point>> out(static_cast<std::size_t>(cs.count()));
    for (int y = 0; y < cs.height; ++y)
        for (int x = 0; x < cs.width; ++x) {
            const std::int32_t id = cs.labels[static_cast<std::size_t>(y) * cs.width + x];
            if (id > 0) out[static_cast<std::size_t>(id) - 1].push_back({static_cast<double>(x), static_cast<double>(y)});
        }
    return out;
}

// Approximates a region by a closed polygon: rows are sampled every
// max(1, round(image_height/30)) pixels starting from the component's top row,
// the bottom row is always included, and each sampled row contributes its
// leftmost and rightmost pixel. The polygon walks the left chain downward and
// the right chain back up. Components that collapse to a single point are
// boxed by the four corners around their bounding box.
inline Polyline polygonize_region(std::span<const Point> component, int image_height) {
    if (component.empty()) throw EmptyInputError("cannot polygonize an empty component");
    const int step = std::max(1, static_cast<int>(std::lround(image_height / 30.0)));

    int y_min = static_cast<int>(component[0].y), y_max = y_min;
    int x_min = static_cast<int>(component[0].x), x_max = x_min;
    for (const Point& p : component) {
        y_min = std::min(y_min, static_cast<int>(p.y));
        y_max = std::max(y_max, static_cast<int>(p.y));
        x_min = std::min(x_min, static_cast<int>(p.x));
        x_max = std::max(x_max, static_cast<int>(p.x));
    }

    std::vector<int> rows;
    for (int r = y_min; r <= y_max; r += step) rows.push_back(r);
    if (rows.back() != y_max) rows.push_back(y_max);

    const int n_rows = y_max - y_min + 1;
    std::vector<int> left(static_cast<std::size_t>(n_rows), -1);
    std::vector<int> right(static_cast<std::size_t>(n_rows), -1);
    for (const Point& p : component) {
        const int r = static_cast<int>(p.y) - y_min;
        const int x = static_cast<int>(p.x);
        if (left[r] < 0 || x < left[r]) left[r] = x;
        if (right[r] < 0 || x > right[r]) right[r] = x;
    }

    std::vector<Point> pts;
    for (int r : rows)
        if (left[r - y_min] >= 0) pts.push_back({static_cast<double>(left[r - y_min]), static_cast<double>(r)});
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
        if (right[*it - y_min] >= 0) pts.push_back({static_cast<double>(right[*it - y_min]), static_cast<double>(*it)});

    std::vector<Point> dedup;
    for (const Point& p : pts)
        if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(p);
    if (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();

    if (dedup.size() < 2) {
        const double x0 = x_min, x1 = x_max + 1.0, y0 = y_min, y1 = y_max + 1.0;
        return Polyline{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
    }
    return Polyline{std::move(dedup)};
}

inline Polyline polygonize_region(const std::vector<Point>& component, int image_height) {
    return polygonize_region(std::span<const Point>(component.data(), component.size()), image_height);
}

// Paints the polyline as a vertical band: for every pixel column a segment
// spans, rows with center in [y - thickness/2, y + thickness/2) become
// foreground. Parts outside the canvas are clipped silently.
inline ProbabilityGrid rasterize_polyline(const Polyline& line, double thickness, int canvas_width, int canvas_height) {
    if (thickness < 1.0) throw InvalidMaskError("rasterization thickness must be >= 1");
    ProbabilityGrid out(canvas_width, canvas_height, 0.0);
    const double half = thickness / 2.0;

    auto paint_column = [&](int px, double y_lo, double y_hi) {
        if (px < 0 || px >= canvas_width) return;
        for (int py = static_cast<int>(std::ceil(y_lo - half)); py < y_hi + half; ++py)
            if (py >= 0 && py < canvas_height) out.at(px, py) = 1.0;
    };

    for (std::size_t i = 1; i < line.points.size(); ++i) {
        const Point& a = line.points[i - 1];
        const Point& b = line.points[i];
        const double lo_x = std::min(a.x, b.x);
        const double hi_x = std::max(a.x, b.x);
        if (a.x == b.x) {
            const int px = static_cast<int>(std::lround(a.x));
            if (a.x == std::floor(a.x)) paint_column(px, std::min(a.y, b.y), std::max(a.y, b.y));
            continue;
        }
        const double slope = (b.y - a.y) / (b.x - a.x);
        for (int px = static_cast<int>(std::ceil(lo_x)); px <= static_cast<int>(std::floor(hi_x)); ++px) {
            const double yc = a.y + (px - a.x) * slope;
            paint_column(px, yc, yc);
        }
    }
    return out;
}

}  // namespace bldet
