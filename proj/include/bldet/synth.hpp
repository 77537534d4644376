#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bldet/common.hpp"
#include "bldet/docmodel.hpp"
#include "bldet/geometry.hpp"
#include "bldet/raster.hpp"

namespace bldet {

// Synthetic page description. Pages carry enough variation (skew, leading,
// columns, optional marginalia) to exercise every downstream stage; the
// "text" is noisy stroke bodies above each baseline, not glyphs, since the
// pipeline only ever consumes masks.
struct SynthSpec {
    int page_w = 1200;
    int page_h = 1600;
    int n_lines = 12;
    double leading = 40.0;  // vertical distance between successive baselines, pixels
    double skew = 1.0;      // per-line tilt drawn from [-skew, skew] degrees
    int columns = 1;
    bool margin_text = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (page_w < 32 || page_h < 32) throw InvalidDocumentError("synthetic page must be at least 32 x 32");
        if (n_lines < 0) throw InvalidDocumentError("n_lines must be nonnegative");
        if (!(leading > 0.0)) throw InvalidDocumentError("leading must be positive");
        if (columns != 1 && columns != 2) throw InvalidDocumentError("columns must be 1 or 2");
    }
};

struct SynthPage {
    ProbabilityGrid image;  // grayscale page, 1.0 = paper white
    std::vector<Polyline> baselines;
    std::vector<Polyline> regions;  // closed polygons, one per text block
    DocumentProperties props;
};

namespace detail {

struct BlockExtent {
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    bool any = false;

    void include(const Point& p, double body_height) {
        if (!any) {
            min_x = max_x = p.x;
            min_y = p.y - body_height;
            max_y = p.y;
            any = true;
        } else {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y - body_height);
            max_y = std::max(max_y, p.y);
        }
    }
};

inline void ink(ProbabilityGrid& image, int x, int y, double value) {
    if (image.in_bounds(x, y) && value < image.at(x, y)) image.at(x, y) = value;
}

// Stroke bodies: short vertical runs of varying darkness and height above the
// baseline, grouped into words with gaps.
inline void render_text_body(ProbabilityGrid& image, Rng& rng, const Point& left, const Point& right, double body_height) {
    const double dx = right.x - left.x;
    if (dx < 1.0) return;
    const double slope = (right.y - left.y) / dx;
    double x = left.x;
    while (x < right.x) {
        const double word_end = std::min(right.x, x + rng.in(35.0, 90.0));
        for (; x < word_end; x += 1.0) {
            const double yb = left.y + (x - left.x) * slope;
            const double darkness = rng.in(0.05, 0.45);
            const double top = yb - body_height * rng.in(0.6, 1.0);
            const double bottom = yb - rng.in(0.0, 1.5);
            for (int py = static_cast<int>(std::ceil(top)); py <= static_cast<int>(std::floor(bottom)); ++py)
                ink(image, static_cast<int>(std::lround(x)), py, darkness);
            if (rng.chance(0.04)) {  // occasional descender
                for (int py = static_cast<int>(yb); py <= static_cast<int>(yb + 0.4 * body_height); ++py)
                    ink(image, static_cast<int>(std::lround(x)), py, darkness);
            }
        }
        x += rng.in(8.0, 24.0);
    }
}

// Lays `count` baselines into [x0, x1] starting at y_start and renders their
// bodies. All lines share the page tilt; per-line jitter is bounded by the
// leading so successive baselines never converge or cross.
inline void render_block(ProbabilityGrid& image, Rng& rng, const SynthSpec& spec, double page_tilt, double x0, double x1,
                         double y_start, int count, double body_height, std::vector<Polyline>& baselines,
                         BlockExtent& extent) {
    for (int k = 0; k < count; ++k) {
        const double y_mid = y_start + k * spec.leading;
        const double indent_l = (k == 0) ? rng.in(0.0, 30.0) : rng.in(0.0, 8.0);
        const double indent_r = rng.in(0.0, 40.0);
        const double xl = x0 + indent_l;
        const double xr = std::max(xl + 20.0, x1 - indent_r);
        const double half = (xr - xl) / 2.0;
        const double jitter_bound = std::atan(0.2 * spec.leading / std::max(half, 1.0));
        const double angle = page_tilt + rng.in(-jitter_bound, jitter_bound);
        const double tilt = std::tan(angle);
        const Point left{xl, y_mid - tilt * half};
        const Point right{xr, y_mid + tilt * half};
        baselines.push_back(Polyline{{left, right}});
        extent.include(left, body_height);
        extent.include(right, body_height);
        render_text_body(image, rng, left, right, body_height);
    }
}

inline Polyline extent_polygon(const BlockExtent& e, double pad) {
    return Polyline{{{e.min_x - pad, e.min_y - pad},
                     {e.max_x + pad, e.min_y - pad},
                     {e.max_x + pad, e.max_y + pad},
                     {e.min_x - pad, e.max_y + pad}}};
}

}  // namespace detail

inline SynthPage generate_page(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    SynthPage page;
    page.image = ProbabilityGrid(spec.page_w, spec.page_h, 1.0);

    // paper speckle
    const int specks = spec.page_w * spec.page_h / 1500;
    for (int i = 0; i < specks; ++i) {
        const int x = static_cast<int>(rng.integer(0, spec.page_w - 1));
        const int y = static_cast<int>(rng.integer(0, spec.page_h - 1));
        detail::ink(page.image, x, y, rng.in(0.55, 0.9));
    }

    const double margin_x = 0.08 * spec.page_w;
    const double margin_y = 0.08 * spec.page_h;
    const double body_height = std::clamp(0.55 * spec.leading, 6.0, 60.0);

    if (spec.n_lines > 0) {
        const double page_tilt = rng.in(-spec.skew, spec.skew) * kPi / 180.0;  // one skew per scan
        const double y_start = margin_y + spec.leading;
        int rows_used = spec.n_lines;
        if (spec.columns == 1) {
            detail::BlockExtent extent;
            detail::render_block(page.image, rng, spec, page_tilt, margin_x, spec.page_w - margin_x, y_start,
                                 spec.n_lines, body_height, page.baselines, extent);
            page.regions.push_back(detail::extent_polygon(extent, 8.0));
        } else {
            // the gutter stays wider than the double-page join threshold
            // d_x = 0.1 w, so columns never join across it
            const double gutter = 0.14 * spec.page_w;
            const double col_w = (spec.page_w - 2.0 * margin_x - gutter) / 2.0;
            const int first = (spec.n_lines + 1) / 2;
            rows_used = first;
            detail::BlockExtent left_extent, right_extent;
            detail::render_block(page.image, rng, spec, page_tilt, margin_x, margin_x + col_w, y_start, first,
                                 body_height, page.baselines, left_extent);
            detail::render_block(page.image, rng, spec, page_tilt, margin_x + col_w + gutter, spec.page_w - margin_x,
                                 y_start, spec.n_lines - first, body_height, page.baselines, right_extent);
            page.regions.push_back(detail::extent_polygon(left_extent, 8.0));
            if (spec.n_lines - first > 0) page.regions.push_back(detail::extent_polygon(right_extent, 8.0));
        }

        // a short block of footnote-style lines below the main text, in its
        // own region; skipped when the page has no room for it
        if (spec.margin_text) {
            const int margin_lines = static_cast<int>(rng.integer(1, 3));
            const double my_start = y_start + (rows_used + 2) * spec.leading;
            if (my_start + margin_lines * spec.leading < spec.page_h - margin_y) {
                detail::BlockExtent extent;
                detail::render_block(page.image, rng, spec, page_tilt, margin_x, margin_x + 0.18 * spec.page_w, my_start,
                                     margin_lines, body_height, page.baselines, extent);
                page.regions.push_back(detail::extent_polygon(extent, 6.0));
            }
        }
    }

    page.props.dblp = spec.columns == 2 ? 1.0 : 0.0;
    page.props.lnds = spec.page_w > spec.page_h ? 1.0 : 0.0;
    page.props.notxt = spec.n_lines == 0 ? 1.0 : 0.0;
    page.props.spac = std::min(1.0, spec.leading / 200.0);
    return page;
}

}  // namespace bldet
