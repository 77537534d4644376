#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bldet/common.hpp"
#include "bldet/raster.hpp"

namespace bldet {

// The four auxiliary document properties, each a class probability in [0,1].
struct DocumentProperties {
    double spac = 0.0;   // the distance between successive baselines is large
    double dblp = 0.0;   // the document spans two pages
    double lnds = 0.0;   // the orientation is landscape
    double notxt = 0.0;  // the document contains no text

    void validate() const {
        for (double v : {spac, dblp, lnds, notxt})
            if (!(v >= 0.0 && v <= 1.0)) throw InvalidDocumentError("document properties must lie in [0,1]");
    }
};

// Candidate prescale widths plus the upper bound on document width.
struct ScaleLadder {
    std::vector<int> widths;
    double w_max = 8000.0;

    int count() const { return static_cast<int>(widths.size()); }

    static ScaleLadder standard() { return {{512, 640, 768, 896, 1024, 1152, 1280}, 8000.0}; }
};

// Raw scale score before flooring/clamping. Wider documents push the score
// up; large leading pushes it down; landscape and double-page push it up;
// near-empty and extra-wide documents get an extra decrease.
inline double scale_score(double w, double h, const DocumentProperties& props, const ScaleLadder& ladder) {
    if (!(w > 0.0) || !(h > 0.0)) throw InvalidDocumentError("document dimensions must be positive");
    props.validate();
    const double ns = static_cast<double>(ladder.count());
    double score = ns * w / ladder.w_max + ns / 4.0 * (2.0 + props.lnds + props.dblp - 4.0 * props.spac);
    if (props.notxt > 0.7) score -= ns / 4.0 * props.notxt;
    if (w / h > 2.0) score -= ns / 4.0 * (w / h - 1.0);
    return score;
}

struct ScaleChoice {
    int index;
    int target_width;
};

inline ScaleChoice scale_index(double w, double h, const DocumentProperties& props, const ScaleLadder& ladder) {
    if (ladder.count() < 1) throw InvalidDocumentError("scale ladder must not be empty");
    const double score = scale_score(w, h, props, ladder);
    int idx = static_cast<int>(std::floor(score));
    idx = std::clamp(idx, 0, ladder.count() - 1);
    return {idx, ladder.widths[static_cast<std::size_t>(idx)]};
}

enum class Leading { Small, Medium, Large };

struct BinarizedProperties {
    bool landscape;
    bool double_page;
    bool no_text;
    Leading leading;
};

// Thresholds: binary properties at a strict 0.5; leading quantized at 0.3
// and 0.6 (boundaries inclusive below).
inline BinarizedProperties binarize_properties(const DocumentProperties& props) {
    props.validate();
    Leading leading = Leading::Small;
    if (props.spac > 0.6)
        leading = Leading::Large;
    else if (props.spac > 0.3)
        leading = Leading::Medium;
    return {props.lnds > 0.5, props.dblp > 0.5, props.notxt > 0.5, leading};
}

// Bilinear resample to the target width, height rounded to keep the aspect
// ratio. Resampling to the source width is an exact identity.
inline ProbabilityGrid scale_image(const ProbabilityGrid& grid, int target_width) {
    if (target_width < 1) throw InvalidDocumentError("target width must be >= 1");
    if (grid.width() < 1 || grid.height() < 1) throw InvalidDocumentError("cannot scale an empty grid");
    const int target_height =
        std::max(1, static_cast<int>(std::lround(static_cast<double>(grid.height()) * target_width / grid.width())));

    ProbabilityGrid out(target_width, target_height, 0.0);
    const double sx = static_cast<double>(grid.width()) / target_width;
    const double sy = static_cast<double>(grid.height()) / target_height;
    for (int y = 0; y < target_height; ++y) {
        const double src_y = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(grid.height() - 1));
        const int y0 = static_cast<int>(src_y);
        const int y1 = std::min(y0 + 1, grid.height() - 1);
        const double fy = src_y - y0;
        for (int x = 0; x < target_width; ++x) {
            const double src_x = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(grid.width() - 1));
            const int x0 = static_cast<int>(src_x);
            const int x1 = std::min(x0 + 1, grid.width() - 1);
            const double fx = src_x - x0;
            const double v = grid.at(x0, y0) * (1.0 - fx) * (1.0 - fy) + grid.at(x1, y0) * fx * (1.0 - fy) +
                             grid.at(x0, y1) * (1.0 - fx) * fy + grid.at(x1, y1) * fx * fy;
            out.at(x, y) = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace bldet
