#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "bldet/classifier.hpp"
#include "bldet/common.hpp"
#include "bldet/docmodel.hpp"
#include "bldet/geometry.hpp"
#include "bldet/postproc.hpp"
#include "bldet/raster.hpp"
#include "bldet/tiling.hpp"

namespace bldet {

// Full-page baseline detection: document scaling, sliding-window inference
// with the supplied classifier, component extraction and line fitting in the
// scaled frame, then pruning and joining in original document coordinates.
struct DetectParams {
    ScaleLadder ladder = ScaleLadder::standard();
    int stride = 40;
    int output_crop = 80;       // inner sub-square of each prediction that is aggregated
    double threshold = 0.5;     // foreground is strictly greater
    std::int64_t min_component = 50;
    int connectivity = 8;
    double groundtruth_thickness = 5.0;  // band height when rasterizing baselines to masks
};

// Builds the classifier once the scaled page frame is known.
using ClassifierFactory =
    std::function<std::unique_ptr<PixelClassifier>(const ProbabilityGrid& scaled_image, int original_w, int original_h)>;

struct DetectResult {
    std::vector<Polyline> baselines;  // original document coordinates
    ProbabilityGrid scaled_mask;      // aggregated binary mask in the scaled frame
    ScaleChoice scale;
    std::size_t candidates = 0;        // fitted segments before post-processing
    std::size_t kept_after_prune = 0;
};

namespace detail {

// Center-based axis mapping between the original and scaled frames, matching
// the resampling geometry of scale_image.
struct AxisMap {
    double factor;  // original units per scaled unit

    double to_original(double scaled) const { return (scaled + 0.5) * factor - 0.5; }
    double to_scaled(double original) const { return (original + 0.5) / factor - 0.5; }
};

}  // namespace detail

// Maps baselines from original coordinates into the scaled frame and paints
// them as bands; this is how oracle groundtruth masks are built.
inline ProbabilityGrid rasterize_scaled_groundtruth(const std::vector<Polyline>& baselines, int original_w, int original_h,
                                                    int scaled_w, int scaled_h, double thickness) {
    const detail::AxisMap mx{static_cast<double>(original_w) / scaled_w};
    const detail::AxisMap my{static_cast<double>(original_h) / scaled_h};
    ProbabilityGrid mask(scaled_w, scaled_h, 0.0);
    for (const Polyline& line : baselines) {
        Polyline scaled;
        scaled.points.reserve(line.points.size());
        for (const Point& p : line.points) scaled.points.push_back({mx.to_scaled(p.x), my.to_scaled(p.y)});
        const ProbabilityGrid band = rasterize_polyline(scaled, thickness, scaled_w, scaled_h);
        for (int y = 0; y < scaled_h; ++y)
            for (int x = 0; x < scaled_w; ++x)
                if (band.at(x, y) == 1.0) mask.at(x, y) = 1.0;
    }
    return mask;
}

// Oracle-backed factory: the groundtruth baselines are projected into the
// scaled frame and served with the configured noise.
inline ClassifierFactory oracle_factory(std::vector<Polyline> groundtruth_baselines, double p_fg, double p_bg,
                                        double flip_rate, std::uint64_t seed, double thickness = 5.0, int window = 320,
                                        int prediction = 160) {
    return [=, lines = std::move(groundtruth_baselines)](const ProbabilityGrid& scaled, int original_w,
                                                         int original_h) -> std::unique_ptr<PixelClassifier> {
        OracleConfig cfg;
        cfg.groundtruth =
            rasterize_scaled_groundtruth(lines, original_w, original_h, scaled.width(), scaled.height(), thickness);
        cfg.p_fg = p_fg;
        cfg.p_bg = p_bg;
        cfg.flip_rate = flip_rate;
        cfg.seed = seed;
        return std::make_unique<OracleClassifier>(std::move(cfg), window, prediction);
    };
}

// Map-backed factory for predictions computed elsewhere: the page-sized
// probability map (original frame) is resampled into the scaled frame.
inline ClassifierFactory map_factory(ProbabilityGrid probability_map, int window = 320, int prediction = 160) {
    return [=, map = std::move(probability_map)](const ProbabilityGrid& scaled, int, int) -> std::unique_ptr<PixelClassifier> {
        return std::make_unique<MapClassifier>(scale_image(map, scaled.width()), window, prediction);
    };
}

// Drops candidates whose midpoint lies outside every region polygon.
inline std::vector<LineSegment> filter_by_regions(const std::vector<LineSegment>& candidates,
                                                  const std::vector<Polyline>& regions) {
    std::vector<LineSegment> kept;
    for (const LineSegment& seg : candidates) {
        const Point mid = seg.midpoint();
        for (const Polyline& region : regions) {
            if (point_in_polygon(mid, region)) {
                kept.push_back(seg);
                break;
            }
        }
    }
    return kept;
}

inline DetectResult detect_page(const ProbabilityGrid& image, const DocumentProperties& props,
                                const ClassifierFactory& make_classifier, const std::vector<Polyline>* regions,
                                const DetectParams& params = {}) {
    props.validate();
    if (image.width() < 1 || image.height() < 1) throw InvalidDocumentError("cannot detect on an empty image");

    DetectResult result;
    result.scale = scale_index(image.width(), image.height(), props, params.ladder);
    const ProbabilityGrid scaled = scale_image(image, result.scale.target_width);

    const std::unique_ptr<PixelClassifier> classifier = make_classifier(scaled, image.width(), image.height());
    result.scaled_mask = run_pipeline_pass(scaled, *classifier, params.stride, params.output_crop, params.threshold);

    const ComponentSet components = connected_components(result.scaled_mask, params.connectivity, params.min_component);
    const detail::AxisMap mx{static_cast<double>(image.width()) / scaled.width()};
    const detail::AxisMap my{static_cast<double>(image.height()) / scaled.height()};

    std::vector<LineSegment> candidates;
    for (const auto& pixels : component_points(components)) {
        const LineSegment fitted = fit_segment(pixels);
        candidates.emplace_back(Point{mx.to_original(fitted.s.x), my.to_original(fitted.s.y)},
                                Point{mx.to_original(fitted.e.x), my.to_original(fitted.e.y)});
    }
    result.candidates = candidates.size();

    if (regions != nullptr) candidates = filter_by_regions(candidates, *regions);

    const auto [prune_params, join_params] = derive_params(image.width(), props);
    candidates = prune(candidates, prune_params);
    result.kept_after_prune = candidates.size();

    result.baselines = assemble(candidates, join_params);
    return result;
}

}  // namespace bldet
