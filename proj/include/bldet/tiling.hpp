#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "bldet/common.hpp"
#include "bldet/raster.hpp"

namespace bldet {

// Sliding-window placements for one page. Placements are window top-left
// offsets and may be negative: the aggregated sub-square (output_crop) sits
// centered in the window, and windows are laid so that crop regions start at
// multiples of the stride and the final crop ends exactly at the image edge.
// Pixels outside the image are virtual padding.
struct WindowPlan {
    int image_width = 0;
    int image_height = 0;
    int window = 0;
    int stride = 0;
    int output_crop = 0;
    std::vector<std::pair<int, int>> placements;

    int crop_margin() const { return (window - output_crop) / 2; }
};

namespace detail {

inline std::vector<int> crop_positions(int extent, int crop, int stride) {
    std::vector<int> xs;
    if (extent <= crop) {
        xs.push_back(0);
        return xs;
    }
    const int last = extent - crop;
    for (int x = 0; x < last; x += stride) xs.push_back(x);
    xs.push_back(last);
    return xs;
}

}  // namespace detail

inline WindowPlan plan_windows(int image_w, int image_h, int window, int stride, int output_crop) {
    if (image_w < 1 || image_h < 1) throw InvalidPlanError("image dimensions must be positive");
    if (stride < 1 || window < stride) throw InvalidPlanError("need window >= stride >= 1");
    if (output_crop < stride) throw InvalidPlanError("output crop smaller than the stride leaves coverage gaps");
    if (output_crop > window) throw InvalidPlanError("output crop cannot exceed the window");
    if ((window - output_crop) % 2 != 0) throw InvalidPlanError("window minus crop must be even (centered crop)");

    WindowPlan plan{image_w, image_h, window, stride, output_crop, {}};
    const int margin = plan.crop_margin();
    const auto xs = detail::crop_positions(image_w, output_crop, stride);
    const auto ys = detail::crop_positions(image_h, output_crop, stride);
    plan.placements.reserve(xs.size() * ys.size());
    for (int cy : ys)
        for (int cx : xs) plan.placements.emplace_back(cx - margin, cy - margin);
    return plan;
}

// Per-pixel count of crop regions covering each image pixel (row-major).
inline std::vector<int> coverage_counts(const WindowPlan& plan) {
    std::vector<int> counts(static_cast<std::size_t>(plan.image_width) * plan.image_height, 0);
    const int margin = plan.crop_margin();
    for (const auto& [wx, wy] : plan.placements) {
        const int cx = wx + margin;
        const int cy = wy + margin;
        for (int y = std::max(0, cy); y < std::min(plan.image_height, cy + plan.output_crop); ++y)
            for (int x = std::max(0, cx); x < std::min(plan.image_width, cx + plan.output_crop); ++x)
                ++counts[static_cast<std::size_t>(y) * plan.image_width + x];
    }
    return counts;
}

// OR-aggregation: a pixel is foreground iff any covering crop predicts a
// value strictly greater than the threshold. Padding pixels of a crop
// (outside the image) are ignored.
inline ProbabilityGrid aggregate(const WindowPlan& plan, const std::vector<ProbabilityGrid>& cropped_predictions,
                                 double threshold) {
    if (cropped_predictions.size() != plan.placements.size())
        throw DimensionError("one cropped prediction required per placement");
    ProbabilityGrid max_map(plan.image_width, plan.image_height, 0.0);
    const int margin = plan.crop_margin();
    for (std::size_t k = 0; k < plan.placements.size(); ++k) {
        const auto& pred = cropped_predictions[k];
        if (pred.width() != plan.output_crop || pred.height() != plan.output_crop)
            throw DimensionError("cropped prediction has wrong size");
        const int cx = plan.placements[k].first + margin;
        const int cy = plan.placements[k].second + margin;
        for (int j = 0; j < plan.output_crop; ++j) {
            const int y = cy + j;
            if (y < 0 || y >= plan.image_height) continue;
            for (int i = 0; i < plan.output_crop; ++i) {
                const int x = cx + i;
                if (x < 0 || x >= plan.image_width) continue;
                if (pred.at(i, j) > max_map.at(x, y)) max_map.at(x, y) = pred.at(i, j);
            }
        }
    }
    return bldet::threshold(max_map, threshold);
}

// Per-window pixel classifier. classify() receives the window contents (zero
// padded outside the image) plus the absolute window offset, and returns a
// prediction for the centered prediction_size x prediction_size region.
// Implementations must be deterministic in (contents, offset, own seed) and
// safe to call concurrently on distinct windows.
class PixelClassifier {
  public:
    virtual ~PixelClassifier() = default;

    virtual int window_size() const = 0;
    virtual int prediction_size() const = 0;

    // Classifiers that ignore the pixel contents (the oracle does) can skip
    // the window extraction cost.
    virtual bool wants_window_contents() const { return true; }

    virtual ProbabilityGrid classify(const ProbabilityGrid& window, int offset_x, int offset_y) const = 0;
};

// Full sliding-window pass: plan, classify every window, center-crop each
// prediction, and OR-aggregate into a page-sized binary mask. The result is
// independent of window evaluation order.
inline ProbabilityGrid run_pipeline_pass(const ProbabilityGrid& image, const PixelClassifier& classifier, int stride,
                                         int output_crop, double threshold) {
    const int window = classifier.window_size();
    const int prediction = classifier.prediction_size();
    if (prediction > window || (window - prediction) % 2 != 0)
        throw InvalidPlanError("prediction must be centered inside the window");
    if (output_crop > prediction || (prediction - output_crop) % 2 != 0)
        throw InvalidPlanError("output crop must be centered inside the prediction");

    const WindowPlan plan = plan_windows(image.width(), image.height(), window, stride, output_crop);
    const int crop_margin = plan.crop_margin();
    const int crop_in_pred = (prediction - output_crop) / 2;

    ProbabilityGrid max_map(image.width(), image.height(), 0.0);
    ProbabilityGrid window_grid(window, window, 0.0);
    const ProbabilityGrid empty_window(0, 0);

    for (const auto& [wx, wy] : plan.placements) {
        if (classifier.wants_window_contents()) {
            for (int j = 0; j < window; ++j)
                for (int i = 0; i < window; ++i) window_grid.at(i, j) = image.at_or(wx + i, wy + j, 0.0);
        }
        ProbabilityGrid pred;
        try {
            pred = classifier.classify(classifier.wants_window_contents() ? window_grid : empty_window, wx, wy);
        } catch (const std::exception& ex) {
            throw Error("classifier failed on window at (" + std::to_string(wx) + "," + std::to_string(wy) + "): " + ex.what());
        }
        if (pred.width() != prediction || pred.height() != prediction)
            throw DimensionError("classifier returned a prediction of unexpected size");

        const int cx = wx + crop_margin;
        const int cy = wy + crop_margin;
        for (int j = 0; j < output_crop; ++j) {
            const int y = cy + j;
            if (y < 0 || y >= image.height()) continue;
            for (int i = 0; i < output_crop; ++i) {
                const int x = cx + i;
                if (x < 0 || x >= image.width()) continue;
                const double v = pred.at(crop_in_pred + i, crop_in_pred + j);
                if (v > max_map.at(x, y)) max_map.at(x, y) = v;
            }
        }
    }
    return bldet::threshold(max_map, threshold);
}

}  // namespace bldet
