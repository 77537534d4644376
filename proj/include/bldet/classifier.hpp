#pragma once

#include <cstdint>
#include <utility>

#include "bldet/common.hpp"
#include "bldet/raster.hpp"
#include "bldet/tiling.hpp"

namespace bldet {

// Noisy oracle standing in for a trained per-pixel net: it answers from a
// page-sized groundtruth mask, emitting p_fg over true foreground and p_bg
// elsewhere, with per-pixel flips drawn from a counter-based noise source
// keyed by (seed, absolute pixel coordinate). Overlapping windows therefore
// see consistent noise at shared pixels.
struct OracleConfig {
    ProbabilityGrid groundtruth;
    double p_fg = 1.0;
    double p_bg = 0.0;
    double flip_rate = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(p_fg > 0.5 && p_bg <= 0.5 && p_bg >= 0.0 && p_fg <= 1.0))
            throw InvalidMaskError("oracle probabilities need p_fg > 0.5 >= p_bg");
        if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) throw InvalidMaskError("flip rate must lie in [0,1]");
        if (!groundtruth.is_binary()) throw InvalidMaskError("oracle groundtruth must be a binary mask");
    }
};

inline ProbabilityGrid oracle_classify(const OracleConfig& cfg, int offset_x, int offset_y, int window_size,
                                       int prediction_size) {
    const int margin = (window_size - prediction_size) / 2;
    ProbabilityGrid pred(prediction_size, prediction_size, 0.0);
    for (int j = 0; j < prediction_size; ++j) {
        const int gy = offset_y + margin + j;
        for (int i = 0; i < prediction_size; ++i) {
            const int gx = offset_x + margin + i;
            const bool fg = cfg.groundtruth.at_or(gx, gy, 0.0) == 1.0;
            bool flipped = false;
            if (cfg.flip_rate > 0.0) flipped = hash_unit(cfg.seed, gx, gy) < cfg.flip_rate;
            pred.at(i, j) = (fg != flipped) ? cfg.p_fg : cfg.p_bg;
        }
    }
    return pred;
}

class OracleClassifier final : public PixelClassifier {
  public:
    explicit OracleClassifier(OracleConfig cfg, int window_size = 320, int prediction_size = 160)
        : cfg_(std::move(cfg)), window_(window_size), prediction_(prediction_size) {
        cfg_.validate();
        if (prediction_ > window_ || (window_ - prediction_) % 2 != 0)
            throw InvalidPlanError("prediction must be centered inside the window");
    }

    int window_size() const override { return window_; }
    int prediction_size() const override { return prediction_; }
    bool wants_window_contents() const override { return false; }

    ProbabilityGrid classify(const ProbabilityGrid&, int offset_x, int offset_y) const override {
        return oracle_classify(cfg_, offset_x, offset_y, window_, prediction_);
    }

    const OracleConfig& config() const { return cfg_; }

  private:
    OracleConfig cfg_;
    int window_;
    int prediction_;
};

// Classifier backed by a precomputed page-sized probability map (e.g. a net
// output rendered elsewhere); windows are served from the map.
class MapClassifier final : public PixelClassifier {
  public:
    explicit MapClassifier(ProbabilityGrid probability_map, int window_size = 320, int prediction_size = 160)
        : map_(std::move(probability_map)), window_(window_size), prediction_(prediction_size) {
        if (prediction_ > window_ || (window_ - prediction_) % 2 != 0)
            throw InvalidPlanError("prediction must be centered inside the window");
    }

    int window_size() const override { return window_; }
    int prediction_size() const override { return prediction_; }
    bool wants_window_contents() const override { return false; }

    ProbabilityGrid classify(const ProbabilityGrid&, int offset_x, int offset_y) const override {
        const int margin = (window_ - prediction_) / 2;
        ProbabilityGrid pred(prediction_, prediction_, 0.0);
        for (int j = 0; j < prediction_; ++j)
            for (int i = 0; i < prediction_; ++i)
                pred.at(i, j) = map_.at_or(offset_x + margin + i, offset_y + margin + j, 0.0);
        return pred;
    }

  private:
    ProbabilityGrid map_;
    int window_;
    int prediction_;
};

}  // namespace bldet
