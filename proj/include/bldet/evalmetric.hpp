#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "bldet/common.hpp"
#include "bldet/geometry.hpp"

namespace bldet {

// Tolerance-based matching of predicted poly-baselines against groundtruth.
// This is a simplified, documented variant of the usual competition tool:
// polylines are sampled at fixed arc-length steps and a sample counts as
// covered when it lies within `tolerance` (Euclidean point-to-polyline
// distance) of any line on the other side.
struct EvalParams {
    double tolerance = 20.0;
    double t_tf = 0.75;  // fraction of a groundtruth line's samples that must be covered for a match
    double sample_step = 1.0;

    void validate() const {
        if (!(tolerance > 0.0)) throw InvalidDocumentError("tolerance must be positive");
        if (!(t_tf > 0.0 && t_tf <= 1.0)) throw InvalidDocumentError("tTF must lie in (0,1]");
        if (!(sample_step > 0.0)) throw InvalidDocumentError("sample step must be positive");
    }
};

struct EvalReport {
    double precision = 1.0;
    double recall = 1.0;
    double f_score = 1.0;
    std::int64_t matched_gt = 0;
    std::int64_t gt_total = 0;
    std::vector<double> per_line_coverage;  // per groundtruth line

    // raw point counts; micro-averaging across pages is a fold over these
    std::int64_t gt_points_covered = 0;
    std::int64_t gt_points_total = 0;
    std::int64_t pred_points_covered = 0;
    std::int64_t pred_points_total = 0;
};

// Arc-length samples including both endpoints.
inline std::vector<Point> sample_polyline(const Polyline& line, double step) {
    std::vector<Point> out;
    const double total = line.length();
    if (line.points.empty()) return out;
    if (total == 0.0) {
        out.push_back(line.points.front());
        return out;
    }

    const auto point_at = [&](double s) -> Point {
        double walked = 0.0;
        for (std::size_t i = 1; i < line.points.size(); ++i) {
            const double seg = distance(line.points[i - 1], line.points[i]);
            if (walked + seg >= s && seg > 0.0) {
                const double t = (s - walked) / seg;
                return {line.points[i - 1].x + t * (line.points[i].x - line.points[i - 1].x),
                        line.points[i - 1].y + t * (line.points[i].y - line.points[i - 1].y)};
            }
            walked += seg;
        }
        return line.points.back();
    };

    const auto n_steps = static_cast<std::int64_t>(std::floor(total / step + 1e-9));
    for (std::int64_t i = 0; i <= n_steps; ++i) out.push_back(point_at(static_cast<double>(i) * step));
    if (static_cast<double>(n_steps) * step < total - 1e-9) out.push_back(line.points.back());
    return out;
}

inline double point_to_lines_distance(const Point& p, std::span<const Polyline> lines) {
    double best = std::numeric_limits<double>::infinity();
    for (const Polyline& line : lines) best = std::min(best, point_polyline_distance(p, line));
    return best;
}

inline EvalReport evaluate(const std::vector<Polyline>& groundtruth, const std::vector<Polyline>& predictions,
                           const EvalParams& params = {}) {
    params.validate();
    EvalReport report;
    report.gt_total = static_cast<std::int64_t>(groundtruth.size());

    const std::span<const Polyline> pred_span(predictions.data(), predictions.size());
    const std::span<const Polyline> gt_span(groundtruth.data(), groundtruth.size());

    for (const Polyline& gt_line : groundtruth) {
        const auto samples = sample_polyline(gt_line, params.sample_step);
        std::int64_t covered = 0;
        for (const Point& p : samples)
            if (point_to_lines_distance(p, pred_span) <= params.tolerance) ++covered;
        report.gt_points_covered += covered;
        report.gt_points_total += static_cast<std::int64_t>(samples.size());
        const double fraction = samples.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(samples.size());
        report.per_line_coverage.push_back(fraction);
        if (fraction >= params.t_tf) ++report.matched_gt;
    }

    for (const Polyline& pred_line : predictions) {
        const auto samples = sample_polyline(pred_line, params.sample_step);
        for (const Point& p : samples)
            if (point_to_lines_distance(p, gt_span) <= params.tolerance) ++report.pred_points_covered;
        report.pred_points_total += static_cast<std::int64_t>(samples.size());
    }

    report.precision = report.pred_points_total == 0
                           ? 1.0
                           : static_cast<double>(report.pred_points_covered) / static_cast<double>(report.pred_points_total);
    report.recall = report.gt_points_total == 0
                        ? 1.0
                        : static_cast<double>(report.gt_points_covered) / static_cast<double>(report.gt_points_total);
    report.f_score =
        (report.precision + report.recall) > 0.0
            ? 2.0 * report.precision * report.recall / (report.precision + report.recall)
            : 0.0;
    return report;
}

// Commutative fold for micro-averaged multi-page reports.
class EvalAccumulator {
  public:
    void add(const EvalReport& r) {
        gt_covered_ += r.gt_points_covered;
        gt_total_ += r.gt_points_total;
        pred_covered_ += r.pred_points_covered;
        pred_total_ += r.pred_points_total;
        matched_ += r.matched_gt;
        lines_ += r.gt_total;
    }

    EvalReport finalize() const {
        EvalReport r;
        r.gt_points_covered = gt_covered_;
        r.gt_points_total = gt_total_;
        r.pred_points_covered = pred_covered_;
        r.pred_points_total = pred_total_;
        r.matched_gt = matched_;
        r.gt_total = lines_;
        r.precision = pred_total_ == 0 ? 1.0 : static_cast<double>(pred_covered_) / static_cast<double>(pred_total_);
        r.recall = gt_total_ == 0 ? 1.0 : static_cast<double>(gt_covered_) / static_cast<double>(gt_total_);
        r.f_score = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
        return r;
    }

  private:
    std::int64_t gt_covered_ = 0;
    std::int64_t gt_total_ = 0;
    std::int64_t pred_covered_ = 0;
    std::int64_t pred_total_ = 0;
    std::int64_t matched_ = 0;
    std::int64_t lines_ = 0;
};

}  // namespace bldet
