#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bldet/common.hpp"
#include "bldet/docmodel.hpp"
#include "bldet/geometry.hpp"

namespace bldet {

struct PruneParams {
    double l_max;      // upper bound for a segment to count as short, pixels
    double alpha_max;  // orientation threshold, degrees
    double d_max;      // coverage distance threshold, pixels

    void validate() const {
        if (!(l_max > 0.0 && alpha_max > 0.0 && d_max > 0.0)) throw InvalidDocumentError("prune parameters must be positive");
    }
};

struct JoinParams {
    double d_x;      // horizontal gap threshold, pixels
    double d_y;      // vertical gap threshold, pixels
    double d_alpha;  // angular threshold, degrees

    void validate() const {
        if (!(d_x > 0.0 && d_y > 0.0 && d_alpha > 0.0)) throw InvalidDocumentError("join parameters must be positive");
    }
};

// Post-processing parameters derived from page width and the detected
// document properties. Double-page documents halve the horizontal bounds;
// large leading widens the vertical ones.
inline std::pair<PruneParams, JoinParams> derive_params(double page_width, const DocumentProperties& props) {
    if (!(page_width > 0.0)) throw InvalidDocumentError("page width must be positive");
    props.validate();
    const bool double_page = props.dblp > 0.7;
    PruneParams prune_params{(double_page ? 0.05 : 0.1) * page_width, 30.0, 20.0 + 50.0 * props.spac};
    JoinParams join_params{(double_page ? 0.1 : 0.2) * page_width, 20.0 + 50.0 * props.spac, 50.0};
    return {prune_params, join_params};
}

// Error pruning. A candidate is short iff its length is at most
// min(0.2 * mean_input_length, l_max); the mean and the shortness flags are
// computed once, on the unmodified input. Step 1 drops short segments steeper
// than alpha_max; step 2 drops short segments covered by a strictly longer
// step-1 survivor. Step 2 decisions are simultaneous: a segment removed by
// step 2 still counts as a coverer for others.
inline std::vector<LineSegment> prune(const std::vector<LineSegment>& candidates, const PruneParams& params) {
    params.validate();
    if (candidates.empty()) return {};

    double mean_length = 0.0;
    for (const LineSegment& l : candidates) mean_length += l.length();
    mean_length /= static_cast<double>(candidates.size());
    const double short_bound = std::min(0.2 * mean_length, params.l_max);

    std::vector<char> is_short(candidates.size());
    std::vector<char> survives_step1(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double len = candidates[i].length();
        is_short[i] = len <= short_bound;
        if (len == 0.0)
            survives_step1[i] = 0;  // degenerate candidates have no orientation
        else
            survives_step1[i] = !(is_short[i] && angle_to_horizontal(candidates[i]) > params.alpha_max);
    }

    std::vector<LineSegment> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!survives_step1[i]) continue;
        bool covered = false;
        if (is_short[i]) {
            for (std::size_t j = 0; j < candidates.size() && !covered; ++j) {
                if (j == i || !survives_step1[j]) continue;
                if (candidates[j].length() > candidates[i].length() &&
                    is_covered_by(candidates[i], candidates[j], params.d_max))
                    covered = true;
            }
        }
        if (!covered) kept.push_back(candidates[i]);
    }
    return kept;
}

enum class JoinPass {
    Rightward,        // joined candidates must not overlap horizontally
    LeftwardAllowed,  // overlapping joins admitted as a fallback class
};

// Endpoint pair of a join candidate: a bare segment in pass 1, the first and
// last vertex of an assembled polyline in pass 2.
struct JoinEnds {
    Point s;
    Point e;
};

namespace detail {

inline std::optional<double> chord_angle(const JoinEnds& c) {
    const double dx = c.e.x - c.s.x;
    const double dy = c.e.y - c.s.y;
    if (dx == 0.0 && dy == 0.0) return std::nullopt;
    return std::atan2(std::abs(dy), std::abs(dx)) * 180.0 / kPi;
}

}  // namespace detail

// Selects the preferred join continuation for candidates[subject], if any.
// A candidate qualifies when its chord stays within d_alpha of the
// horizontal and its start point lies within (d_x, d_y) of the subject's end
// point. Non-overlapping continuations (start not left of the subject's end)
// always win over leftward ones, which additionally must extend the subject
// rightward and start further than d_x/3 from its end. Ties fall back to
// smaller start x, then input order.
inline std::optional<std::size_t> preferred_join(std::size_t subject, std::span<const JoinEnds> candidates,
                                                 const JoinParams& params, JoinPass pass) {
    params.validate();
    const Point& e1 = candidates[subject].e;

    bool best_is_leftward = false;
    double best_key = 0.0;
    std::optional<std::size_t> best;

    for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (j == subject) continue;
        const JoinEnds& c = candidates[j];
        const auto angle = detail::chord_angle(c);
        if (!angle || *angle > params.d_alpha) continue;
        if (std::abs(c.s.x - e1.x) > params.d_x) continue;
        if (std::abs(c.s.y - e1.y) > params.d_y) continue;

        const bool non_overlapping = c.s.x - e1.x >= 0.0;
        double key;
        if (non_overlapping) {
            key = std::abs(c.s.y - e1.y);
        } else {
            if (pass != JoinPass::LeftwardAllowed) continue;
            if (!(c.e.x > e1.x)) continue;
            const double gap = distance(c.s, e1);
            if (!(gap > params.d_x / 3.0)) continue;
            key = gap;
        }

        bool better = false;
        if (!best) {
            better = true;
        } else if (non_overlapping == best_is_leftward) {
            better = non_overlapping;  // non-overlapping joins always preferred
        } else if (key != best_key) {
            better = key < best_key;
        } else if (c.s.x != candidates[*best].s.x) {
            better = c.s.x < candidates[*best].s.x;
        }
        if (better) {
            best = j;
            best_is_leftward = !non_overlapping;
            best_key = key;
        }
    }
    return best;
}

namespace detail {

inline void append_points(Polyline& chain, const Polyline& piece) {
    for (const Point& p : piece.points)
        if (chain.points.empty() || !(chain.points.back() == p)) chain.points.push_back(p);
}

inline std::vector<Polyline> join_pass(std::vector<Polyline> pieces, const JoinParams& params, JoinPass pass) {
    std::vector<JoinEnds> ends;
    ends.reserve(pieces.size());
    for (const Polyline& p : pieces) ends.push_back({p.points.front(), p.points.back()});

    std::vector<std::optional<std::size_t>> pref(pieces.size());
    std::vector<char> is_target(pieces.size(), 0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        pref[i] = preferred_join(i, ends, params, pass);
        if (pref[i]) is_target[*pref[i]] = 1;
    }

    std::vector<char> consumed(pieces.size(), 0);
    std::vector<Polyline> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (is_target[i]) continue;  // reachable from some other chain start
        Polyline chain;
        std::size_t k = i;
        while (true) {
            append_points(chain, pieces[k]);
            consumed[k] = 1;
            if (!pref[k] || consumed[*pref[k]]) break;
            k = *pref[k];
        }
        out.push_back(std::move(chain));
    }
    // members of pure join cycles are never reached from a start; they pass
    // through unjoined
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (!consumed[i]) out.push_back(std::move(pieces[i]));
    return out;
}

}  // namespace detail

// Two-pass assembly of candidate segments into poly-baselines: pass 1 applies
// preferred rightward joins recursively; pass 2 re-runs the selection on the
// pass-1 polylines with leftward joins allowed. Every input segment's points
// appear in exactly one output polyline.
inline std::vector<Polyline> assemble(const std::vector<LineSegment>& candidates, const JoinParams& params) {
    params.validate();
    std::vector<Polyline> pieces;
    pieces.reserve(candidates.size());
    for (const LineSegment& l : candidates) pieces.push_back(Polyline{{l.s, l.e}});
    if (pieces.empty()) return pieces;
    pieces = detail::join_pass(std::move(pieces), params, JoinPass::Rightward);
    pieces = detail::join_pass(std::move(pieces), params, JoinPass::LeftwardAllowed);
    return pieces;
}

}  // namespace bldet
