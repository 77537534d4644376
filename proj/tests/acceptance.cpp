// Acceptance suite: every release-gating check for the pipeline, one
// criterion per line of output. Runs single-threaded and exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bldet/classifier.hpp"
#include "bldet/dice.hpp"
#include "bldet/docmodel.hpp"
#include "bldet/evalmetric.hpp"
#include "bldet/netspec.hpp"
#include "bldet/pipeline.hpp"
#include "bldet/postproc.hpp"
#include "bldet/synth.hpp"
#include "bldet/textio.hpp"
#include "bldet/tiling.hpp"

using namespace bldet;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& ex) {
        ok = false;
        detail = std::string("exception: ") + ex.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && time_limit_s > 0.0 && elapsed > time_limit_s) {
        ok = false;
        detail = "time limit exceeded";
    }
    std::printf("criterion %d %s  %s (%.2f s)%s%s\n", id, ok ? "PASS" : "FAIL", name, elapsed,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

SynthSpec page_spec(int i) {
    SynthSpec spec;
    spec.seed = 100 + static_cast<std::uint64_t>(i);
    spec.page_w = 950 + (i * 83) % 650;
    spec.page_h = 1250 + (i * 131) % 700;
    spec.n_lines = 6 + (i * 5) % 9;
    spec.leading = 35.0 + static_cast<double>((i * 7) % 40);
    spec.skew = 0.5 + static_cast<double>(i % 5) * 0.5;
    spec.columns = i % 3 == 1 ? 2 : 1;
    spec.margin_text = i % 4 == 2;
    return spec;
}

struct CorpusRun {
    EvalReport micro;
    std::vector<std::string> baseline_files;  // formatted per page
};

CorpusRun run_corpus(int pages, double flip_rate) {
    CorpusRun run;
    EvalAccumulator acc;
    for (int i = 0; i < pages; ++i) {
        const SynthPage page = generate_page(page_spec(i));
        const auto factory = oracle_factory(page.baselines, 1.0, 0.0, flip_rate, 9000 + static_cast<std::uint64_t>(i));
        const std::vector<Polyline>* regions = i % 2 == 0 ? &page.regions : nullptr;
        const DetectResult result = detect_page(page.image, page.props, factory, regions, {});
        EvalParams params;  // tolerance 20, tTF 0.75
        acc.add(evaluate(page.baselines, result.baselines, params));
        run.baseline_files.push_back(format_baselines(result.baselines));
    }
    run.micro = acc.finalize();
    return run;
}

ProbabilityGrid random_grid(Rng& rng, int n, double lo, double hi) {
    ProbabilityGrid g(n, n, 0.0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) g.at(x, y) = rng.in(lo, hi);
    return g;
}

double plain_smoothed_dice(const ProbabilityGrid& h, const ProbabilityGrid& y, int a, int b, double gamma) {
    double inter = 0.0, hs = 0.0, ys = 0.0;
    for (int i = a; i <= b; ++i)
        for (int j = a; j <= b; ++j) {
            inter += h.at(j - 1, i - 1) * y.at(j - 1, i - 1);
            hs += h.at(j - 1, i - 1);
            ys += y.at(j - 1, i - 1);
        }
    return (2.0 * inter + gamma) / (hs + ys + gamma);
}

bool shapes_criterion(std::string& detail) {
    const auto da = compute_shapes(da_net());
    bool da_ok = false;
    for (const auto& s : da)
        if (s.stage == "bottom" && s.side == 10 && s.channels == 512) da_ok = true;

    const auto bl = compute_shapes(bl_net());
    bool bl_ok = false;
    for (const auto& s : bl)
        if (s.stage == "output" && s.side == 160) bl_ok = true;
    bl_ok = bl_ok && bl.front().stage == "input" && bl.front().side == 320;

    if (!da_ok) detail = "DA bottom stage is not (10, 512)";
    if (!bl_ok) detail += "BL output side is not 160 from a 320 window";
    return da_ok && bl_ok;
}

bool multiplicity_criterion(std::string& detail) {
    const auto da_counts = coverage_counts(plan_windows(640, 640, 160, 40, 160));
    const auto bl_counts = coverage_counts(plan_windows(640, 640, 320, 40, 80));
    int da_max = 0, bl_max = 0;
    for (int c : da_counts) da_max = std::max(da_max, c);
    for (int c : bl_counts) bl_max = std::max(bl_max, c);
    if (da_max != 16 || bl_max != 4) {
        detail = "max multiplicities DA=" + std::to_string(da_max) + " BL=" + std::to_string(bl_max);
        return false;
    }
    return true;
}

bool dice_criterion(std::string& detail) {
    const DiceMaskSpec spec{20, 5, 15, 3, 17, 1.0};
    const double step = 1e-5;
    double worst = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(5000 + static_cast<std::uint64_t>(seed));
        auto h = random_grid(rng, 20, 0.1, 0.9);
        const auto y = random_grid(rng, 20, 0.0, 1.0);
        const auto grad = dice_gradient(h, y, spec);
        for (int i = 5; i <= 15; ++i)
            for (int j = 5; j <= 15; ++j) {
                const double original = h.at(j - 1, i - 1);
                h.at(j - 1, i - 1) = original + step;
                const double up = modified_dice(h, y, spec);
                h.at(j - 1, i - 1) = original - step;
                const double down = modified_dice(h, y, spec);
                h.at(j - 1, i - 1) = original;
                const double fd = (up - down) / (2.0 * step);
                worst = std::max(worst, std::abs(grad[static_cast<std::size_t>(i - 1) * 20 + (j - 1)] - fd));
            }
    }
    if (worst > 1e-6) {
        detail = "gradient vs finite differences worst error " + std::to_string(worst);
        return false;
    }

    // bit-invariance outside the inner mask
    Rng rng(640);
    const auto y = random_grid(rng, 20, 0.0, 1.0);
    auto h = random_grid(rng, 20, 0.0, 1.0);
    const double base = modified_dice(h, y, spec);
    for (int trial = 0; trial < 25; ++trial) {
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j)
                if (!(i >= 5 && i <= 15 && j >= 5 && j <= 15)) h.at(j - 1, i - 1) = rng.unit();
        if (modified_dice(h, y, spec) != base) {
            detail = "D changed under perturbation outside the inner mask";
            return false;
        }
    }

    // mask special cases collapse to the plain smoothed dice
    const auto hh = random_grid(rng, 12, 0.0, 1.0);
    const auto yy = random_grid(rng, 12, 0.0, 1.0);
    const double inner_only = modified_dice(hh, yy, DiceMaskSpec{12, 4, 9, 4, 9, 1.0});
    const double full = modified_dice(hh, yy, DiceMaskSpec::full(12, 1.0));
    if (std::abs(inner_only - plain_smoothed_dice(hh, yy, 4, 9, 1.0)) > 1e-12 ||
        std::abs(full - plain_smoothed_dice(hh, yy, 1, 12, 1.0)) > 1e-12) {
        detail = "mask special cases do not collapse to the plain smoothed dice";
        return false;
    }
    return true;
}

bool scale_criterion(std::string& detail) {
    const auto ladder = ScaleLadder::standard();
    const auto a = scale_index(2000, 3000, {}, ladder);
    DocumentProperties spac1;
    spac1.spac = 1.0;
    const auto b = scale_index(2000, 3000, spac1, ladder);
    const auto c = scale_index(6000, 2000, {}, ladder);
    if (a.index != 5 || a.target_width != 1152 || b.index != 0 || b.target_width != 512 || c.index != 5 ||
        c.target_width != 1152) {
        detail = "worked examples gave indices " + std::to_string(a.index) + "," + std::to_string(b.index) + "," +
                 std::to_string(c.index);
        return false;
    }

    // randomized monotonicity sweep; widths compared on one side of the
    // extra-wide step at w = 2h, heights at least w_max/4
    Rng rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        DocumentProperties props;
        props.spac = rng.unit();
        props.dblp = rng.unit();
        props.lnds = rng.unit();
        props.notxt = rng.unit();
        const double h = rng.in(2000.0, 6000.0);
        const double lo = rng.chance(0.7) ? 100.0 : std::min(2.0 * h, 8000.0);
        const double hi = lo == 100.0 ? std::min(2.0 * h, 8000.0) : 8000.0;
        const double w1 = rng.in(lo, hi);
        const double w2 = w1 + rng.in(0.0, hi - w1);
        if (scale_score(w2, h, props, ladder) < scale_score(w1, h, props, ladder) - 1e-12) {
            detail = "score not nondecreasing in width";
            return false;
        }
        DocumentProperties more = props;
        more.spac = props.spac + rng.in(0.0, 1.0 - props.spac);
        if (scale_score(w1, h, more, ladder) > scale_score(w1, h, props, ladder) + 1e-12) {
            detail = "score not nonincreasing in spac";
            return false;
        }
    }
    return true;
}

bool postproc_criterion(std::string& detail) {
    // pruning worked examples
    const LineSegment a({0, 0}, {100, 0});
    const LineSegment b({0, 50}, {100, 50});
    const LineSegment steep({0, 100}, {7.0710678, 107.0710678});
    const auto kept1 = prune({a, b, steep}, PruneParams{50.0, 30.0, 20.0});
    if (kept1.size() != 2 || !(kept1[0] == a) || !(kept1[1] == b)) {
        detail = "disoriented short segment not pruned";
        return false;
    }
    const LineSegment covered({10, 0}, {20, 0});
    const LineSegment coverer({0, 1}, {100, 1});
    const auto kept2 = prune({covered, coverer}, PruneParams{50.0, 30.0, 20.0});
    if (kept2.size() != 1 || !(kept2[0] == coverer)) {
        detail = "covered short segment not pruned";
        return false;
    }
    const auto kept3 = prune({LineSegment({10, 0}, {20, 0}), LineSegment({0, 30}, {100, 30})},
                             PruneParams{50.0, 30.0, 20.0});
    if (kept3.size() != 2) {
        detail = "coverage ignored d_max";
        return false;
    }

    // joining worked examples
    const JoinParams jp{40.0, 30.0, 50.0};
    const std::vector<JoinEnds> rightward{{{0, 0}, {100, 2}}, {{110, 5}, {200, 3}}};
    if (preferred_join(0, rightward, jp, JoinPass::Rightward) != 1) {
        detail = "rightward join candidate not selected";
        return false;
    }
    const std::vector<JoinEnds> too_far{{{0, 0}, {100, 2}}, {{110, 40}, {200, 38}}};
    if (preferred_join(0, too_far, jp, JoinPass::Rightward).has_value()) {
        detail = "vertical threshold ignored";
        return false;
    }
    const JoinParams jp2{60.0, 30.0, 50.0};
    const std::vector<JoinEnds> leftward{{{0, 0}, {100, 0}}, {{80, 2}, {180, 2}}};
    if (preferred_join(0, leftward, jp2, JoinPass::LeftwardAllowed) != 1 ||
        preferred_join(0, leftward, jp2, JoinPass::Rightward).has_value()) {
        detail = "leftward join conditions wrong";
        return false;
    }

    // 500 random pages: assembly preserves the segment multiset and never
    // increases the line count
    Rng rng(4242);
    for (int page = 0; page < 500; ++page) {
        std::vector<LineSegment> segs;
        const int n = static_cast<int>(rng.integer(1, 24));
        for (int i = 0; i < n; ++i) {
            const double x = rng.in(0.0, 900.0);
            const double y = rng.in(0.0, 1300.0);
            const double len = rng.in(5.0, 350.0);
            const double slope = rng.in(-0.2, 0.2);
            segs.emplace_back(Point{x, y}, Point{x + len, y + len * slope});
        }
        const auto polys = assemble(segs, JoinParams{rng.in(30.0, 250.0), rng.in(5.0, 60.0), 50.0});
        if (polys.size() > segs.size()) {
            detail = "assembly increased the line count";
            return false;
        }
        std::map<std::pair<std::pair<double, double>, std::pair<double, double>>, int> pairs;
        for (const auto& s : segs) ++pairs[{{s.s.x, s.s.y}, {s.e.x, s.e.y}}];
        for (const auto& p : polys)
            for (std::size_t i = 1; i < p.points.size(); ++i) {
                auto it = pairs.find({{p.points[i - 1].x, p.points[i - 1].y}, {p.points[i].x, p.points[i].y}});
                if (it != pairs.end()) --it->second;
            }
        for (const auto& [key, count] : pairs)
            if (count != 0) {
                detail = "segment multiset not preserved";
                return false;
            }
    }
    return true;
}

bool oracle_roundtrip_criterion(std::string& detail) {
    const CorpusRun run = run_corpus(5, 0.0);
    if (run.micro.f_score != 1.0) {
        detail = "micro F = " + std::to_string(run.micro.f_score);
        return false;
    }
    return true;
}

CorpusRun g_noisy_run;

bool noisy_criterion(std::string& detail) {
    g_noisy_run = run_corpus(20, 0.02);
    detail = "micro F = " + std::to_string(g_noisy_run.micro.f_score);
    return g_noisy_run.micro.f_score >= 0.95;
}

bool determinism_criterion(std::string& detail) {
    const fs::path dir = "acceptance_out";
    fs::remove_all(dir);
    fs::create_directories(dir / "run1");
    fs::create_directories(dir / "run2");

    const CorpusRun repeat = run_corpus(20, 0.02);
    for (std::size_t i = 0; i < repeat.baseline_files.size(); ++i) {
        const fs::path p1 = dir / "run1" / ("page_" + std::to_string(i) + ".txt");
        const fs::path p2 = dir / "run2" / ("page_" + std::to_string(i) + ".txt");
        atomic_write_text(p1, g_noisy_run.baseline_files[i]);
        atomic_write_text(p2, repeat.baseline_files[i]);
        std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
        const std::string c1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
        const std::string c2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
        if (c1 != c2 || c1.empty()) {
            detail = "page " + std::to_string(i) + " differs between runs";
            return false;
        }
    }
    return true;
}

bool eval_oracle_criterion(std::string& detail) {
    Rng rng(31337);
    double worst = 0.0;
    for (int pair = 0; pair < 100; ++pair) {
        Polyline a, b;
        for (Polyline* line : {&a, &b}) {
            double x = rng.in(0.0, 50.0);
            double y = rng.in(0.0, 300.0);
            line->points.push_back({x, y});
            for (int i = 0; i < 3; ++i) {
                x += rng.in(5.0, 120.0);
                y += rng.in(-25.0, 25.0);
                line->points.push_back({x, y});
            }
        }
        const auto dense = sample_polyline(b, 0.1);
        for (const Point& q : sample_polyline(a, 20.0)) {
            double brute = 1e300;
            for (const Point& d : dense) brute = std::min(brute, distance(q, d));
            worst = std::max(worst, std::abs(point_polyline_distance(q, b) - brute));
        }
    }
    if (worst > 0.05 + 1e-9) {
        detail = "worst disagreement " + std::to_string(worst);
        return false;
    }
    return true;
}

}  // namespace

int main() {
    std::printf("acceptance suite (single-threaded)\n");
    criterion(1, "architecture shapes", 1.0, shapes_criterion);
    criterion(2, "overlap multiplicities", 1.0, multiplicity_criterion);
    criterion(3, "modified dice gradient, invariance, collapse", 5.0, dice_criterion);
    criterion(4, "scale formula examples and monotonicity", 1.0, scale_criterion);
    criterion(5, "post-processing unit table", 5.0, postproc_criterion);
    criterion(6, "oracle round trip F = 1.0", 10.0, oracle_roundtrip_criterion);
    criterion(7, "noisy end-to-end micro F >= 0.95", 60.0, noisy_criterion);
    criterion(8, "determinism of baseline files", 0.0, determinism_criterion);
    criterion(9, "evaluation distance oracle", 10.0, eval_oracle_criterion);
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
