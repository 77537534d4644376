// Command-line front end for the baseline detection pipeline: synthetic page
// generation, detection over PGM images, tolerance-based evaluation, the
// network shape calculator, and the modified dice metric.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bldet/dice.hpp"
#include "bldet/docmodel.hpp"
#include "bldet/evalmetric.hpp"
#include "bldet/netspec.hpp"
#include "bldet/pgm.hpp"
#include "bldet/pipeline.hpp"
#include "bldet/synth.hpp"
#include "bldet/textio.hpp"

namespace fs = std::filesystem;

namespace {

struct DetectArgs {
    std::string image_path;
    std::string props_path;
    std::string out_path;
    std::string regions_path;
    std::string classifier = "oracle";
    std::string gt_path;
    std::string prob_path;
    std::string dump_dir;
    double p_fg = 1.0;
    double p_bg = 0.0;
    double flip_rate = 0.0;
    std::uint64_t seed = 0;
    double threshold = 0.5;
    std::int64_t min_component = 50;
    double w_max = 8000.0;
};

int run_detect(const DetectArgs& args) {
    bldet::ProbabilityGrid image;
    try {
        image = bldet::read_pgm(args.image_path);
    } catch (const bldet::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }

    bldet::DocumentProperties props;
    try {
        props = bldet::read_properties(args.props_path);
    } catch (const bldet::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    std::optional<std::vector<bldet::Polyline>> regions;
    if (!args.regions_path.empty()) regions = bldet::read_baselines(args.regions_path);

    bldet::ClassifierFactory factory;
    if (args.classifier == "oracle") {
        if (args.gt_path.empty()) throw bldet::Error("--classifier oracle requires --gt <baselines file>");
        factory = bldet::oracle_factory(bldet::read_baselines(args.gt_path), args.p_fg, args.p_bg, args.flip_rate,
                                        args.seed);
    } else if (args.classifier == "file") {
        if (args.prob_path.empty()) throw bldet::Error("--classifier file requires --prob <pgm probability map>");
        factory = bldet::map_factory(bldet::read_pgm(args.prob_path));
    } else {
        throw bldet::Error("unknown classifier '" + args.classifier + "' (want oracle or file)");
    }

    bldet::DetectParams params;
    params.ladder.w_max = args.w_max;
    params.threshold = args.threshold;
    params.min_component = args.min_component;

    const bldet::DetectResult result = bldet::detect_page(image, props, factory, regions ? &*regions : nullptr, params);
    bldet::write_baselines(args.out_path, result.baselines);

    if (!args.dump_dir.empty()) {
        fs::create_directories(args.dump_dir);
        const fs::path stem = fs::path(args.image_path).stem();
        bldet::write_pgm(fs::path(args.dump_dir) / (stem.string() + "_mask.pgm"), result.scaled_mask);
    }

    std::printf("scale index %d -> width %d, %zu candidates, %zu after pruning, %zu baselines\n", result.scale.index,
                result.scale.target_width, result.candidates, result.kept_after_prune, result.baselines.size());
    return 0;
}

int run_eval(const std::string& gt_path, const std::string& pred_path, const bldet::EvalParams& params) {
    const auto gt = bldet::read_baselines(gt_path);
    const auto pred = bldet::read_baselines(pred_path);
    const bldet::EvalReport report = bldet::evaluate(gt, pred, params);
    std::printf("precision  %.6f\n", report.precision);
    std::printf("recall     %.6f\n", report.recall);
    std::printf("f-score    %.6f\n", report.f_score);
    std::printf("matched    %lld of %lld groundtruth lines\n", static_cast<long long>(report.matched_gt),
                static_cast<long long>(report.gt_total));
    std::printf("%.6f,%.6f,%.6f,%lld,%lld\n", report.precision, report.recall, report.f_score,
                static_cast<long long>(report.matched_gt), static_cast<long long>(report.gt_total));
    return 0;
}

int run_synth(const std::string& spec_path, const std::string& out_dir) {
    const bldet::SynthSpec spec = bldet::read_synth_spec(spec_path);
    const bldet::SynthPage page = bldet::generate_page(spec);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    bldet::write_pgm(dir / "page.pgm", page.image);
    bldet::write_baselines(dir / "baselines.txt", page.baselines);
    bldet::write_baselines(dir / "regions.txt", page.regions);
    bldet::write_properties(dir / "props.txt", page.props);
    std::printf("wrote %d x %d page with %zu baselines to %s\n", page.image.width(), page.image.height(),
                page.baselines.size(), out_dir.c_str());
    return 0;
}

int run_netspec(const std::string& net) {
    bldet::NetSpec spec;
    if (net == "da") spec = bldet::da_net();
    else if (net == "bl") spec = bldet::bl_net();
    else throw bldet::Error("unknown net '" + net + "' (want da or bl)");

    const auto stages = bldet::compute_shapes(spec);
    std::printf("%-10s %8s %10s\n", "stage", "side", "channels");
    for (const auto& s : stages) std::printf("%-10s %8d %10d\n", s.stage.c_str(), s.side, s.channels);
    std::printf("aux heads: %d\n", bldet::count_aux_heads(spec));
    std::printf("parameters: %lld\n", static_cast<long long>(bldet::count_parameters(spec)));
    for (const auto& s : stages) std::printf("%s,%d,%d\n", s.stage.c_str(), s.side, s.channels);
    return 0;
}

std::pair<int, int> parse_bounds(const std::string& text, const char* flag) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw bldet::Error(std::string(flag) + " expects 'a,b'");
    try {
        return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw bldet::Error(std::string(flag) + " expects 'a,b' with integer bounds");
    }
}

int run_dice(const std::string& h_path, const std::string& y_path, const std::string& inner, const std::string& outer,
             double gamma) {
    const bldet::ProbabilityGrid h = bldet::read_pgm(h_path);
    const bldet::ProbabilityGrid y = bldet::read_pgm(y_path);
    if (h.width() != h.height()) throw bldet::Error("prediction image must be square");
    const auto [ai, bi] = parse_bounds(inner, "--inner");
    const auto [ay, by] = parse_bounds(outer, "--outer");
    const bldet::DiceMaskSpec spec{h.width(), ai, bi, ay, by, gamma};
    const double d = bldet::modified_dice(h, y, spec);
    std::printf("dice       %.6f\n", d);
    std::printf("dice error %.6f\n", 1.0 - d);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"baseline detection pipeline for document images"};
    app.set_help_flag("--help", "print help and exit");  // keep --h free for the dice subcommand
    app.require_subcommand(1);

    DetectArgs detect_args;
    auto* detect = app.add_subcommand("detect", "detect baselines in a PGM page image");
    detect->add_option("--image", detect_args.image_path, "input page image (PGM, P5 or P2)")->required();
    detect->add_option("--props", detect_args.props_path, "document properties file (key=value: spac dblp lnds notxt)")
        ->required();
    detect->add_option("--out", detect_args.out_path, "output baselines file")->required();
    detect->add_option("--regions", detect_args.regions_path, "region polygons file; candidates outside are dropped");
    detect->add_option("--classifier", detect_args.classifier, "pixel classifier: oracle | file (default oracle)");
    detect->add_option("--gt", detect_args.gt_path, "groundtruth baselines consumed by the oracle classifier");
    detect->add_option("--prob", detect_args.prob_path, "page probability map (PGM) for --classifier file");
    detect->add_option("--p-fg", detect_args.p_fg, "oracle probability emitted on foreground (default 1.0)");
    detect->add_option("--p-bg", detect_args.p_bg, "oracle probability emitted on background (default 0.0)");
    detect->add_option("--flip-rate", detect_args.flip_rate, "oracle per-pixel flip probability (default 0)");
    detect->add_option("--seed", detect_args.seed, "oracle noise seed (default 0)");
    detect->add_option("--threshold", detect_args.threshold, "foreground threshold, strict (default 0.5)");
    detect->add_option("--min-component", detect_args.min_component, "minimum component size in pixels (default 50)");
    detect->add_option("--wmax", detect_args.w_max, "upper bound on document width for scaling (default 8000)");
    detect->add_option("--dump-masks", detect_args.dump_dir, "directory for the aggregated mask PGM");

    std::string eval_gt, eval_pred;
    bldet::EvalParams eval_params;
    auto* eval = app.add_subcommand("eval", "score predicted baselines against groundtruth");
    eval->add_option("--gt", eval_gt, "groundtruth baselines file")->required();
    eval->add_option("--pred", eval_pred, "predicted baselines file")->required();
    eval->add_option("--tolerance", eval_params.tolerance, "coverage tolerance in pixels (default 20)");
    eval->add_option("--ttf", eval_params.t_tf, "matched-line coverage fraction (default 0.75)");
    eval->add_option("--step", eval_params.sample_step, "arc-length sampling step in pixels (default 1)");

    std::string synth_spec_path, synth_out;
    auto* synth = app.add_subcommand("synth", "generate a synthetic page with groundtruth");
    synth->add_option("--spec", synth_spec_path,
                      "synth spec file (key=value: page_w page_h n_lines leading skew columns margin_text seed)")
        ->required();
    synth->add_option("--out", synth_out, "output directory (page.pgm, baselines.txt, regions.txt, props.txt)")->required();

    std::string net_name;
    auto* netspec = app.add_subcommand("netspec", "print network stage shapes");
    netspec->add_option("--net", net_name, "which net: da | bl")->required();

    std::string dice_h, dice_y, dice_inner, dice_outer;
    double dice_gamma = 1.0;
    auto* dice = app.add_subcommand("dice", "modified dice coefficient of two mask images");
    dice->set_help_flag("--help", "print help and exit");
    dice->add_option("--h", dice_h, "prediction image (PGM; gray v maps to v/maxval)")->required();
    dice->add_option("--y", dice_y, "groundtruth image (PGM)")->required();
    dice->add_option("--inner", dice_inner, "inner mask bounds 'a,b', 1-based inclusive")->required();
    dice->add_option("--outer", dice_outer, "surrounding mask bounds 'a,b', 1-based inclusive")->required();
    dice->add_option("--gamma", dice_gamma, "smoothing constant (default 1.0)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) return run_detect(detect_args);
        if (eval->parsed()) return run_eval(eval_gt, eval_pred, eval_params);
        if (synth->parsed()) return run_synth(synth_spec_path, synth_out);
        if (netspec->parsed()) return run_netspec(net_name);
        if (dice->parsed()) return run_dice(dice_h, dice_y, dice_inner, dice_outer, dice_gamma);
    } catch (const bldet::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
