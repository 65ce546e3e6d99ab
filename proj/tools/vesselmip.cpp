// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: phantom generation, projection, annotation,
// depth-map reconstruction, logit-field fitting, evaluation, and the
// multi-condition benchmark, one subcommand each.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vesselmip/depthmap.hpp"
#include "vesselmip/errors.hpp"
#include "vesselmip/harness.hpp"
#include "vesselmip/metrics.hpp"
#include "vesselmip/optimfit.hpp"
#include "vesselmip/phantom.hpp"
#include "vesselmip/png_io.hpp"
#include "vesselmip/projection.hpp"
#include "vesselmip/volume_io.hpp"

using json = nlohmann::json;
using namespace vesselmip;

namespace {

Axis parse_axis(const std::string& s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    throw Error("unknown axis '" + s + "' (expected x, y, or z)");
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open for writing: " + path);
    }
    f << j.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open: " + path);
    }
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw Error(path + ": " + e.what());
    }
}

std::vector<Coord> load_centerline(const std::string& path) {
    const json j = load_json(path);
    if (!j.is_array()) {
        throw Error(path + ": centerline must be an array of [x,y,z] triples");
    }
    std::vector<Coord> out;
    for (const auto& e : j) {
        const auto t = e.get<std::vector<int>>();
        if (t.size() != 3) {
            throw Error(path + ": centerline entries must have 3 coordinates");
        }
        out.push_back({t[0], t[1], t[2]});
    }
    return out;
}

json config_echo(const PhantomConfig& c) {
    return json{{"dims", {c.dims.x, c.dims.y, c.dims.z}},
                {"branch_count", c.branch_count},
                {"radius_min", c.radius_min},
                {"radius_max", c.radius_max},
                {"vessel_intensity", c.vessel_intensity},
                {"noise_amplitude", c.noise_amplitude},
                {"occluder_count", c.occluder_count},
                {"curvature", c.curvature}};
}

json report_json(const MetricsReport& r) {
    return json{{"dice", r.overlap.dice},
                {"precision", r.overlap.precision},
                {"recall", r.overlap.recall},
                {"skeleton_recall", r.skeleton_recall},
                {"msd", r.msd},
                {"tp", r.overlap.counts.tp},
                {"fp", r.overlap.counts.fp},
                {"fn", r.overlap.counts.fn}};
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open for writing: " + path);
    }
    f << "step,total,term_2d,term_depth\n";
    char buf[160];
    for (const TraceRow& r : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g\n", r.step, r.total, r.term_2d,
                      r.term_depth);
        f << buf;
    }
}

Annotation2D load_annotation(const std::string& png_path) {
    const std::filesystem::path p(png_path);
    const std::string tag_path = (p.parent_path() / p.stem()).string() + ".json";
    const json tag = load_json(tag_path);
    Annotation2D ann;
    ann.axis = parse_axis(tag.at("axis").get<std::string>());
    const Grid2D<std::uint8_t> raw = read_png8(png_path);
    ann.mask = Grid2D<std::uint8_t>(raw.nu(), raw.nv());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        ann.mask[i] = raw[i] ? 1 : 0;
    }
    return ann;
}

int cmd_gen(const std::string& out, std::uint64_t seed, const PhantomConfig& base) {
    const PhantomConfig cfg = suite_phantom_config(base, seed);
    const Phantom ph = generate(seed, cfg);
    save_volume(out + ".vol", ph.intensity);
    save_mask(out + "_gt.vol", ph.gt);
    json centerline = json::array();
    for (const Coord& c : ph.centerline) {
        centerline.push_back({c.x, c.y, c.z});
    }
    write_json(out + "_centerline.json", centerline);
    write_json(out + "_meta.json", json{{"seed", seed}, {"config", config_echo(cfg)}});
    std::size_t fg = 0;
    for (std::size_t i = 0; i < ph.gt.size(); ++i) {
        fg += ph.gt[i];
    }
    std::cout << "phantom seed " << seed << ": " << fg << " foreground voxels, "
              << ph.centerline.size() << " centerline voxels\n";
    return 0;
}

void write_depth_image(const std::string& stem, const Grid2D<std::int32_t>& depth, Axis axis) {
    Grid2D<std::uint16_t> img(depth.nu(), depth.nv());
    json values = json::array();
    for (std::size_t i = 0; i < depth.size(); ++i) {
        img[i] = std::uint16_t(depth[i]);
        values.push_back(depth[i]);
    }
    write_png16_raw(stem + ".png", img);
    write_json(stem + ".json", json{{"axis", std::string(1, axis_name(axis))},
                                    {"shape", {depth.nu(), depth.nv()}},
                                    {"order", "u-fastest"},
                                    {"values", values}});
}

int cmd_project(const std::string& vol_path, const std::string& axis_str,
                const std::string& out) {
    const Axis axis = parse_axis(axis_str);
    const Volume v = load_volume(vol_path);
    const std::string a(1, axis_name(axis));
    const MipResult m = mip(v, axis);
    write_png16(out + "_mip_" + a + ".png", m.image);
    const DepthEnhancedMip de = depth_enhanced_mip(v, axis);
    write_png16(out + "_pfw_" + a + ".png", de.p_fw);
    write_png16(out + "_pbw_" + a + ".png", de.p_bw);
    write_depth_image(out + "_zfw_" + a, m.depth.forward, axis);
    write_depth_image(out + "_zbw_" + a, m.depth.backward, axis);
    std::cout << "wrote mip/pfw/pbw/zfw/zbw for axis " << a << "\n";
    return 0;
}

int cmd_annotate(const std::string& gt_path, const std::string& axis_str,
                 const std::string& out) {
    const Axis axis = parse_axis(axis_str);
    const Mask3D gt = load_mask(gt_path);
    const Annotation2D ann = derive_annotation(gt, axis);
    write_png8(out + ".png", ann.mask);
    write_json(out + ".json", json{{"axis", std::string(1, axis_name(axis))}});
    return 0;
}

int cmd_depthmap(const std::string& vol_path, const std::string& ann_path, double tau,
                 const std::string& out) {
    const Volume v = load_volume(vol_path);
    const Annotation2D ann = load_annotation(ann_path);
    const DepthMap dm = reconstruct(ann, v, tau);
    save_mask(out, dm.mask);
    std::cout << "depth map: " << dm.positives << " known-foreground voxels\n";
    return 0;
}

int cmd_fit(const std::string& vol_path, const std::string& gt_path, const std::string& cond_str,
            double alpha, double tau, const FitConfig& fit_cfg, const std::string& out_pred,
            const std::string& out_trace) {
    const Condition cond = parse_condition(cond_str);
    const Mask3D gt = load_mask(gt_path);

    FitResult fr;
    if (cond.kind == Condition::Kind::Full3D) {
        fr = fit_full3d(gt, fit_cfg);
    } else {
        if (vol_path.empty()) {
            throw Error("fit: --vol is required for projection conditions");
        }
        const Volume v = load_volume(vol_path);
        if (v.dims() != gt.dims()) {
            throw DimsMismatchError("fit: volume and gt dims differ");
        }
        std::vector<Axis> axes = cond.axes;
        if (cond.kind == Condition::Kind::Rand1) {
            axes = {rand1_axis(fit_cfg.seed, 0)};
        }
        SupervisionBundle bundle;
        for (Axis a : axes) {
            bundle.annotations.push_back(derive_annotation(gt, a));
        }
        if (cond.with_depth) {
            bundle.depth_map = reconstruct(bundle.annotations.front(), v, tau);
        }
        bundle.alpha = cond.with_depth ? alpha : 1.0;
        fr = fit(v, bundle, fit_cfg);
    }

    save_mask(out_pred, fr.prediction);
    if (!out_trace.empty()) {
        write_trace_csv(out_trace, fr.trace);
    }
    std::cout << "final loss " << fr.trace.back().total << " after " << fr.trace.size()
              << " steps\n";
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path,
             const std::string& centerline_path, const std::string& csv_path,
             const std::string& label) {
    const Mask3D pred = load_mask(pred_path);
    const Mask3D gt = load_mask(gt_path);
    const std::vector<Coord> centerline = load_centerline(centerline_path);
    const MetricsReport r = evaluate(pred, gt, centerline);
    std::cout << report_json(r).dump(2) << "\n";
    if (!csv_path.empty()) {
        const bool fresh = !std::filesystem::exists(csv_path);
        std::ofstream f(csv_path, std::ios::binary | std::ios::app);
        if (!f) {
            throw IoError("cannot open for writing: " + csv_path);
        }
        if (fresh) {
            f << "label,dice,precision,recall,skeleton_recall,msd\n";
        }
        char buf[224];
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f\n", label.c_str(),
                      r.overlap.dice, r.overlap.precision, r.overlap.recall, r.skeleton_recall,
                      r.msd);
        f << buf;
    }
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_override) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (!out_override.empty()) {
        cfg.out_dir = out_override;
    }
    const std::vector<ConditionResult> results = run(cfg);
    render_report(cfg, results);
    for (const ConditionResult& cr : results) {
        std::printf("%-10s dice %.4f +- %.4f (filled %.4f +- %.4f), %zu/%zu cells ok\n",
                    cr.condition.c_str(), cr.raw.dice.mean, cr.raw.dice.stddev,
                    cr.filled.dice.mean, cr.filled.dice.stddev,
                    cr.cells.size() - cr.failed_count, cr.cells.size());
        for (const CellResult& c : cr.cells) {
            if (c.failed) {
                std::printf("  FAILED %s\n", c.error.c_str());
            }
        }
    }
    std::cout << "report written to " << cfg.out_dir << "\n";
    return any_cell_failed(results) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weakly-supervised vessel segmentation from annotated projections"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic vessel phantom");
    std::string gen_out;
    std::uint64_t gen_seed = 0;
    PhantomConfig gen_cfg;
    gen_cfg.branch_count = 0;
    std::vector<int> gen_dims{64, 64, 64};
    gen->add_option("--out", gen_out, "Output stem")->required();
    gen->add_option("--seed", gen_seed, "Phantom seed");
    gen->add_option("--dims", gen_dims, "Volume extents")->expected(3);
    gen->add_option("--branches", gen_cfg.branch_count,
                    "Branch count (0 means the seed-derived suite value)");
    gen->add_option("--radius-min", gen_cfg.radius_min, "Minimum vessel radius");
    gen->add_option("--radius-max", gen_cfg.radius_max, "Maximum vessel radius");
    gen->add_option("--vessel-intensity", gen_cfg.vessel_intensity, "Vessel intensity");
    gen->add_option("--noise-amplitude", gen_cfg.noise_amplitude, "Background noise amplitude");
    gen->add_option("--occluders", gen_cfg.occluder_count, "Bright distractor count");
    gen->add_option("--curvature", gen_cfg.curvature, "Centerline direction jitter");

    // project
    auto* project = app.add_subcommand("project", "Project a volume along an axis");
    std::string prj_vol, prj_axis = "z", prj_out;
    project->add_option("--vol", prj_vol, "Input volume (.vol)")->required();
    project->add_option("--axis", prj_axis, "Projection axis (x|y|z)");
    project->add_option("--out", prj_out, "Output stem")->required();

    // annotate
    auto* annotate = app.add_subcommand("annotate", "Derive a silhouette annotation from a mask");
    std::string ann_gt, ann_axis = "z", ann_out;
    annotate->add_option("--gt", ann_gt, "Ground-truth mask (.vol)")->required();
    annotate->add_option("--axis", ann_axis, "Projection axis (x|y|z)");
    annotate->add_option("--out", ann_out, "Output stem")->required();

    // depthmap
    auto* depthmap = app.add_subcommand("depthmap", "Reconstruct a depth map");
    std::string dm_vol, dm_ann, dm_out;
    double dm_tau = 0.05;
    depthmap->add_option("--vol", dm_vol, "Intensity volume (.vol)")->required();
    depthmap->add_option("--annotation", dm_ann, "Annotation PNG (with .json tag)")->required();
    depthmap->add_option("--tau", dm_tau, "Span fluctuation tolerance");
    depthmap->add_option("--out", dm_out, "Output mask (.vol)")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Optimize a voxel logit field");
    std::string fit_vol, fit_gt, fit_cond = "rand1+d", fit_pred, fit_trace;
    double fit_alpha = 0.5, fit_tau = 0.05;
    FitConfig fit_cfg;
    fit_cmd->add_option("--vol", fit_vol,
                        "Intensity volume (.vol); guidance and depth source, required unless "
                        "--cond 3d");
    fit_cmd->add_option("--gt", fit_gt, "Ground-truth mask (.vol), annotation source")->required();
    fit_cmd->add_option("--cond", fit_cond,
                        "Condition: 3d, fixed1:<axis>, fixed2:<axes>, fixed3, rand1, rand1+d");
    fit_cmd->add_option("--alpha", fit_alpha, "Projection-term weight for depth conditions");
    fit_cmd->add_option("--tau", fit_tau, "Depth-map fluctuation tolerance");
    fit_cmd->add_option("--steps", fit_cfg.steps, "Optimization steps");
    fit_cmd->add_option("--lr", fit_cfg.learning_rate, "Learning rate");
    fit_cmd->add_option("--sigma", fit_cfg.smoothing_sigma, "Smoothing sigma (0 disables)");
    fit_cmd->add_option("--init-logit", fit_cfg.init_logit, "Initial logit offset");
    fit_cmd->add_option("--init-scale", fit_cfg.init_scale,
                        "Intensity-guidance weight on the initial logits (0 disables)");
    fit_cmd->add_option("--seed", fit_cfg.seed, "Seed for the rand1 axis draw");
    fit_cmd->add_option("--out-pred", fit_pred, "Output prediction mask (.vol)")->required();
    fit_cmd->add_option("--out-trace", fit_trace, "Loss trace CSV path");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a prediction against ground truth");
    std::string ev_pred, ev_gt, ev_center, ev_csv, ev_label = "pred";
    eval_cmd->add_option("--pred", ev_pred, "Prediction mask (.vol)")->required();
    eval_cmd->add_option("--gt", ev_gt, "Ground-truth mask (.vol)")->required();
    eval_cmd->add_option("--centerline", ev_center, "Centerline JSON")->required();
    eval_cmd->add_option("--csv", ev_csv, "CSV file to append the row to");
    eval_cmd->add_option("--label", ev_label, "Row label for the CSV");

    // bench
    auto* bench = app.add_subcommand("bench", "Run the multi-condition benchmark");
    std::string bench_cfg, bench_out;
    bench->add_option("--config", bench_cfg, "Experiment config JSON")->required();
    bench->add_option("--out", bench_out, "Output directory (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            gen_cfg.dims = {gen_dims[0], gen_dims[1], gen_dims[2]};
            return cmd_gen(gen_out, gen_seed, gen_cfg);
        }
        if (*project) {
            return cmd_project(prj_vol, prj_axis, prj_out);
        }
        if (*annotate) {
            return cmd_annotate(ann_gt, ann_axis, ann_out);
        }
        if (*depthmap) {
            return cmd_depthmap(dm_vol, dm_ann, dm_tau, dm_out);
        }
        if (*fit_cmd) {
            return cmd_fit(fit_vol, fit_gt, fit_cond, fit_alpha, fit_tau, fit_cfg, fit_pred,
                           fit_trace);
        }
        if (*eval_cmd) {
            return cmd_eval(ev_pred, ev_gt, ev_center, ev_csv, ev_label);
        }
        if (*bench) {
            return cmd_bench(bench_cfg, bench_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
