// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "vesselmip/depthmap.hpp"
#include "vesselmip/errors.hpp"
#include "vesselmip/png_io.hpp"
#include "vesselmip/rng.hpp"
#include "vesselmip/supervision.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace vesselmip {

namespace {

Axis axis_from_char(char c) {
    switch (c) {
        case 'x': return Axis::X;
        case 'y': return Axis::Y;
        case 'z': return Axis::Z;
        default: throw Error(std::string("unknown axis '") + c + "'");
    }
}

std::vector<Axis> parse_axes(const std::string& s) {
    std::vector<Axis> axes;
    for (char c : s) {
        if (c == ',') {
            continue;
        }
        const Axis a = axis_from_char(c);
        if (std::find(axes.begin(), axes.end(), a) != axes.end()) {
            throw Error("duplicate axis in condition '" + s + "'");
        }
        axes.push_back(a);
    }
    return axes;
}

constexpr std::uint64_t kRand1Salt = 0x72616e64317670ULL;

struct CsvRow {
    std::uint64_t phantom_seed;
    std::string condition;
    int filled;
    MetricsReport report;
};

void append_row(std::string& out, const CsvRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%llu,%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  static_cast<unsigned long long>(r.phantom_seed), r.condition.c_str(),
                  r.filled, r.report.overlap.dice, r.report.overlap.precision,
                  r.report.overlap.recall, r.report.skeleton_recall, r.report.msd);
    out += buf;
}

AggregateStats stats_of(const std::vector<double>& xs) {
    AggregateStats s;
    if (xs.empty()) {
        return s;
    }
    double sum = 0, sum2 = 0;
    for (double x : xs) {
        sum += x;
        sum2 += x * x;
    }
    const double n = double(xs.size());
    s.mean = sum / n;
    s.stddev = std::sqrt(std::max(0.0, sum2 / n - s.mean * s.mean));
    return s;
}

MetricAggregate aggregate_of(const std::vector<CellResult>& cells, bool filled) {
    std::vector<double> dice, prec, rec, skel, msd;
    for (const CellResult& c : cells) {
        if (c.failed) {
            continue;
        }
        const MetricsReport& r = filled ? c.filled : c.raw;
        dice.push_back(r.overlap.dice);
        prec.push_back(r.overlap.precision);
        rec.push_back(r.overlap.recall);
        skel.push_back(r.skeleton_recall);
        msd.push_back(r.msd);
    }
    return {stats_of(dice), stats_of(prec), stats_of(rec), stats_of(skel), stats_of(msd)};
}

json stats_json(const AggregateStats& s) {
    return json{{"mean", s.mean}, {"std", s.stddev}};
}

json aggregate_json(const MetricAggregate& a) {
    return json{{"dice", stats_json(a.dice)},
                {"precision", stats_json(a.precision)},
                {"recall", stats_json(a.recall)},
                {"skeleton_recall", stats_json(a.skeleton_recall)},
                {"msd", stats_json(a.msd)}};
}

std::string sanitize(const std::string& token) {
    std::string s = token;
    std::replace(s.begin(), s.end(), ':', '-');
    return s;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open for writing: " + path.string());
    }
    f << text;
    if (!f) {
        throw IoError("write failed: " + path.string());
    }
}

void check_keys(const json& j, const char* what, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw Error(std::string("config: ") + what + " must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            throw Error(std::string("config: unknown key '") + key + "' in " + what);
        }
    }
}

}  // namespace

Condition parse_condition(const std::string& token) {
    if (token == "3d") {
        return {Condition::Kind::Full3D, {}, false};
    }
    if (token == "rand1") {
        return {Condition::Kind::Rand1, {}, false};
    }
    if (token == "rand1+d") {
        return {Condition::Kind::Rand1, {}, true};
    }
    if (token == "fixed3") {
        return {Condition::Kind::Fixed, {Axis::X, Axis::Y, Axis::Z}, false};
    }
    if (token == "fixed2") {
        return {Condition::Kind::Fixed, {Axis::X, Axis::Y}, false};
    }
    if (token.rfind("fixed1:", 0) == 0 || token.rfind("fixed2:", 0) == 0) {
        const std::size_t want = token[5] == '1' ? 1 : 2;
        const std::vector<Axis> axes = parse_axes(token.substr(7));
        if (axes.size() != want) {
            throw Error("condition '" + token + "' needs exactly " + std::to_string(want) +
                        (want == 1 ? " axis" : " axes"));
        }
        return {Condition::Kind::Fixed, axes, false};
    }
    throw Error("unknown condition '" + token + "'");
}

std::string to_string(const Condition& c) {
    switch (c.kind) {
        case Condition::Kind::Full3D:
            return "3d";
        case Condition::Kind::Rand1:
            return c.with_depth ? "rand1+d" : "rand1";
        case Condition::Kind::Fixed: {
            if (c.axes.size() == 3) {
                return "fixed3";
            }
            std::string s = "fixed" + std::to_string(c.axes.size()) + ":";
            for (Axis a : c.axes) {
                s += axis_name(a);
            }
            return s;
        }
    }
    throw Error("invalid condition");
}

std::vector<Condition> default_conditions() {
    return {parse_condition("fixed1:z"), parse_condition("fixed2:xy"),
            parse_condition("fixed3"), parse_condition("rand1"), parse_condition("rand1+d")};
}

PhantomConfig suite_phantom_config(const PhantomConfig& base, std::uint64_t seed) {
    PhantomConfig cfg = base;
    if (cfg.branch_count == 0) {
        cfg.branch_count = standard_config(seed).branch_count;
    }
    return cfg;
}

Axis rand1_axis(std::uint64_t master_seed, std::uint64_t phantom_seed) {
    return Axis(int(splitmix64(splitmix64(master_seed ^ kRand1Salt) + phantom_seed) % 3));
}

std::vector<ConditionResult> run(const ExperimentConfig& cfg) {
    if (cfg.conditions.empty()) {
        throw Error("experiment needs at least one condition");
    }
    if (cfg.suite_size < 1) {
        throw Error("suite_size must be >= 1");
    }

    std::vector<Phantom> suite;
    suite.reserve(std::size_t(cfg.suite_size));
    for (int i = 0; i < cfg.suite_size; ++i) {
        const std::uint64_t seed = std::uint64_t(i);
        suite.push_back(generate(seed, suite_phantom_config(cfg.phantom, seed)));
    }

    std::vector<ConditionResult> results;
    for (const Condition& cond : cfg.conditions) {
        ConditionResult cr;
        cr.condition = to_string(cond);
        for (int i = 0; i < cfg.suite_size; ++i) {
            const Phantom& ph = suite[std::size_t(i)];
            CellResult cell;
            cell.phantom_seed = ph.seed;
            cell.condition = cr.condition;
            try {
                std::vector<Axis> axes;
                if (cond.kind == Condition::Kind::Fixed) {
                    axes = cond.axes;
                } else if (cond.kind == Condition::Kind::Rand1) {
                    axes = {rand1_axis(cfg.master_seed, ph.seed)};
                }

                SupervisionBundle bundle;
                for (Axis a : axes) {
                    bundle.annotations.push_back(derive_annotation(ph.gt, a));
                }
                if (cond.with_depth) {
                    bundle.depth_map =
                        reconstruct(bundle.annotations.front(), ph.intensity, cfg.tau);
                }
                bundle.alpha = cond.with_depth ? cfg.alpha : 1.0;

                const FitResult fr = cond.kind == Condition::Kind::Full3D
                                         ? fit_full3d(ph.gt, cfg.fit)
                                         : fit(ph.intensity, bundle, cfg.fit);

                const Mask3D filled_pred = fill_holes(fr.prediction);
                cell.raw = evaluate(fr.prediction, ph.gt, ph.centerline);
                cell.filled = evaluate(filled_pred, ph.gt, ph.centerline);
                if (i < cfg.render_samples) {
                    cell.artifacts = CellArtifacts{fr.probability, fr.prediction,
                                                   bundle.annotations, bundle.depth_map};
                }
            } catch (const Error& e) {
                cell.failed = true;
                cell.error = "phantom " + std::to_string(ph.seed) + " / " + cr.condition +
                             ": " + e.what();
                cell.artifacts.reset();
            }
            cr.failed_count += std::size_t(cell.failed);
            cr.cells.push_back(std::move(cell));
        }
        cr.raw = aggregate_of(cr.cells, false);
        cr.filled = aggregate_of(cr.cells, true);
        results.push_back(std::move(cr));
    }
    return results;
}

bool any_cell_failed(const std::vector<ConditionResult>& results) {
    for (const ConditionResult& cr : results) {
        if (cr.failed_count > 0) {
            return true;
        }
    }
    return false;
}

std::string csv_string(const std::vector<ConditionResult>& results) {
    std::vector<CsvRow> rows;
    for (const ConditionResult& cr : results) {
        for (const CellResult& c : cr.cells) {
            if (c.failed) {
                continue;
            }
            rows.push_back({c.phantom_seed, c.condition, 0, c.raw});
            rows.push_back({c.phantom_seed, c.condition, 1, c.filled});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
        return std::tie(a.phantom_seed, a.condition, a.filled) <
               std::tie(b.phantom_seed, b.condition, b.filled);
    });
    std::string out = "phantom_seed,condition,filled,dice,precision,recall,skeleton_recall,msd\n";
    for (const CsvRow& r : rows) {
        append_row(out, r);
    }
    return out;
}

std::string aggregate_json_string(const std::vector<ConditionResult>& results) {
    json conditions = json::object();
    for (const ConditionResult& cr : results) {
        json failed = json::array();
        for (const CellResult& c : cr.cells) {
            if (c.failed) {
                failed.push_back({{"phantom_seed", c.phantom_seed}, {"error", c.error}});
            }
        }
        conditions[cr.condition] = {{"cells", cr.cells.size()},
                                    {"failed", failed},
                                    {"raw", aggregate_json(cr.raw)},
                                    {"filled", aggregate_json(cr.filled)}};
    }
    return json{{"conditions", conditions}}.dump(2) + "\n";
}

void render_report(const ExperimentConfig& cfg, const std::vector<ConditionResult>& results) {
    if (results.empty()) {
        throw Error("render_report needs at least one result");
    }
    const fs::path out(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + out.string());
    }
    write_text(out / "metrics.csv", csv_string(results));
    write_text(out / "aggregate.json", aggregate_json_string(results));

    std::map<std::uint64_t, Phantom> regenerated;
    for (const ConditionResult& cr : results) {
        for (const CellResult& cell : cr.cells) {
            if (!cell.artifacts) {
                continue;
            }
            const fs::path pdir = out / "renders" / ("phantom_" + std::to_string(cell.phantom_seed));
            auto it = regenerated.find(cell.phantom_seed);
            if (it == regenerated.end()) {
                Phantom ph = generate(cell.phantom_seed,
                                      suite_phantom_config(cfg.phantom, cell.phantom_seed));
                it = regenerated.emplace(cell.phantom_seed, std::move(ph)).first;
                fs::create_directories(pdir);
                for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
                    const std::string suffix = std::string(1, axis_name(a)) + ".png";
                    write_png16(pdir / ("mip_" + suffix), mip(it->second.intensity, a).image);
                    const DepthEnhancedMip de = depth_enhanced_mip(it->second.intensity, a);
                    write_png16(pdir / ("pfw_" + suffix), de.p_fw);
                    write_png16(pdir / ("pbw_" + suffix), de.p_bw);
                }
            }
            const fs::path cdir = pdir / sanitize(cell.condition);
            fs::create_directories(cdir);
            const CellArtifacts& art = *cell.artifacts;
            std::vector<Axis> render_axes;
            for (const Annotation2D& ann : art.annotations) {
                render_axes.push_back(ann.axis);
                const std::string suffix = std::string(1, axis_name(ann.axis)) + ".png";
                write_png8(cdir / ("annotation_" + suffix), ann.mask);
            }
            if (render_axes.empty()) {
                render_axes = {Axis::X, Axis::Y, Axis::Z};
            }
            for (Axis a : render_axes) {
                const std::string suffix = std::string(1, axis_name(a)) + ".png";
                write_png16(cdir / ("pred_" + suffix), soft_mip(art.probability, a).image);
            }
            if (art.depth) {
                const std::string suffix = std::string(1, axis_name(art.depth->axis)) + ".png";
                write_png8(cdir / ("depth_" + suffix),
                           derive_annotation(art.depth->mask, art.depth->axis).mask);
            }
        }
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open config: " + path);
    }
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw Error("config parse error in " + path + ": " + e.what());
    }

    ExperimentConfig cfg;
    check_keys(j, "config",
               {"suite_size", "phantom", "conditions", "alpha", "tau", "fit", "out_dir",
                "render_samples", "master_seed"});
    try {
        cfg.suite_size = j.value("suite_size", cfg.suite_size);
        cfg.alpha = j.value("alpha", cfg.alpha);
        cfg.tau = j.value("tau", cfg.tau);
        cfg.out_dir = j.value("out_dir", cfg.out_dir);
        cfg.render_samples = j.value("render_samples", cfg.render_samples);
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        if (j.contains("conditions")) {
            cfg.conditions.clear();
            for (const auto& tok : j.at("conditions")) {
                cfg.conditions.push_back(parse_condition(tok.get<std::string>()));
            }
        }
        if (j.contains("phantom")) {
            const json& p = j.at("phantom");
            check_keys(p, "phantom",
                       {"dims", "branch_count", "radius_min", "radius_max", "vessel_intensity",
                        "noise_amplitude", "occluder_count", "curvature"});
            PhantomConfig& pc = cfg.phantom;
            if (p.contains("dims")) {
                const auto d = p.at("dims").get<std::vector<int>>();
                if (d.size() != 3) {
                    throw Error("config: phantom.dims needs 3 entries");
                }
                pc.dims = {d[0], d[1], d[2]};
            }
            pc.branch_count = p.value("branch_count", pc.branch_count);
            pc.radius_min = p.value("radius_min", pc.radius_min);
            pc.radius_max = p.value("radius_max", pc.radius_max);
            pc.vessel_intensity = p.value("vessel_intensity", pc.vessel_intensity);
            pc.noise_amplitude = p.value("noise_amplitude", pc.noise_amplitude);
            pc.occluder_count = p.value("occluder_count", pc.occluder_count);
            pc.curvature = p.value("curvature", pc.curvature);
        }
        if (j.contains("fit")) {
            const json& q = j.at("fit");
            check_keys(q, "fit",
                       {"steps", "learning_rate", "beta1", "beta2", "adam_eps", "init_logit",
                        "init_scale", "smoothing_sigma", "binarize_threshold", "seed"});
            FitConfig& fc = cfg.fit;
            fc.steps = q.value("steps", fc.steps);
            fc.learning_rate = q.value("learning_rate", fc.learning_rate);
            fc.beta1 = q.value("beta1", fc.beta1);
            fc.beta2 = q.value("beta2", fc.beta2);
            fc.adam_eps = q.value("adam_eps", fc.adam_eps);
            fc.init_logit = q.value("init_logit", fc.init_logit);
            fc.init_scale = q.value("init_scale", fc.init_scale);
            fc.smoothing_sigma = q.value("smoothing_sigma", fc.smoothing_sigma);
            fc.binarize_threshold = q.value("binarize_threshold", fc.binarize_threshold);
            fc.seed = q.value("seed", fc.seed);
        }
    } catch (const json::exception& e) {
        throw Error("config field error in " + path + ": " + e.what());
    }
    if (cfg.alpha < 0.0 || cfg.alpha > 1.0) {
        throw Error("config: alpha must lie in [0, 1]");
    }
    if (cfg.tau < 0.0) {
        throw Error("config: tau must be >= 0");
    }
    return cfg;
}

}  // namespace vesselmip
