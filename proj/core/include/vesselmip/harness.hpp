// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_HARNESS_HPP
#define VESSELMIP_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vesselmip/metrics.hpp"
#include "vesselmip/optimfit.hpp"
#include "vesselmip/phantom.hpp"
#include "vesselmip/projection.hpp"
#include "vesselmip/volume.hpp"

namespace vesselmip {

// Supervision condition for one experiment cell.
//
// Tokens: "3d" (dense voxel labels), "fixed1:<axis>", "fixed2:<axes>"
// (default xy), "fixed3" (all three axes), "rand1" (one seed-drawn axis per
// phantom), "rand1+d" (same, plus the reconstructed depth map).
struct Condition {
    enum class Kind { Full3D, Fixed, Rand1 };

    Kind kind = Kind::Fixed;
    std::vector<Axis> axes;   // annotated axes; Fixed only
    bool with_depth = false;  // Rand1 only

    bool operator==(const Condition&) const = default;
};

// Throws Error on an unknown or malformed token.
Condition parse_condition(const std::string& token);

// Canonical token; parse_condition(to_string(c)) == c.
std::string to_string(const Condition& c);

// The five-condition viewpoint ablation: fixed1:z, fixed2:xy, fixed3,
// rand1, rand1+d.
std::vector<Condition> default_conditions();

struct ExperimentConfig {
    int suite_size = 20;
    // branch_count == 0 selects the per-seed suite variation (3 to 6).
    PhantomConfig phantom{.branch_count = 0};
    std::vector<Condition> conditions = default_conditions();
    // Projection-term weight for cells that carry a depth term; cells
    // without one optimize the pure projection loss (alpha 1).
    double alpha = 0.5;
    double tau = 0.05;
    FitConfig fit{};
    std::string out_dir = "out";
    // Phantoms with index < render_samples get PNG renders.
    int render_samples = 2;
    std::uint64_t master_seed = 0;
};

// Mirrors ExperimentConfig field names; conditions appear as tokens.
// Unknown keys are rejected.  Throws IoError / Error.
ExperimentConfig load_experiment_config(const std::string& path);

// Phantom settings for one suite member: base with seed-derived branch
// count when base.branch_count == 0.
PhantomConfig suite_phantom_config(const PhantomConfig& base, std::uint64_t seed);

// The axis a rand1 condition annotates for this phantom.  Uniform over
// {X, Y, Z}, fixed per (master_seed, phantom) across conditions.
Axis rand1_axis(std::uint64_t master_seed, std::uint64_t phantom_seed);

// Inputs retained for rendering (first render_samples phantoms only).
struct CellArtifacts {
    Volume probability;
    Mask3D prediction;  // pre-fill
    std::vector<Annotation2D> annotations;
    std::optional<DepthMap> depth;
};

struct CellResult {
    std::uint64_t phantom_seed = 0;
    std::string condition;
    bool failed = false;
    std::string error;      // failure context when failed
    MetricsReport raw;      // pre-fill
    MetricsReport filled;   // post fill_holes
    std::optional<CellArtifacts> artifacts;
};

struct AggregateStats {
    double mean = 0;
    double stddev = 0;  // population
};

struct MetricAggregate {
    AggregateStats dice, precision, recall, skeleton_recall, msd;
};

struct ConditionResult {
    std::string condition;
    std::vector<CellResult> cells;  // ascending phantom_seed
    MetricAggregate raw;            // over non-failed cells
    MetricAggregate filled;
    std::size_t failed_count = 0;
};

// Runs every (phantom, condition) cell: derive silhouettes on the
// condition's axes, reconstruct the depth map from the intensity volume
// when the condition carries one, fit, evaluate raw and hole-filled
// predictions.  A diverged or degenerate cell is marked failed with
// context and the remaining cells still run.  Deterministic from
// master_seed.
std::vector<ConditionResult> run(const ExperimentConfig& cfg);

bool any_cell_failed(const std::vector<ConditionResult>& results);

// Rows sorted by (phantom_seed, condition, filled); two rows per
// non-failed cell.  Header:
// phantom_seed,condition,filled,dice,precision,recall,skeleton_recall,msd
std::string csv_string(const std::vector<ConditionResult>& results);

// Per-condition cell counts, failures, and mean/std per metric.
std::string aggregate_json_string(const std::vector<ConditionResult>& results);

// Writes <out_dir>/metrics.csv, <out_dir>/aggregate.json, and per-sample
// PNG renders (mip, p_fw, p_bw per axis; annotation, depth-map and
// prediction projections per condition) under <out_dir>/renders/.
void render_report(const ExperimentConfig& cfg, const std::vector<ConditionResult>& results);

}  // namespace vesselmip

#endif
