#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crowdtex/forest.hpp"
#include "crowdtex/manifest.hpp"
#include "crowdtex/pipeline.hpp"
#include "crowdtex/roc.hpp"
#include "crowdtex/sample.hpp"

namespace crowdtex {

/// Assignment of every source video (group) to one of k folds.
struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::map<std::string, int> assignment;

    int fold_of(const std::string& group) const;
    std::vector<std::string> groups_in(int fold) const;
};

/// Groups (sorted, then shuffled by `seed`) dealt round-robin into k folds.
/// Throws std::invalid_argument when there are fewer groups than k.
FoldPlan grouped_kfold(std::span<const LabeledSample> samples, int k, std::uint64_t seed);
FoldPlan grouped_kfold_groups(std::vector<std::string> groups, int k, std::uint64_t seed);

struct EvalParams {
    int folds = 5;
    int repeats = 10;
    std::uint64_t seed = 0;
    ForestParams forest{};
    double threshold = 0.5;
    int max_redraws = 64;  ///< per repeat, for single-class training splits
};

struct RepeatResult {
    std::uint64_t plan_seed = 0;
    int redraws = 0;
    RocResult roc;                  ///< over test scores pooled across folds
    std::vector<double> fold_aucs;  ///< NaN where a test fold holds one class
    std::vector<double> scores;     ///< pooled test scores, dataset order
};

struct EvalResult {
    std::vector<RepeatResult> repeats;
    double mean_auc = 0.0;
    double std_auc = 0.0;  ///< population standard deviation across repeats
    double mean_accuracy_at_threshold = 0.0;
    double std_accuracy_at_threshold = 0.0;
    double mean_accuracy_at_youden = 0.0;
    double std_accuracy_at_youden = 0.0;
    int total_redraws = 0;
};

/// Repeated grouped k-fold cross-validation of the random forest. Repeat r
/// depends only on (seed, r), so a run with fewer repeats reproduces the
/// leading repeats of a longer one. Training splits with one class are
/// redrawn with a fresh plan seed and counted.
EvalResult evaluate(std::span<const LabeledSample> dataset, const EvalParams& params);

/// Same labels permuted across videos (each group keeps a single label).
std::vector<LabeledSample> shuffle_group_labels(std::span<const LabeledSample> dataset, std::uint64_t seed);

struct ExtractionFailure {
    std::string group;
    std::string message;
};

struct DatasetBuild {
    std::vector<LabeledSample> samples;  ///< ordered by (manifest entry, frame)
    std::vector<ExtractionFailure> failures;
};

/// Runs the descriptor pipeline over every manifest entry (videos run
/// concurrently). Per-video failures are collected instead of thrown.
DatasetBuild build_dataset(const std::vector<VideoEntry>& videos, const PipelineConfig& config);

/// Mean cell IFU per texture feature for each class and their difference
/// (abnormal - normal), over every emitted window of every video.
struct IfuReport {
    std::array<double, kTextureFeatureCount> normal_mean{};
    std::array<double, kTextureFeatureCount> abnormal_mean{};
    std::array<double, kTextureFeatureCount> difference{};
    std::size_t normal_windows = 0;
    std::size_t abnormal_windows = 0;
};

IfuReport ifu_report(const std::vector<VideoEntry>& videos, const PipelineConfig& config);

enum class SweepAxis { PairRelationship, GridSize, WindowLength };

const char* to_string(SweepAxis axis) noexcept;
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepGrid {
    std::vector<OrientationSet> orientation_sets{OrientationSet::Eight, OrientationSet::Four, OrientationSet::Zero};
    std::vector<int> distances{1, 2, 4, 8, 16};
    std::vector<int> grid_sizes{1, 2, 4, 8, 16};
    std::vector<int> windows{6, 12, 24, 32, 64, 128};
};

/// One row of a results table. `valid` is false for configurations the
/// data cannot support; `note` says why.
struct ResultRow {
    std::string experiment;
    OrientationSet orientations = OrientationSet::Zero;
    int distance = 1;
    int grid_rows = 4;
    int grid_cols = 4;
    int window = 0;
    bool valid = true;
    std::string note;
    EvalResult result;
};

/// Cross-product over one axis with the others held at `base`; all rows
/// share the evaluation seed. Window sweeps reuse per-frame cell samples.
std::vector<ResultRow> sweep(const std::vector<VideoEntry>& videos, const PipelineConfig& base,
                             const EvalParams& params, SweepAxis axis, const SweepGrid& grid = {});

/// Orientation set matching `pairs`, or Zero if it is not one of the presets.
OrientationSet classify_orientations(const PairSpec& pairs);

// Results CSV: metadata as "# key=value" lines, then
//   experiment,orientations,distance,grid_rows,grid_cols,window,status,mean_auc,std_auc,
//   mean_acc_threshold,mean_acc_youden,redraws,auc_r1..auc_rN
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows,
                       const std::vector<std::pair<std::string, std::string>>& metadata);

// ROC CSV: experiment,repeat,threshold,fpr,tpr
void write_roc_csv(std::ostream& out, std::span<const ResultRow> rows);

}  // namespace crowdtex
