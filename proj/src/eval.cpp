#include "crowdtex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

#include "crowdtex/error.hpp"
#include "crowdtex/rng.hpp"

namespace crowdtex {

namespace {

constexpr std::uint64_t kTagPlan = 0x706c616e;
constexpr std::uint64_t kTagForest = 0x666f72657374;
constexpr std::uint64_t kTagShuffle = 0x73687566;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> distinct_groups(std::span<const LabeledSample> samples) {
    std::set<std::string> groups;
    for (const auto& s : samples) groups.insert(s.group);
    return {groups.begin(), groups.end()};
}

void mean_std(const std::vector<double>& values, double& mean, double& sd) {
    mean = sd = 0.0;
    if (values.empty()) return;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    for (double v : values) sd += (v - mean) * (v - mean);
    sd = std::sqrt(sd / static_cast<double>(values.size()));
}

}  // namespace

int FoldPlan::fold_of(const std::string& group) const {
    const auto it = assignment.find(group);
    if (it == assignment.end()) throw std::out_of_range("group '" + group + "' is not in the fold plan");
    return it->second;
}

std::vector<std::string> FoldPlan::groups_in(int fold) const {
    std::vector<std::string> out;
    for (const auto& [group, f] : assignment)
        if (f == fold) out.push_back(group);
    return out;
}

FoldPlan grouped_kfold_groups(std::vector<std::string> groups, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("grouped k-fold needs k >= 2");
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    if (groups.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("grouped k-fold: " + std::to_string(groups.size()) +
                                    " distinct videos cannot fill k=" + std::to_string(k) + " folds");
    rng::Engine engine(seed);
    rng::shuffle(groups.begin(), groups.end(), engine);
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    for (std::size_t i = 0; i < groups.size(); ++i)
        plan.assignment[groups[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return plan;
}

FoldPlan grouped_kfold(std::span<const LabeledSample> samples, int k, std::uint64_t seed) {
    return grouped_kfold_groups(distinct_groups(samples), k, seed);
}

EvalResult evaluate(std::span<const LabeledSample> dataset, const EvalParams& params) {
    if (params.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    if (dataset.empty()) throw std::invalid_argument("evaluation dataset is empty");
    const auto groups = distinct_groups(dataset);
    const int k = params.folds;
    (void)grouped_kfold_groups(groups, k, 0);  // validates k against the group count

    std::vector<int> labels;
    labels.reserve(dataset.size());
    for (const auto& s : dataset) labels.push_back(s.label);

    EvalResult result;
    for (int r = 0; r < params.repeats; ++r) {
        RepeatResult rep;
        FoldPlan plan;
        std::vector<int> fold_of_sample(dataset.size());
        for (int attempt = 0;; ++attempt) {
            if (attempt > params.max_redraws)
                throw ConfigError("could not draw a fold plan with two classes in every training split after " +
                            std::to_string(params.max_redraws) + " redraws");
            rep.plan_seed = rng::hash(params.seed, kTagPlan, static_cast<std::uint64_t>(r),
                                      static_cast<std::uint64_t>(attempt));
            plan = grouped_kfold_groups(groups, k, rep.plan_seed);
            std::vector<std::array<bool, 2>> train_has(static_cast<std::size_t>(k), {false, false});
            for (std::size_t i = 0; i < dataset.size(); ++i) {
                fold_of_sample[i] = plan.fold_of(dataset[i].group);
                for (int f = 0; f < k; ++f)
                    if (f != fold_of_sample[i]) train_has[static_cast<std::size_t>(f)][static_cast<std::size_t>(labels[i])] = true;
            }
            const bool ok = std::all_of(train_has.begin(), train_has.end(),
                                        [](const std::array<bool, 2>& h) { return h[0] && h[1]; });
            if (ok) break;
            ++rep.redraws;
        }

        rep.scores.assign(dataset.size(), 0.0);
        for (int f = 0; f < k; ++f) {
            std::vector<LabeledSample> train_set;
            std::vector<std::size_t> test;
            std::set<std::string> train_groups, test_groups;
            for (std::size_t i = 0; i < dataset.size(); ++i) {
                if (fold_of_sample[i] == f) {
                    test.push_back(i);
                    test_groups.insert(dataset[i].group);
                } else {
                    train_set.push_back(dataset[i]);
                    train_groups.insert(dataset[i].group);
                }
            }
            for (const auto& g : test_groups)
                if (train_groups.count(g)) throw std::logic_error("video '" + g + "' leaked into train and test");

            ForestParams forest = params.forest;
            forest.seed = rng::hash(params.seed, kTagForest, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(f));
            const ForestModel model = train(train_set, forest);
            std::vector<double> fold_scores;
            std::vector<int> fold_labels;
            for (std::size_t i : test) {
                rep.scores[i] = model.predict_proba(dataset[i].features);
                fold_scores.push_back(rep.scores[i]);
                fold_labels.push_back(labels[i]);
            }
            const bool both = std::count(fold_labels.begin(), fold_labels.end(), 1) > 0 &&
                              std::count(fold_labels.begin(), fold_labels.end(), 0) > 0;
            rep.fold_aucs.push_back(both ? auc_mann_whitney(fold_scores, fold_labels)
                                         : std::numeric_limits<double>::quiet_NaN());
        }
        rep.roc = roc_auc(rep.scores, labels, params.threshold);
        result.total_redraws += rep.redraws;
        result.repeats.push_back(std::move(rep));
    }

    std::vector<double> aucs, acc_t, acc_y;
    for (const auto& rep : result.repeats) {
        aucs.push_back(rep.roc.auc);
        acc_t.push_back(rep.roc.accuracy_at_threshold);
        acc_y.push_back(rep.roc.accuracy_at_youden);
    }
    mean_std(aucs, result.mean_auc, result.std_auc);
    mean_std(acc_t, result.mean_accuracy_at_threshold, result.std_accuracy_at_threshold);
    mean_std(acc_y, result.mean_accuracy_at_youden, result.std_accuracy_at_youden);
    return result;
}

std::vector<LabeledSample> shuffle_group_labels(std::span<const LabeledSample> dataset, std::uint64_t seed) {
    std::map<std::string, int> label_of;
    for (const auto& s : dataset) label_of.emplace(s.group, s.label);
    std::vector<int> labels;
    for (const auto& [g, l] : label_of) labels.push_back(l);
    rng::Engine engine(rng::hash(seed, kTagShuffle));
    rng::shuffle(labels.begin(), labels.end(), engine);
    std::size_t i = 0;
    for (auto& [g, l] : label_of) l = labels[i++];
    std::vector<LabeledSample> out(dataset.begin(), dataset.end());
    for (auto& s : out) s.label = label_of.at(s.group);
    return out;
}

DatasetBuild build_dataset(const std::vector<VideoEntry>& videos, const PipelineConfig& config) {
    std::vector<std::vector<LabeledSample>> per_video(videos.size());
    std::vector<std::string> errors(videos.size());

#pragma omp parallel for schedule(dynamic)
    for (long v = 0; v < static_cast<long>(videos.size()); ++v) {
        const auto& entry = videos[static_cast<std::size_t>(v)];
        try {
            auto source = open_source(entry.source);
            for (auto& d : extract_descriptors(*source, config))
                per_video[static_cast<std::size_t>(v)].push_back({std::move(d.values), entry.label, entry.group, d.frame_index});
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(v)] = e.what();
            per_video[static_cast<std::size_t>(v)].clear();
        }
    }

    DatasetBuild build;
    for (std::size_t v = 0; v < videos.size(); ++v) {
        if (!errors[v].empty()) {
            build.failures.push_back({videos[v].group, errors[v]});
            continue;
        }
        for (auto& s : per_video[v]) build.samples.push_back(std::move(s));
    }
    return build;
}

IfuReport ifu_report(const std::vector<VideoEntry>& videos, const PipelineConfig& config) {
    struct Acc {
        std::array<double, kTextureFeatureCount> sum{};
        std::size_t cells = 0;
        std::size_t windows = 0;
    };
    std::vector<Acc> per_video(videos.size());
    std::vector<std::string> errors(videos.size());

#pragma omp parallel for schedule(dynamic)
    for (long v = 0; v < static_cast<long>(videos.size()); ++v) {
        auto& acc = per_video[static_cast<std::size_t>(v)];
        try {
            auto source = open_source(videos[static_cast<std::size_t>(v)].source);
            DescriptorPipeline pipeline(config, source->frame_rate(), ExecutionPolicy::Serial);
            while (auto frame = source->next()) {
                if (!pipeline.push_frame(*frame)) continue;
                ++acc.windows;
                for (const auto& cell : pipeline.last_summaries()) {
                    for (int f = 0; f < kTextureFeatureCount; ++f)
                        acc.sum[static_cast<std::size_t>(f)] +=
                            cell[static_cast<std::size_t>(summary_slot(static_cast<TextureFeature>(f), SummaryStat::Ifu))];
                    ++acc.cells;
                }
            }
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(v)] = e.what();
        }
    }
    for (std::size_t v = 0; v < videos.size(); ++v)
        if (!errors[v].empty()) throw Error("ifu report: " + videos[v].group + ": " + errors[v]);

    std::array<Acc, 2> by_class{};
    for (std::size_t v = 0; v < videos.size(); ++v) {
        auto& cls = by_class[static_cast<std::size_t>(videos[v].label != 0)];
        for (std::size_t f = 0; f < cls.sum.size(); ++f) cls.sum[f] += per_video[v].sum[f];
        cls.cells += per_video[v].cells;
        cls.windows += per_video[v].windows;
    }
    if (by_class[0].cells == 0 || by_class[1].cells == 0)
        throw std::invalid_argument("ifu report needs emitted windows from both classes");

    IfuReport report;
    report.normal_windows = by_class[0].windows;
    report.abnormal_windows = by_class[1].windows;
    for (std::size_t f = 0; f < report.difference.size(); ++f) {
        report.normal_mean[f] = by_class[0].sum[f] / static_cast<double>(by_class[0].cells);
        report.abnormal_mean[f] = by_class[1].sum[f] / static_cast<double>(by_class[1].cells);
        report.difference[f] = report.abnormal_mean[f] - report.normal_mean[f];
    }
    return report;
}

const char* to_string(SweepAxis axis) noexcept {
    switch (axis) {
        case SweepAxis::PairRelationship: return "pair";
        case SweepAxis::GridSize: return "grid";
        case SweepAxis::WindowLength: return "window";
    }
    return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& text) {
    if (text == "pair") return SweepAxis::PairRelationship;
    if (text == "grid") return SweepAxis::GridSize;
    if (text == "window") return SweepAxis::WindowLength;
    throw ConfigError("unknown sweep axis '" + text + "' (expected pair, grid or window)");
}

OrientationSet classify_orientations(const PairSpec& pairs) {
    for (auto set : {OrientationSet::Eight, OrientationSet::Four, OrientationSet::Zero})
        if (PairSpec::of(set, pairs.distance).orientations == pairs.orientations) return set;
    return OrientationSet::Zero;
}

namespace {

ResultRow row_for(const std::string& experiment, const PipelineConfig& config) {
    ResultRow row;
    row.experiment = experiment;
    row.orientations = classify_orientations(config.pairs);
    row.distance = config.pairs.distance;
    row.grid_rows = config.grid.rows;
    row.grid_cols = config.grid.cols;
    row.window = config.window;
    return row;
}

void run_row(ResultRow& row, const std::vector<LabeledSample>& samples, const EvalParams& params) {
    bool has0 = false, has1 = false;
    for (const auto& s : samples) (s.label ? has1 : has0) = true;
    if (!has0 || !has1) {
        row.valid = false;
        row.note = "no descriptors for one class";
        return;
    }
    if (distinct_groups(samples).size() < static_cast<std::size_t>(params.folds)) {
        row.valid = false;
        row.note = "fewer videos with descriptors than folds";
        return;
    }
    row.result = evaluate(samples, params);
}

}  // namespace

std::vector<ResultRow> sweep(const std::vector<VideoEntry>& videos, const PipelineConfig& base,
                             const EvalParams& params, SweepAxis axis, const SweepGrid& grid) {
    std::vector<ResultRow> rows;
    auto run_config = [&](const PipelineConfig& config) {
        ResultRow row = row_for(to_string(axis), config);
        DatasetBuild build = build_dataset(videos, config);
        if (!build.failures.empty()) {
            row.valid = false;
            row.note = build.failures.front().group + ": " + build.failures.front().message;
        } else {
            run_row(row, build.samples, params);
        }
        rows.push_back(std::move(row));
    };

    switch (axis) {
        case SweepAxis::PairRelationship:
            for (auto set : grid.orientation_sets) {
                for (int d : grid.distances) {
                    PipelineConfig config = base;
                    config.pairs = PairSpec::of(set, d);
                    run_config(config);
                }
            }
            break;
        case SweepAxis::GridSize:
            for (int g : grid.grid_sizes) {
                PipelineConfig config = base;
                config.grid = {g, g};
                run_config(config);
            }
            break;
        case SweepAxis::WindowLength: {
            // Per-frame samples do not depend on n; extract them once.
            std::vector<SampleTrack> tracks(videos.size());
            std::vector<std::string> errors(videos.size());
#pragma omp parallel for schedule(dynamic)
            for (long v = 0; v < static_cast<long>(videos.size()); ++v) {
                try {
                    auto source = open_source(videos[static_cast<std::size_t>(v)].source);
                    tracks[static_cast<std::size_t>(v)] = extract_samples(*source, base, ExecutionPolicy::Serial);
                } catch (const std::exception& e) {
                    errors[static_cast<std::size_t>(v)] = e.what();
                }
            }
            std::string failure;
            for (std::size_t v = 0; v < videos.size() && failure.empty(); ++v)
                if (!errors[v].empty()) failure = videos[v].group + ": " + errors[v];

            for (int n : grid.windows) {
                PipelineConfig config = base;
                config.window = n;
                ResultRow row = row_for(to_string(axis), config);
                if (!failure.empty()) {
                    row.valid = false;
                    row.note = failure;
                } else if (n < config.min_window()) {
                    row.valid = false;
                    row.note = "window shorter than the minimum";
                } else {
                    std::vector<LabeledSample> samples;
                    for (std::size_t v = 0; v < videos.size(); ++v)
                        for (auto& d : descriptors_from_samples(tracks[v], config, ExecutionPolicy::Serial))
                            samples.push_back({std::move(d.values), videos[v].label, videos[v].group, d.frame_index});
                    run_row(row, samples, params);
                }
                rows.push_back(std::move(row));
            }
            break;
        }
    }
    return rows;
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows,
                       const std::vector<std::pair<std::string, std::string>>& metadata) {
    for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
    std::size_t max_repeats = 0;
    for (const auto& row : rows) max_repeats = std::max(max_repeats, row.result.repeats.size());
    out << "experiment,orientations,distance,grid_rows,grid_cols,window,status,mean_auc,std_auc,"
           "mean_acc_threshold,mean_acc_youden,redraws";
    for (std::size_t r = 0; r < max_repeats; ++r) out << ",auc_r" << (r + 1);
    out << '\n';
    for (const auto& row : rows) {
        out << row.experiment << ',' << to_string(row.orientations) << ',' << row.distance << ','
            << row.grid_rows << ',' << row.grid_cols << ','
            << (row.window > 0 ? std::to_string(row.window) : std::string("fps")) << ',';
        if (!row.valid) {
            std::string note = row.note;
            std::replace(note.begin(), note.end(), ',', ';');
            std::replace(note.begin(), note.end(), '\n', ' ');
            out << "skipped: " << note << ",,,,,";
            for (std::size_t r = 0; r < max_repeats; ++r) out << ',';
            out << '\n';
            continue;
        }
        const auto& res = row.result;
        out << "ok," << fmt(res.mean_auc) << ',' << fmt(res.std_auc) << ',' << fmt(res.mean_accuracy_at_threshold)
            << ',' << fmt(res.mean_accuracy_at_youden) << ',' << res.total_redraws;
        for (std::size_t r = 0; r < max_repeats; ++r) {
            out << ',';
            if (r < res.repeats.size()) out << fmt(res.repeats[r].roc.auc);
        }
        out << '\n';
    }
}

void write_roc_csv(std::ostream& out, std::span<const ResultRow> rows) {
    out << "experiment,repeat,threshold,fpr,tpr\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (!row.valid) continue;
        for (std::size_t r = 0; r < row.result.repeats.size(); ++r) {
            const auto& roc = row.result.repeats[r].roc;
            for (std::size_t p = 0; p < roc.thresholds.size(); ++p)
                out << row.experiment << '#' << i << ',' << (r + 1) << ',' << fmt(roc.thresholds[p]) << ','
                    << fmt(roc.fpr[p]) << ',' << fmt(roc.tpr[p]) << '\n';
        }
    }
}

}  // namespace crowdtex
