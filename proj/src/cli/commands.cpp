#include "crowdtex/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "crowdtex/descriptor_io.hpp"
#include "crowdtex/error.hpp"
#include "crowdtex/eval.hpp"
#include "crowdtex/forest.hpp"
#include "crowdtex/haralick.hpp"
#include "crowdtex/manifest.hpp"
#include "crowdtex/rng.hpp"
#include "crowdtex/synth.hpp"

namespace crowdtex::cli {

namespace fs = std::filesystem;

namespace {

template <typename F>
int guarded(std::ostream& log, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        log << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const FormatError& e) {
        log << "format error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument& e) {
        log << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const fs::filesystem_error& e) {
        log << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kUnexpected;
    }
}

std::vector<VideoEntry> load_videos(const fs::path& manifest) {
    auto videos = read_manifest(manifest);
    if (videos.empty()) throw ConfigError("manifest " + manifest.string() + " lists no videos");
    return videos;
}

Settings metadata_for(const RunConfig& config, const std::string& command) {
    Settings meta{{"command", command}};
    for (auto& kv : describe(config)) meta.push_back(std::move(kv));
    return meta;
}

void report_failures(const std::vector<ExtractionFailure>& failures, std::ostream& log) {
    for (const auto& f : failures) log << "failed: " << f.group << ": " << f.message << '\n';
}

DatasetBuild build_or_throw(const std::vector<VideoEntry>& videos, const RunConfig& config, std::ostream& log) {
    auto build = build_dataset(videos, config.pipeline);
    report_failures(build.failures, log);
    if (build.failures.size() == videos.size()) throw IoError("no video could be read");
    return build;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

// Written after the payload has been produced so failed runs leave nothing behind.
void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<LabeledSample> samples_from(const std::optional<fs::path>& descriptors,
                                        const std::optional<fs::path>& manifest, const RunConfig& config,
                                        std::ostream& log, bool& partial) {
    if (descriptors && manifest) throw ConfigError("give either --descriptors or --manifest, not both");
    if (descriptors) {
        auto table = read_descriptors(*descriptors);
        if (table.rows.empty()) throw ConfigError("descriptor file " + descriptors->string() + " has no rows");
        return std::move(table.rows);
    }
    if (!manifest) throw ConfigError("one of --descriptors or --manifest is required");
    auto build = build_or_throw(load_videos(*manifest), config, log);
    partial = !build.failures.empty();
    return std::move(build.samples);
}

ResultRow row_for(const RunConfig& config, const std::string& experiment, EvalResult result) {
    ResultRow row;
    row.experiment = experiment;
    row.orientations = classify_orientations(config.pipeline.pairs);
    row.distance = config.pipeline.pairs.distance;
    row.grid_rows = config.pipeline.grid.rows;
    row.grid_cols = config.pipeline.grid.cols;
    row.window = config.pipeline.window;
    row.result = std::move(result);
    return row;
}

}  // namespace

RunConfig ConfigSources::resolve() const {
    RunConfig config;
    if (file) {
        for (const auto& [k, v] : read_settings_file(*file)) apply_setting(config, k, v);
    }
    for (const auto& [k, v] : overrides) apply_setting(config, k, v);
    config.pipeline.validate();
    return config;
}

int cmd_extract(const ExtractOptions& opts, std::ostream& log) {
    return guarded(log, [&] {
        const auto config = opts.config.resolve();
        if (opts.format != "csv" && opts.format != "binary")
            throw ConfigError("unknown descriptor format '" + opts.format + "'");
        const auto videos = load_videos(opts.manifest);
        const auto build = build_or_throw(videos, config, log);

        DescriptorTable table{metadata_for(config, "extract"), build.samples};
        table.metadata.emplace_back("manifest", opts.manifest.string());
        std::ostringstream buf;
        if (opts.format == "csv")
            write_descriptor_csv(buf, table);
        else
            write_descriptor_binary(buf, table);
        write_text(opts.out, buf.str());
        log << "wrote " << table.rows.size() << " descriptors from " << videos.size() - build.failures.size()
            << " of " << videos.size() << " videos to " << opts.out.string() << '\n';
        return build.failures.empty() ? kOk : kPartialFailure;
    });
}

int cmd_train(const TrainOptions& opts, std::ostream& log) {
    return guarded(log, [&] {
        const auto config = opts.config.resolve();
        bool partial = false;
        const auto samples = samples_from(opts.descriptors, opts.manifest, config, log, partial);
        const auto model = train(samples, config.eval_params().forest);
        save_model_file(opts.model_out, model);

        std::ostringstream side;
        for (const auto& [k, v] : metadata_for(config, "train")) side << k << " = " << v << '\n';
        write_text(fs::path(opts.model_out.string() + ".config"), side.str());
        log << "trained " << model.tree_count() << " trees on " << samples.size() << " samples ("
            << model.feature_count() << " features) -> " << opts.model_out.string() << '\n';
        return partial ? kPartialFailure : kOk;
    });
}

int cmd_score(const ScoreOptions& opts, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        const auto config = opts.config.resolve();
        if (!fs::exists(opts.model)) throw IoError("model file " + opts.model.string() + " not found");
        const auto model = load_model_file(opts.model);
        const auto length = config.pipeline.descriptor_length();
        if (model.feature_count() != length)
            throw ConfigError("feature-length mismatch: model expects " + std::to_string(model.feature_count()) +
                              " values, config produces " + std::to_string(length));
        const auto videos = load_videos(opts.manifest);

        std::ofstream file;
        if (opts.out) file = open_out(*opts.out);
        std::ostream& sink = opts.out ? static_cast<std::ostream&>(file) : out;

        nlohmann::ordered_json header;
        for (const auto& [k, v] : metadata_for(config, "score")) header["config"][k] = v;
        header["config"]["model"] = opts.model.string();
        sink << header.dump() << '\n';

        std::size_t failed = 0;
        for (const auto& video : videos) {
            try {
                auto source = open_source(video.source);
                DescriptorPipeline pipeline(config.pipeline, source->frame_rate());
                while (auto frame = source->next()) {
                    const auto d = pipeline.push_frame(*frame);
                    if (!d) continue;
                    const double p = model.predict_proba(d->values);
                    nlohmann::ordered_json rec;
                    rec["group"] = video.group;
                    rec["frame"] = d->frame_index;
                    rec["probability"] = p;
                    rec["label"] = p >= config.threshold ? 1 : 0;
                    sink << rec.dump() << '\n';
                }
                sink.flush();
            } catch (const Error& e) {
                ++failed;
                log << "failed: " << video.group << ": " << e.what() << '\n';
            }
        }
        if (failed == videos.size()) return kIoError;
        return failed ? kPartialFailure : kOk;
    });
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& log) {
    return guarded(log, [&] {
        const auto config = opts.config.resolve();
        bool partial = false;
        auto samples = samples_from(opts.descriptors, opts.manifest, config, log, partial);
        std::string experiment = "evaluate";
        if (opts.shuffle_labels_seed) {
            samples = shuffle_group_labels(samples, *opts.shuffle_labels_seed);
            experiment = "evaluate-shuffled";
        }
        std::vector<ResultRow> rows{row_for(config, experiment, evaluate(samples, config.eval_params()))};

        auto meta = metadata_for(config, "evaluate");
        if (opts.shuffle_labels_seed) meta.emplace_back("shuffle-labels-seed", std::to_string(*opts.shuffle_labels_seed));
        std::ostringstream buf;
        write_results_csv(buf, rows, meta);
        write_text(opts.results_out, buf.str());
        if (opts.roc_out) {
            std::ostringstream roc;
            write_roc_csv(roc, rows);
            write_text(*opts.roc_out, roc.str());
        }
        const auto& r = rows.front().result;
        log << "mean AUC " << r.mean_auc << " +/- " << r.std_auc << " over " << r.repeats.size() << " repeats\n";
        return partial ? kPartialFailure : kOk;
    });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& log) {
    return guarded(log, [&] {
        const auto config = opts.config.resolve();
        std::vector<SweepAxis> axes;
        if (opts.axis == "all")
            axes = {SweepAxis::PairRelationship, SweepAxis::GridSize, SweepAxis::WindowLength};
        else
            axes = {parse_sweep_axis(opts.axis)};
        const auto videos = load_videos(opts.manifest);

        std::vector<ResultRow> rows;
        for (const auto axis : axes) {
            auto part = sweep(videos, config.pipeline, config.eval_params(), axis);
            for (auto& r : part) rows.push_back(std::move(r));
        }
        auto meta = metadata_for(config, "sweep");
        meta.emplace_back("axis", opts.axis);
        std::ostringstream buf;
        write_results_csv(buf, rows, meta);
        write_text(opts.results_out, buf.str());
        if (opts.roc_out) {
            std::ostringstream roc;
            write_roc_csv(roc, rows);
            write_text(*opts.roc_out, roc.str());
        }
        const auto skipped = std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.valid; });
        log << "swept " << rows.size() << " configurations (" << skipped << " skipped)\n";
        return kOk;
    });
}

int cmd_ifu_report(const IfuReportOptions& opts, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        const auto config = opts.config.resolve();
        const auto report = ifu_report(load_videos(opts.manifest), config.pipeline);

        std::ostringstream buf;
        for (const auto& [k, v] : metadata_for(config, "ifu-report")) buf << "# " << k << '=' << v << '\n';
        buf << "feature,normal_mean,abnormal_mean,difference\n";
        char line[160];
        for (int f = 0; f < kTextureFeatureCount; ++f) {
            std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g\n", to_string(static_cast<TextureFeature>(f)),
                          report.normal_mean[f], report.abnormal_mean[f], report.difference[f]);
            buf << line;
        }
        if (opts.out)
            write_text(*opts.out, buf.str());
        else
            out << buf.str();
        log << "windows: " << report.normal_windows << " normal, " << report.abnormal_windows << " abnormal\n";
        return kOk;
    });
}

BenchReport run_bench(const RunConfig& config, int width, int height, int frames, double fps,
                      ExecutionPolicy policy) {
    synth::SynthSpec spec;
    spec.width = width;
    spec.height = height;
    spec.frames = frames;
    spec.fps = fps;
    spec.validate();
    std::vector<RawFrame> input;
    input.reserve(static_cast<std::size_t>(frames));
    for (int t = 0; t < frames; ++t) input.push_back(synth::render(spec, t));

    DescriptorPipeline pipeline(config.pipeline, fps, policy);
    std::vector<double> per_frame;
    per_frame.reserve(input.size());
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    for (const auto& frame : input) {
        const auto t0 = clock::now();
        const auto d = pipeline.push_frame(quantize(frame, config.pipeline.ng));
        per_frame.push_back(std::chrono::duration<double>(clock::now() - t0).count());
        (void)d;
    }
    const double wall = std::chrono::duration<double>(clock::now() - start).count();

    BenchReport r;
    r.policy = policy == ExecutionPolicy::Serial ? "serial" : "parallel";
    r.width = width;
    r.height = height;
    r.window = pipeline.window();
    r.frames = frames;
    r.wall_seconds = wall;
    r.fps = wall > 0 ? frames / wall : 0.0;
    double sum = 0.0;
    for (double s : per_frame) sum += s;
    r.mean_seconds_per_frame = per_frame.empty() ? 0.0 : sum / static_cast<double>(per_frame.size());
    if (!per_frame.empty()) {
        auto mid = per_frame.begin() + static_cast<std::ptrdiff_t>(per_frame.size() / 2);
        std::nth_element(per_frame.begin(), mid, per_frame.end());
        r.median_seconds_per_frame = *mid;
        if (per_frame.size() % 2 == 0)
            r.median_seconds_per_frame =
                0.5 * (r.median_seconds_per_frame + *std::max_element(per_frame.begin(), mid));
    }
    return r;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        const auto config = opts.config.resolve();
        if (opts.width < 2 || opts.height < 2 || opts.frames < 1 || !(opts.fps > 0))
            throw ConfigError("bench needs a positive resolution, frame count and fps");

        nlohmann::ordered_json doc;
        for (const auto& [k, v] : metadata_for(config, "bench")) doc["config"][k] = v;
        doc["results"] = nlohmann::json::array();
        for (const auto policy : {ExecutionPolicy::Serial, ExecutionPolicy::Parallel}) {
            const auto r = run_bench(config, opts.width, opts.height, opts.frames, opts.fps, policy);
            doc["results"].push_back({{"policy", r.policy},
                                      {"width", r.width},
                                      {"height", r.height},
                                      {"window", r.window},
                                      {"frames_processed", r.frames},
                                      {"wall_seconds", r.wall_seconds},
                                      {"fps", r.fps},
                                      {"mean_seconds_per_frame", r.mean_seconds_per_frame},
                                      {"median_seconds_per_frame", r.median_seconds_per_frame}});
            char line[200];
            std::snprintf(line, sizeof line,
                          "%-8s %dx%d n=%d frames=%lld wall=%.3fs fps=%.2f mean=%.5fs median=%.5fs\n",
                          r.policy.c_str(), r.width, r.height, r.window, static_cast<long long>(r.frames),
                          r.wall_seconds, r.fps, r.mean_seconds_per_frame, r.median_seconds_per_frame);
            out << line;
        }
        if (opts.out) write_text(*opts.out, doc.dump(2) + "\n");
        return kOk;
    });
}

std::vector<VideoEntry> synthetic_dataset(int per_class, std::uint64_t seed, const synth::SynthSpec& base) {
    if (per_class < 1) throw ConfigError("per-class count must be positive");
    std::vector<VideoEntry> videos;
    const synth::Kind kinds[] = {synth::Kind::SmoothDrift, synth::Kind::BurstyFlicker};
    for (const auto kind : kinds) {
        for (int i = 0; i < per_class; ++i) {
            auto spec = base;
            spec.kind = kind;
            spec.seed = rng::hash(seed, static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(i), 0x5e7);
            char group[64];
            std::snprintf(group, sizeof group, "%s-%03d", synth::to_string(kind), i);
            VideoEntry e;
            e.source.kind = SourceKind::Synthetic;
            e.source.location = synth::format_spec(spec);
            e.source.width = spec.width;
            e.source.height = spec.height;
            e.source.fps = spec.fps;
            e.label = synth::class_label(kind);
            e.group = group;
            videos.push_back(std::move(e));
        }
    }
    return videos;
}

int cmd_synth(const SynthOptions& opts, std::ostream& log) {
    return guarded(log, [&] {
        if (opts.per_class > 0) {
            synth::SynthSpec base;
            if (!opts.spec.empty()) base = synth::parse_spec(opts.spec);
            auto videos = synthetic_dataset(opts.per_class, opts.seed, base);
            fs::create_directories(opts.out);
            if (!opts.manifest_only) {
                for (auto& v : videos) {
                    synth::write_pgm_sequence(synth::parse_spec(v.source.location), opts.out / v.group);
                    v.source.kind = SourceKind::PgmSequenceDir;
                    v.source.location = v.group;
                }
            }
            write_manifest(opts.out / "manifest.csv", videos);
            log << "wrote " << videos.size() << " videos and " << (opts.out / "manifest.csv").string() << '\n';
            return kOk;
        }
        if (opts.spec.empty()) throw ConfigError("synth needs --spec or --per-class");
        const auto spec = synth::parse_spec(opts.spec);
        synth::write_pgm_sequence(spec, opts.out);
        log << "wrote " << spec.frames << " frames to " << opts.out.string() << '\n';
        return kOk;
    });
}

}  // namespace crowdtex::cli
