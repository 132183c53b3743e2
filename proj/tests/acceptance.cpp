// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "crowdtex/cli.hpp"
#include "crowdtex/eval.hpp"
#include "crowdtex/glcm.hpp"
#include "crowdtex/haralick.hpp"
#include "crowdtex/roc.hpp"
#include "crowdtex/temporal.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "toy_chain.hpp"

using namespace crowdtex;

namespace {

constexpr double kHaralickTol = 1e-12;
constexpr double kHaralickSeconds = 5.0;
constexpr double kGlcmSeconds = 10.0;
constexpr double kIfuTol = 1e-12;
constexpr double kIfuAffineTol = 1e-9;
constexpr double kMomentTol = 1e-10;
constexpr double kToyTol = 1e-12;
constexpr double kMinAuc = 0.95;
constexpr double kNullLow = 0.35;
constexpr double kNullHigh = 0.65;
constexpr double kMinCentroidAuc = 0.9;
constexpr double kClassificationSeconds = 300.0;
constexpr double kOrientationSpread = 0.05;
constexpr double kSoftFps = 30.0;
constexpr int kVideosPerClass = 20;
constexpr std::uint64_t kDatasetSeed = 2024;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void run_guarded(int id, const char* name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

void haralick_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    bool in_range = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int ng = std::array{2, 8, 32}[trial % 3];
        std::vector<double> p(static_cast<std::size_t>(ng * ng));
        const double keep = trial % 4 == 0 ? 0.1 : 1.0;
        double sum = 0;
        for (auto& v : p) {
            v = u(gen) < keep ? u(gen) : 0.0;
            sum += v;
        }
        if (sum == 0) {
            p[static_cast<std::size_t>(gen() % p.size())] = 1;
            sum = 1;
        }
        for (auto& v : p) v /= sum;
        const auto s = texture_features(from_probabilities(ng, p));
        const auto o = oracle::haralick(ng, p);
        const double diffs[] = {s.angular_second_moment - o.asm_, s.contrast - o.contrast,
                                s.homogeneity - o.homogeneity, s.correlation - o.correlation,
                                s.dissimilarity - o.dissimilarity};
        for (double d : diffs) worst = std::max(worst, std::abs(d));
        for (double v : s.values()) in_range &= (v >= 0.0 && v <= 1.0);
    }
    const double secs = since(t0);
    report(1, "Haralick oracle equivalence", worst <= kHaralickTol && in_range && secs < kHaralickSeconds,
           fmt("1000 GLCMs, max|d|=%.3g (tol %.0e), in [0,1]: %s, %.2fs (limit %.0fs)", worst, kHaralickTol,
               in_range ? "yes" : "no", secs, kHaralickSeconds));
}

void glcm_counts() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(2);
    long mismatches = 0, compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int w = 2 + static_cast<int>(gen() % 31), h = 2 + static_cast<int>(gen() % 31);
        const int ng = 2 + static_cast<int>(gen() % 31);
        const auto f = oracle::random_frame(gen, w, h, ng);
        for (int set = 0; set < 3; ++set)
            for (int d : {1, 2, 4, 8, 16}) {
                const auto got = accumulate(f, PairSpec::of(static_cast<OrientationSet>(set), d));
                const auto want = oracle::glcm(f, oracle::angle_indices(set), d);
                for (int i = 0; i < ng * ng; ++i) mismatches += got.data()[i] != want[i];
                ++compared;
            }
    }
    const double secs = since(t0);
    report(2, "GLCM count correctness", mismatches == 0 && compared == 3000 && secs < kGlcmSeconds,
           fmt("200 frames x 15 configs, %ld mismatching entries, %.2fs (limit %.0fs)", mismatches, secs,
               kGlcmSeconds));
}

void ifu_endpoints() {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double uniform_err = 0, jump_err = 0, affine_err = 0, reverse_err = 0;
    bool bounded = true;
    for (int trial = 0; trial < 10000; ++trial) {
        const int t = 3 + static_cast<int>(gen() % 62);
        const double a = u(gen) * 2 - 1, b = u(gen);
        std::vector<double> step(t), jump(t, b), x(t);
        for (int i = 0; i < t; ++i) step[i] = b + a * i;
        const int at = 1 + static_cast<int>(gen() % (t - 1));
        for (int i = at; i < t; ++i) jump[i] = b + (a == 0 ? 1 : a);
        uniform_err = std::max(uniform_err, std::abs(ifu(step) - 0.0));
        jump_err = std::max(jump_err, std::abs(ifu(jump) - 1.0));

        for (auto& v : x) v = u(gen) < 0.25 ? 0.5 : u(gen);
        const double v = ifu(x);
        bounded &= (v >= 0.0 && v <= 1.0);
        const double scale = (u(gen) < 0.5 ? -1 : 1) * (0.01 + 10 * u(gen)), shift = 20 * u(gen) - 10;
        std::vector<double> y(x), r(x.rbegin(), x.rend());
        for (auto& e : y) e = scale * e + shift;
        affine_err = std::max(affine_err, std::abs(ifu(y) - v));
        reverse_err = std::max(reverse_err, std::abs(ifu(r) - v));
    }
    const bool ok = uniform_err <= kIfuTol && jump_err <= kIfuTol && bounded && affine_err <= kIfuAffineTol &&
                    reverse_err <= kIfuTol;
    report(3, "IFU endpoints and invariances", ok,
           fmt("uniform->0 err %.2g, jump->1 err %.2g (tol %.0e); 1e4 fuzzed in [0,1]: %s; affine err %.2g (tol %.0e); "
               "reversal err %.2g",
               uniform_err, jump_err, kIfuTol, bounded ? "yes" : "no", affine_err, kIfuAffineTol, reverse_err));
}

void moment_oracle() {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int t = 3 + static_cast<int>(gen() % 126);
        std::vector<double> x(t);
        const int mode = trial % 3;
        for (auto& v : x) v = mode == 0 ? u(gen) : mode == 1 ? u(gen) * u(gen) * u(gen) : (u(gen) < 0.1 ? 1.0 : 0.0);
        const auto o = oracle::moments(x);
        worst = std::max({worst, std::abs(mean(x) - o.mean), std::abs(stddev(x) - o.std),
                          std::abs(skewness(x) - o.skew)});
    }
    report(4, "Mean/std/skewness vs two-pass oracle", worst <= kMomentTol,
           fmt("1e4 sequences, max|d|=%.3g (tol %.0e)", worst, kMomentTol));
}

void auc_oracle() {
    std::mt19937_64 gen(5);
    int mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 199);
        std::vector<double> s(n);
        std::vector<int> y(n);
        const int levels = 1 + static_cast<int>(gen() % 50);
        for (int i = 0; i < n; ++i) {
            s[i] = static_cast<double>(gen() % levels) / levels;
            y[i] = static_cast<int>(gen() % 2);
        }
        y[0] = 0;
        y[1] = 1;
        mismatches += roc_auc(s, y).auc != oracle::auc(s, y);
    }
    report(5, "AUC vs brute-force Mann-Whitney", mismatches == 0,
           fmt("500 instances up to 200 scores with ties, %d inexact", mismatches));
}

double toy_error(const PipelineConfig& cfg, const std::vector<QuantizedFrame>& frames, const toy::FeatureRows& rows) {
    DescriptorPipeline p(cfg, 25.0);
    std::optional<Descriptor> last;
    for (const auto& f : frames) last = p.push_frame(f);
    if (!last) return INFINITY;
    const auto& s = p.last_summaries()[0];
    double worst = 0;
    for (int f = 0; f < kTextureFeatureCount; ++f) {
        const auto m = oracle::moments(rows[f]);
        const auto feat = static_cast<TextureFeature>(f);
        worst = std::max({worst, std::abs(s[summary_slot(feat, SummaryStat::Mean)] - m.mean),
                          std::abs(s[summary_slot(feat, SummaryStat::Std)] - m.std),
                          std::abs(s[summary_slot(feat, SummaryStat::Skewness)] - m.skew),
                          std::abs(s[summary_slot(feat, SummaryStat::Ifu)] - oracle::ifu(rows[f]))});
    }
    return worst;
}

void toy_chain() {
    PipelineConfig plain;
    plain.ng = 2;
    plain.grid = {1, 1};
    plain.window = 3;
    plain.background_diff = false;
    const double e1 = toy_error(plain, {toy::frame_a(), toy::frame_z(), toy::frame_c()}, toy::plain_sequences());
    PipelineConfig diff = plain;
    diff.window = 4;
    diff.background_diff = true;
    const double e2 =
        toy_error(diff, {toy::frame_z(), toy::frame_a(), toy::frame_z(), toy::frame_c()}, toy::diff_sequences());
    report(6, "End-to-end toy chain", e1 <= kToyTol && e2 <= kToyTol,
           fmt("3-frame plain chain err %.2g, 4-frame differenced chain err %.2g (tol %.0e)", e1, e2, kToyTol));
}

// Mean cell IFU of each emitted window, as a one-dimensional score.
std::vector<LabeledSample> mean_ifu_samples(const std::vector<VideoEntry>& videos, const PipelineConfig& cfg) {
    std::vector<LabeledSample> out;
    for (const auto& v : videos) {
        auto src = open_source(v.source);
        DescriptorPipeline p(cfg, src->frame_rate());
        while (auto f = src->next()) {
            if (!p.push_frame(*f)) continue;
            double sum = 0;
            int n = 0;
            for (const auto& c : p.last_summaries())
                for (int k = 0; k < kTextureFeatureCount; ++k, ++n)
                    sum += c[summary_slot(static_cast<TextureFeature>(k), SummaryStat::Ifu)];
            out.push_back({{sum / n}, v.label, v.group, p.frames_seen() - 1});
        }
    }
    return out;
}

// Grouped 5-fold nearest-centroid on the mean-IFU score.
double centroid_auc(const std::vector<LabeledSample>& samples) {
    const auto plan = grouped_kfold(samples, 5, 99);
    std::vector<double> scores(samples.size());
    std::vector<int> labels(samples.size());
    for (int f = 0; f < 5; ++f) {
        double c[2] = {0, 0};
        int n[2] = {0, 0};
        for (const auto& s : samples)
            if (plan.fold_of(s.group) != f) {
                c[s.label] += s.features[0];
                ++n[s.label];
            }
        c[0] /= n[0];
        c[1] /= n[1];
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (plan.fold_of(samples[i].group) == f)
                scores[i] = std::abs(samples[i].features[0] - c[0]) - std::abs(samples[i].features[0] - c[1]);
    }
    for (std::size_t i = 0; i < samples.size(); ++i) labels[i] = samples[i].label;
    return auc_mann_whitney(scores, labels);
}

struct SyntheticSet {
    std::vector<VideoEntry> videos;
    std::vector<LabeledSample> samples;
};

SyntheticSet synthetic_set() {
    SyntheticSet set;
    set.videos = cli::synthetic_dataset(kVideosPerClass, kDatasetSeed);
    auto build = build_dataset(set.videos, PipelineConfig{});
    if (!build.failures.empty()) throw std::runtime_error("synthetic extraction failed: " + build.failures[0].message);
    set.samples = std::move(build.samples);
    return set;
}

void classification(const SyntheticSet& set) {
    const auto t0 = Clock::now();
    const RunConfig defaults;
    const double centroid = centroid_auc(mean_ifu_samples(set.videos, defaults.pipeline));
    const auto real = evaluate(set.samples, defaults.eval_params());
    const auto null = evaluate(shuffle_group_labels(set.samples, kDatasetSeed + 1), defaults.eval_params());
    const double secs = since(t0);
    const bool ok = centroid >= kMinCentroidAuc && real.mean_auc >= kMinAuc && null.mean_auc >= kNullLow &&
                    null.mean_auc <= kNullHigh && secs < kClassificationSeconds;
    report(7, "Synthetic classification", ok,
           fmt("%d+%d videos, %zu windows; nearest-centroid AUC %.4f (>= %.2f); forest AUC %.4f +/- %.4f (>= %.2f); "
               "shuffled-label AUC %.4f (in [%.2f, %.2f]); %.1fs (limit %.0fs)",
               kVideosPerClass, kVideosPerClass, set.samples.size(), centroid, kMinCentroidAuc, real.mean_auc,
               real.std_auc, kMinAuc, null.mean_auc, kNullLow, kNullHigh, secs, kClassificationSeconds));
}

void ifu_polarity(const SyntheticSet& set) {
    PipelineConfig cfg;
    const auto lit = ifu_report(set.videos, cfg);
    cfg.flip_ifu = true;
    const auto flip = ifu_report(set.videos, cfg);
    bool positive = true, flipped = true;
    std::string detail = "abnormal-normal mean IFU:";
    for (int k = 0; k < kTextureFeatureCount; ++k) {
        positive &= lit.difference[k] > 0;
        flipped &= flip.difference[k] < 0;
        detail += fmt(" %s %+.4f/%+.4f", to_string(static_cast<TextureFeature>(k)), lit.difference[k],
                      flip.difference[k]);
    }
    report(8, "IFU polarity report", positive && flipped, detail + " (literal/flipped)");
}

void orientation(const SyntheticSet& set) {
    const RunConfig defaults;
    SweepGrid grid;
    grid.distances = {1};
    const auto rows = sweep(set.videos, defaults.pipeline, defaults.eval_params(), SweepAxis::PairRelationship, grid);
    double lo = 1, hi = 0;
    bool valid = rows.size() == 3;
    std::string detail;
    for (const auto& r : rows) {
        valid &= r.valid;
        lo = std::min(lo, r.result.mean_auc);
        hi = std::max(hi, r.result.mean_auc);
        detail += fmt("%s %.4f, ", to_string(r.orientations), r.result.mean_auc);
    }
    report(9, "Orientation insensitivity", valid && hi - lo <= kOrientationSpread,
           detail + fmt("spread %.4f (<= %.2f)", hi - lo, kOrientationSpread));
}

void throughput() {
    RunConfig cfg;
    cfg.pipeline.window = 24;
    const auto serial = cli::run_bench(cfg, 640, 480, 240, 24.0, ExecutionPolicy::Serial);
    const auto parallel = cli::run_bench(cfg, 640, 480, 240, 24.0, ExecutionPolicy::Parallel);
    const bool reported = serial.frames == 240 && serial.wall_seconds > 0 && serial.fps > 0;
    report(10, "Throughput report", reported,
           fmt("640x480 n=24, %lld frames: serial %.1f fps (mean %.5fs, median %.5fs/frame), parallel %.1f fps; "
               "soft target %.0f fps single-threaded %s",
               static_cast<long long>(serial.frames), serial.fps, serial.mean_seconds_per_frame,
               serial.median_seconds_per_frame, parallel.fps, kSoftFps, serial.fps >= kSoftFps ? "met" : "NOT met"));
}

void determinism() {
    testing::TempDir dir("acceptance");
    write_manifest(dir / "manifest.csv", cli::synthetic_dataset(kVideosPerClass, kDatasetSeed));
    std::string log_text;
    int codes[2];
    for (int run = 0; run < 2; ++run) {
        std::ostringstream log;
        cli::EvaluateOptions o;
        o.config.overrides = {{"seed", "7"}};
        o.manifest = dir / "manifest.csv";
        o.results_out = dir / ("results" + std::to_string(run) + ".csv");
        o.roc_out = dir / ("roc" + std::to_string(run) + ".csv");
        codes[run] = cli::cmd_evaluate(o, log);
        log_text += log.str();
    }
    const auto a = testing::read_file(dir / "results0.csv"), b = testing::read_file(dir / "results1.csv");
    const auto ra = testing::read_file(dir / "roc0.csv"), rb = testing::read_file(dir / "roc1.csv");
    const bool ok = codes[0] == 0 && codes[1] == 0 && !a.empty() && a == b && ra == rb;
    report(11, "Determinism", ok,
           fmt("two full evaluate runs, results CSV %zu bytes %s, ROC CSV %s", a.size(),
               a == b ? "byte-identical" : "DIFFER", ra == rb ? "byte-identical" : "DIFFER") +
               (codes[0] || codes[1] ? " | " + log_text : ""));
}

}  // namespace

int main() {
    run_guarded(1, "Haralick oracle equivalence", haralick_oracle);
    run_guarded(2, "GLCM count correctness", glcm_counts);
    run_guarded(3, "IFU endpoints and invariances", ifu_endpoints);
    run_guarded(4, "Mean/std/skewness vs two-pass oracle", moment_oracle);
    run_guarded(5, "AUC vs brute-force Mann-Whitney", auc_oracle);
    run_guarded(6, "End-to-end toy chain", toy_chain);
    SyntheticSet set;
    run_guarded(7, "Synthetic classification", [&] {
        set = synthetic_set();
        classification(set);
    });
    run_guarded(8, "IFU polarity report", [&] { ifu_polarity(set); });
    run_guarded(9, "Orientation insensitivity", [&] { orientation(set); });
    run_guarded(10, "Throughput report", throughput);
    run_guarded(11, "Determinism", determinism);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
