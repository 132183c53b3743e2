#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "crowdtex/cli.hpp"
#include "crowdtex/descriptor_io.hpp"
#include "crowdtex/error.hpp"
#include "crowdtex/forest.hpp"
#include "crowdtex/roc.hpp"
#include "support.hpp"

using namespace crowdtex;
namespace fs = std::filesystem;

namespace {

synth::SynthSpec small_spec() {
    synth::SynthSpec s;
    s.width = 48;
    s.height = 48;
    s.frames = 30;
    return s;
}

cli::ConfigSources quick(Settings extra = {}) {
    cli::ConfigSources c;
    c.overrides = {{"trees", "10"}, {"repeats", "2"}, {"folds", "3"}};
    for (auto& kv : extra) c.overrides.push_back(kv);
    return c;
}

fs::path dataset(const testing::TempDir& dir, int per_class = 3) {
    write_manifest(dir / "manifest.csv", cli::synthetic_dataset(per_class, 1, small_spec()));
    return dir / "manifest.csv";
}

}  // namespace

TEST_CASE("config sources: file then overrides") {
    testing::TempDir dir("cfg");
    testing::write_file(dir / "run.cfg", "# base\nng = 16\nbins = 8\n");
    cli::ConfigSources src;
    src.file = dir / "run.cfg";
    src.overrides = {{"bins", "4"}};
    const auto c = src.resolve();
    CHECK(c.pipeline.ng == 16);
    CHECK(c.pipeline.histogram.bins == 4);
    src.overrides = {{"bins", "5"}};
    CHECK_THROWS_AS(src.resolve(), ConfigError);
}

TEST_CASE("extract writes one row per emitted frame with the resolved config") {
    testing::TempDir dir("extract");
    std::ostringstream log;
    const auto m = dataset(dir, 2);
    CHECK(cli::cmd_extract({quick(), m, dir / "d.csv", "csv"}, log) == cli::kOk);
    const auto t = read_descriptors(dir / "d.csv");
    CHECK(t.rows.size() == 4 * (30 - 12 + 1));
    CHECK(t.feature_count() == 320);
    bool has_trees = false;
    for (const auto& [k, v] : t.metadata) has_trees |= (k == "trees" && v == "10");
    CHECK(has_trees);

    CHECK(cli::cmd_extract({quick(), m, dir / "d.bin", "binary"}, log) == cli::kOk);
    CHECK(read_descriptors(dir / "d.bin").rows == t.rows);
    CHECK(cli::cmd_extract({quick(), m, dir / "d.xml", "xml"}, log) == cli::kConfigError);
}

TEST_CASE("extract: empty manifest, unreadable entry, bad config") {
    testing::TempDir dir("extract-err");
    std::ostringstream log;
    testing::write_file(dir / "empty.csv", "path,label,group,format,width,height,fps\n");
    CHECK(cli::cmd_extract({quick(), dir / "empty.csv", dir / "out.csv", "csv"}, log) == cli::kConfigError);
    CHECK_FALSE(fs::exists(dir / "out.csv"));
    CHECK(cli::cmd_extract({quick(), dir / "nope.csv", dir / "out.csv", "csv"}, log) == cli::kIoError);

    auto videos = cli::synthetic_dataset(1, 2, small_spec());
    VideoEntry missing;
    missing.source = {SourceKind::PgmSequenceDir, (dir / "missing").string(), 0, 0, 12};
    missing.group = "missing";
    videos.push_back(missing);
    write_manifest(dir / "m.csv", videos);
    CHECK(cli::cmd_extract({quick(), dir / "m.csv", dir / "out.csv", "csv"}, log) == cli::kPartialFailure);
    CHECK(read_descriptors(dir / "out.csv").rows.size() == 2 * 19);
    CHECK(log.str().find("missing") != std::string::npos);

    CHECK(cli::cmd_extract({quick({{"ng", "1"}}), dir / "m.csv", dir / "x.csv", "csv"}, log) == cli::kConfigError);
}

TEST_CASE("train, then score as json lines") {
    testing::TempDir dir("score");
    std::ostringstream log;
    const auto m = dataset(dir);
    REQUIRE(cli::cmd_train({quick(), std::nullopt, m, dir / "model.ctrf"}, log) == cli::kOk);
    CHECK(fs::exists(dir / "model.ctrf.config"));
    CHECK(load_model_file(dir / "model.ctrf").tree_count() == 10);

    std::ostringstream out;
    REQUIRE(cli::cmd_score({quick(), dir / "model.ctrf", m, std::nullopt}, out, log) == cli::kOk);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    const auto header = nlohmann::json::parse(line);
    CHECK(header["config"]["ng"] == "32");
    std::vector<double> scores;
    std::vector<int> truth;
    const auto videos = read_manifest(m);
    while (std::getline(lines, line)) {
        const auto rec = nlohmann::json::parse(line);
        const double p = rec["probability"];
        CHECK(rec["label"] == (p >= 0.5 ? 1 : 0));
        CHECK(rec["frame"].get<int>() >= 11);
        scores.push_back(p);
        truth.push_back(rec["group"].get<std::string>().rfind("bursty", 0) == 0 ? 1 : 0);
    }
    CHECK(scores.size() == 6 * 19);
    CHECK(auc_mann_whitney(scores, truth) == 1.0);

    std::ostringstream sink;
    CHECK(cli::cmd_score({quick({{"bins", "8"}}), dir / "model.ctrf", m, std::nullopt}, sink, log) ==
          cli::kConfigError);
    CHECK(log.str().find("feature-length mismatch") != std::string::npos);
    CHECK(cli::cmd_score({quick(), dir / "absent.ctrf", m, std::nullopt}, sink, log) == cli::kIoError);
}

TEST_CASE("evaluate and its error paths") {
    testing::TempDir dir("evaluate");
    std::ostringstream log;
    const auto m = dataset(dir);
    cli::EvaluateOptions o{quick(), std::nullopt, m, dir / "r.csv", dir / "roc.csv", std::nullopt};
    REQUIRE(cli::cmd_evaluate(o, log) == cli::kOk);
    const auto text = testing::read_file(dir / "r.csv");
    CHECK(text.find("# repeats=2") != std::string::npos);
    CHECK(text.find("\nevaluate,zero,1,4,4,fps,ok,1,") != std::string::npos);
    CHECK(testing::read_file(dir / "roc.csv").rfind("experiment,repeat,threshold,fpr,tpr", 0) == 0);

    REQUIRE(cli::cmd_evaluate(o, log) == cli::kOk);
    CHECK(testing::read_file(dir / "r.csv") == text);

    o.config = quick({{"folds", "7"}});
    o.results_out = dir / "k.csv";
    CHECK(cli::cmd_evaluate(o, log) == cli::kConfigError);
    CHECK(log.str().find("grouped k-fold") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "k.csv"));

    testing::TempDir pair_dir("pair");
    o.config = quick({{"folds", "2"}});
    o.manifest = dataset(pair_dir, 1);
    CHECK(cli::cmd_evaluate(o, log) == cli::kConfigError);
    CHECK(log.str().find("two classes in every training split") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "k.csv"));

    cli::EvaluateOptions neither{quick(), std::nullopt, std::nullopt, dir / "n.csv", std::nullopt, std::nullopt};
    CHECK(cli::cmd_evaluate(neither, log) == cli::kConfigError);
}

TEST_CASE("sweep, ifu report, synth and bench commands") {
    testing::TempDir dir("misc");
    std::ostringstream log, out;
    const auto m = dataset(dir);
    CHECK(cli::cmd_sweep({quick({{"repeats", "1"}}), m, "grid", dir / "s.csv", std::nullopt}, log) == cli::kOk);
    const auto sweep = testing::read_file(dir / "s.csv");
    CHECK(sweep.find("# axis=grid") != std::string::npos);
    CHECK(cli::cmd_sweep({quick(), m, "colour", dir / "t.csv", std::nullopt}, log) == cli::kConfigError);

    CHECK(cli::cmd_ifu_report({quick(), m, std::nullopt}, out, log) == cli::kOk);
    CHECK(out.str().find("feature,normal_mean,abnormal_mean,difference\nasm,") != std::string::npos);

    CHECK(cli::cmd_synth({"kind=static;frames=4;width=16;height=16", dir / "seq", 0, 1, false}, log) == cli::kOk);
    CHECK(PgmSequenceSource(dir / "seq", 12).frame_count() == 4);
    CHECK(cli::cmd_synth({"frames=20;width=32;height=32", dir / "ds", 2, 5, false}, log) == cli::kOk);
    const auto videos = read_manifest(dir / "ds" / "manifest.csv");
    REQUIRE(videos.size() == 4);
    CHECK(videos[0].source.kind == SourceKind::PgmSequenceDir);
    CHECK(PgmSequenceSource(videos[3].source.location, 12).frame_count() == 20);
    CHECK(cli::cmd_synth({"", dir / "x", 0, 1, false}, log) == cli::kConfigError);

    std::ostringstream report;
    CHECK(cli::cmd_bench({quick(), 64, 48, 20, 24.0, dir / "b.json"}, report, log) == cli::kOk);
    CHECK(report.str().find("frames=20") != std::string::npos);
    const auto doc = nlohmann::json::parse(testing::read_file(dir / "b.json"));
    CHECK(doc["results"].size() == 2);
    CHECK(doc["results"][0]["frames_processed"] == 20);
    CHECK(doc["results"][1]["fps"].get<double>() > 0.0);
    CHECK(doc["config"]["window"] == "fps");
}

TEST_CASE("bench cost grows with resolution") {
    RunConfig c;
    c.pipeline.window = 24;
    const auto small = cli::run_bench(c, 320, 240, 48, 24, ExecutionPolicy::Serial);
    const auto large = cli::run_bench(c, 640, 480, 48, 24, ExecutionPolicy::Serial);
    CHECK(small.frames == 48);
    CHECK(small.window == 24);
    CHECK(small.fps >= large.fps);
}
