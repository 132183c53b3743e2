#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "crowdtex/cli.hpp"
#include "crowdtex/error.hpp"

namespace ct = crowdtex;
namespace cli = crowdtex::cli;

namespace {

// Config flags shared by every pipeline command. Each resolved config key
// becomes a `--key` flag; `--set key=value` covers the same ground.
struct ConfigFlags {
    std::string file;
    std::vector<std::string> sets;
    std::map<std::string, std::string> named;

    void attach(CLI::App* app) {
        app->add_option("-c,--config", file, "key = value config file")->check(CLI::ExistingFile);
        app->add_option("--set", sets, "override as key=value (repeatable)");
        for (const auto& [key, value] : ct::describe(ct::RunConfig{})) {
            named[key];
            app->add_option("--" + key, named[key], "default: " + value);
        }
    }

    cli::ConfigSources sources() const {
        cli::ConfigSources s;
        if (!file.empty()) s.file = file;
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ct::ConfigError("--set expects key=value, got '" + kv + "'");
            s.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
        for (const auto& [key, value] : named)
            if (!value.empty()) s.overrides.emplace_back(key, value);
        return s;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowdtex: GLCM texture dynamics for crowd abnormality detection"};
    app.require_subcommand(1);

    std::map<std::string, ConfigFlags> flags;
    std::string manifest, out, descriptors, model, roc, format = "csv", axis = "pair", spec;
    std::uint64_t shuffle_seed = 0, synth_seed = 1;
    int width = 640, height = 480, frames = 240, per_class = 0;
    double fps = 24.0;
    bool manifest_only = false;

    auto* extract = app.add_subcommand("extract", "manifest -> descriptor file");
    flags["extract"].attach(extract);
    extract->add_option("-m,--manifest", manifest)->required();
    extract->add_option("-o,--out", out)->required();
    extract->add_option("--format", format, "csv | binary")->check(CLI::IsMember({"csv", "binary"}));

    auto* train = app.add_subcommand("train", "descriptors or manifest -> model file");
    flags["train"].attach(train);
    auto* train_src = train->add_option("-d,--descriptors", descriptors);
    train->add_option("-m,--manifest", manifest)->excludes(train_src);
    train->add_option("-o,--model", model)->required();

    auto* score = app.add_subcommand("score", "model + manifest -> JSON lines of per-frame scores");
    flags["score"].attach(score);
    score->add_option("--model", model)->required();
    score->add_option("-m,--manifest", manifest)->required();
    score->add_option("-o,--out", out, "default: stdout");

    auto* evaluate = app.add_subcommand("evaluate", "repeated grouped k-fold -> results CSV");
    flags["evaluate"].attach(evaluate);
    auto* eval_src = evaluate->add_option("-d,--descriptors", descriptors);
    evaluate->add_option("-m,--manifest", manifest)->excludes(eval_src);
    evaluate->add_option("-o,--out", out)->required();
    evaluate->add_option("--roc", roc, "ROC points CSV");
    auto* shuffle_opt = evaluate->add_option("--shuffle-labels", shuffle_seed, "permute labels across videos");

    auto* sweep = app.add_subcommand("sweep", "parameter sweep -> results CSV");
    flags["sweep"].attach(sweep);
    sweep->add_option("-m,--manifest", manifest)->required();
    sweep->add_option("--axis", axis, "pair | grid | window | all")
        ->check(CLI::IsMember({"pair", "grid", "window", "all"}));
    sweep->add_option("-o,--out", out)->required();
    sweep->add_option("--roc", roc, "ROC points CSV");

    auto* ifu = app.add_subcommand("ifu-report", "mean cell IFU per feature and class");
    flags["ifu-report"].attach(ifu);
    ifu->add_option("-m,--manifest", manifest)->required();
    ifu->add_option("-o,--out", out, "default: stdout");

    auto* bench = app.add_subcommand("bench", "serial vs parallel pipeline throughput");
    flags["bench"].attach(bench);
    bench->add_option("--width", width);
    bench->add_option("--height", height);
    bench->add_option("--frames", frames);
    bench->add_option("--fps", fps);
    bench->add_option("-o,--out", out, "JSON report");

    auto* synth = app.add_subcommand("synth", "synthetic streams as PGM sequences");
    synth->add_option("--spec", spec, "kind=...;width=...;frames=...");
    synth->add_option("-o,--out", out)->required();
    synth->add_option("--per-class", per_class, "write a labelled dataset with a manifest");
    synth->add_option("--seed", synth_seed, "dataset seed");
    synth->add_flag("--manifest-only", manifest_only, "dataset manifest of generator specs, no files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? cli::kOk : cli::kConfigError;
    }

    auto opt_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
        if (s.empty()) return std::nullopt;
        return std::filesystem::path(s);
    };

    try {
        if (*extract) {
            cli::ExtractOptions o{flags["extract"].sources(), manifest, out, format};
            return cli::cmd_extract(o, std::cerr);
        }
        if (*train) {
            cli::TrainOptions o{flags["train"].sources(), opt_path(descriptors), opt_path(manifest), model};
            return cli::cmd_train(o, std::cerr);
        }
        if (*score) {
            cli::ScoreOptions o{flags["score"].sources(), model, manifest, opt_path(out)};
            return cli::cmd_score(o, std::cout, std::cerr);
        }
        if (*evaluate) {
            cli::EvaluateOptions o{flags["evaluate"].sources(), opt_path(descriptors), opt_path(manifest), out,
                                   opt_path(roc), std::nullopt};
            if (*shuffle_opt) o.shuffle_labels_seed = shuffle_seed;
            return cli::cmd_evaluate(o, std::cerr);
        }
        if (*sweep) {
            cli::SweepOptions o{flags["sweep"].sources(), manifest, axis, out, opt_path(roc)};
            return cli::cmd_sweep(o, std::cerr);
        }
        if (*ifu) {
            cli::IfuReportOptions o{flags["ifu-report"].sources(), manifest, opt_path(out)};
            return cli::cmd_ifu_report(o, std::cout, std::cerr);
        }
        if (*bench) {
            cli::BenchOptions o{flags["bench"].sources(), width, height, frames, fps, opt_path(out)};
            return cli::cmd_bench(o, std::cout, std::cerr);
        }
        if (*synth) {
            cli::SynthOptions o{spec, out, per_class, synth_seed, manifest_only};
            return cli::cmd_synth(o, std::cerr);
        }
    } catch (const ct::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kConfigError;
    }
    return cli::kUnexpected;
}
