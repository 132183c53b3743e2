#include "crowdtex/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "crowdtex/error.hpp"

namespace crowdtex {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
    T out{};
    const auto* last = value.data() + value.size();
    const auto res = std::from_chars(value.data(), last, out);
    if (value.empty() || res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("invalid value '" + value + "' for " + key);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "off" || value == "no") return false;
    throw ConfigError("invalid boolean '" + value + "' for " + key);
}

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

EvalParams RunConfig::eval_params() const {
    EvalParams params;
    params.folds = folds;
    params.repeats = repeats;
    params.seed = seed;
    params.threshold = threshold;
    params.forest.tree_count = trees;
    return params;
}

std::vector<double> parse_orientations(const std::string& text) {
    const std::string t = trim(text);
    for (auto set : {OrientationSet::Zero, OrientationSet::Four, OrientationSet::Eight})
        if (t == to_string(set)) return PairSpec::of(set, 1).orientations;
    std::vector<double> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double degrees = parse_value<double>("orientations", trim(item));
        out.push_back(degrees * std::numbers::pi / 180.0);
        try {
            (void)offset_of(out.back(), 1);
        } catch (const std::invalid_argument&) {
            throw ConfigError("orientation " + trim(item) + " is not a multiple of 45 degrees");
        }
    }
    if (out.empty()) throw ConfigError("orientations must not be empty");
    return out;
}

std::string format_orientations(const PairSpec& pairs) {
    for (auto set : {OrientationSet::Zero, OrientationSet::Four, OrientationSet::Eight})
        if (PairSpec::of(set, pairs.distance).orientations == pairs.orientations) return to_string(set);
    std::string out;
    for (double theta : pairs.orientations) {
        if (!out.empty()) out += ',';
        out += std::to_string(static_cast<long>(std::lround(theta * 180.0 / std::numbers::pi)));
    }
    return out;
}

void apply_setting(RunConfig& config, const std::string& raw_key, const std::string& raw_value) {
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(raw_value);
    auto& p = config.pipeline;
    if (key == "ng") p.ng = parse_value<int>(key, value);
    else if (key == "orientations") p.pairs.orientations = parse_orientations(value);
    else if (key == "distance") p.pairs.distance = parse_value<int>(key, value);
    else if (key == "grid") {
        const auto x = value.find('x');
        if (x == std::string::npos) {
            p.grid.rows = p.grid.cols = parse_value<int>(key, value);
        } else {
            p.grid.rows = parse_value<int>(key, value.substr(0, x));
            p.grid.cols = parse_value<int>(key, value.substr(x + 1));
        }
    } else if (key == "grid-rows") p.grid.rows = parse_value<int>(key, value);
    else if (key == "grid-cols") p.grid.cols = parse_value<int>(key, value);
    else if (key == "window") p.window = value == "fps" ? 0 : parse_value<int>(key, value);
    else if (key == "bins") p.histogram.bins = parse_value<int>(key, value);
    else if (key == "growth") p.histogram.growth = parse_value<double>(key, value);
    else if (key == "skew-bound") p.histogram.skew_bound = parse_value<double>(key, value);
    else if (key == "normalize-histograms") p.histogram.normalize = parse_bool(key, value);
    else if (key == "background-diff") p.background_diff = parse_bool(key, value);
    else if (key == "ifu-flip") p.flip_ifu = parse_bool(key, value);
    else if (key == "trees") config.trees = parse_value<int>(key, value);
    else if (key == "folds" || key == "k") config.folds = parse_value<int>(key, value);
    else if (key == "repeats") config.repeats = parse_value<int>(key, value);
    else if (key == "seed") config.seed = parse_value<std::uint64_t>(key, value);
    else if (key == "threshold") config.threshold = parse_value<double>(key, value);
    else throw ConfigError("unknown config key '" + raw_key + "'");
}

Settings parse_settings(std::istream& in) {
    Settings out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

Settings read_settings_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    return parse_settings(in);
}

Settings describe(const RunConfig& config) {
    const auto& p = config.pipeline;
    return {
        {"ng", std::to_string(p.ng)},
        {"orientations", format_orientations(p.pairs)},
        {"distance", std::to_string(p.pairs.distance)},
        {"grid", std::to_string(p.grid.rows) + "x" + std::to_string(p.grid.cols)},
        {"window", p.window > 0 ? std::to_string(p.window) : "fps"},
        {"bins", std::to_string(p.histogram.bins)},
        {"growth", fmt(p.histogram.growth)},
        {"skew-bound", fmt(p.histogram.skew_bound)},
        {"normalize-histograms", p.histogram.normalize ? "true" : "false"},
        {"background-diff", p.background_diff ? "true" : "false"},
        {"ifu-flip", p.flip_ifu ? "true" : "false"},
        {"trees", std::to_string(config.trees)},
        {"folds", std::to_string(config.folds)},
        {"repeats", std::to_string(config.repeats)},
        {"seed", std::to_string(config.seed)},
        {"threshold", fmt(config.threshold)},
    };
}

}  // namespace crowdtex
