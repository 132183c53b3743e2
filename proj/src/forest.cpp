#include "crowdtex/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "byte_io.hpp"
#include "crowdtex/error.hpp"
#include "crowdtex/rng.hpp"

namespace crowdtex {

double DecisionTree::predict(std::span<const double> x) const {
    std::size_t node = 0;
    while (!nodes[node].is_leaf()) {
        const auto& n = nodes[node];
        node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    const auto& leaf = nodes[node];
    return static_cast<double>(leaf.count1) / static_cast<double>(leaf.count0 + leaf.count1);
}

ForestModel::ForestModel(std::vector<DecisionTree> trees, std::size_t feature_count, std::uint64_t seed)
    : trees_(std::move(trees)), feature_count_(feature_count), seed_(seed) {}

double ForestModel::predict_proba(std::span<const double> x) const {
    if (x.size() != feature_count_)
        throw std::invalid_argument("feature vector has " + std::to_string(x.size()) +
                                    " values, model expects " + std::to_string(feature_count_));
    if (trees_.empty()) throw std::logic_error("forest has no trees");
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(x);
    return sum / static_cast<double>(trees_.size());
}

namespace {

__extension__ using i128 = __int128;

// Row-major training matrix in canonical sample order.
struct TrainingSet {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> x;
    std::vector<int> y;

    double at(std::size_t row, std::size_t col) const noexcept { return x[row * cols + col]; }
};

struct Split {
    int feature = -1;
    double threshold = 0.0;
    // Split quality is (sL/nL + sR/nR) with s = c0^2 + c1^2; larger is purer.
    // Kept as an exact fraction num/den so ties compare exactly.
    i128 num = 0;
    i128 den = 1;
};

// Is a strictly purer than b?
bool purer(const Split& a, const Split& b) { return a.num * b.den > b.num * a.den; }
bool equally_pure(const Split& a, const Split& b) { return a.num * b.den == b.num * a.den; }

class TreeBuilder {
public:
    TreeBuilder(const TrainingSet& data, const ForestParams& params, int mtry, rng::Engine& engine)
        : data_(data), params_(params), mtry_(mtry), engine_(engine) {}

    DecisionTree build(std::vector<std::size_t> indices) {
        indices_ = std::move(indices);
        DecisionTree tree;
        struct Pending {
            std::size_t begin, end;
            std::int32_t node;
        };
        tree.nodes.emplace_back();
        std::vector<Pending> stack{{0, indices_.size(), 0}};
        while (!stack.empty()) {
            const Pending job = stack.back();
            stack.pop_back();
            std::uint32_t c0 = 0, c1 = 0;
            for (std::size_t k = job.begin; k < job.end; ++k) (data_.y[indices_[k]] ? c1 : c0) += 1;
            TreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
            node.count0 = c0;
            node.count1 = c1;
            const std::size_t size = job.end - job.begin;
            if (c0 == 0 || c1 == 0 || size < static_cast<std::size_t>(params_.min_samples_split)) continue;

            const Split split = best_split(job.begin, job.end);
            if (split.feature < 0) continue;

            const auto mid_it = std::partition(
                indices_.begin() + static_cast<std::ptrdiff_t>(job.begin),
                indices_.begin() + static_cast<std::ptrdiff_t>(job.end), [&](std::size_t row) {
                    return data_.at(row, static_cast<std::size_t>(split.feature)) <= split.threshold;
                });
            const auto mid = static_cast<std::size_t>(mid_it - indices_.begin());
            // partition() order is unspecified; keep children deterministic.
            std::sort(indices_.begin() + static_cast<std::ptrdiff_t>(job.begin), mid_it);
            std::sort(mid_it, indices_.begin() + static_cast<std::ptrdiff_t>(job.end));

            const auto left = static_cast<std::int32_t>(tree.nodes.size());
            const auto right = left + 1;
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            TreeNode& parent = tree.nodes[static_cast<std::size_t>(job.node)];
            parent.feature = split.feature;
            parent.threshold = split.threshold;
            parent.left = left;
            parent.right = right;
            stack.push_back({mid, job.end, right});
            stack.push_back({job.begin, mid, left});
        }
        return tree;
    }

private:
    Split best_split(std::size_t begin, std::size_t end) {
        const std::size_t d = data_.cols;
        features_.resize(d);
        std::iota(features_.begin(), features_.end(), std::size_t{0});
        Split best;
        int informative = 0;
        // Visit features in random order until mtry non-constant ones were tried.
        for (std::size_t k = 0; k < d && informative < mtry_; ++k) {
            const std::size_t j = k + rng::uniform_index(engine_, d - k);
            std::swap(features_[k], features_[j]);
            if (evaluate_feature(features_[k], begin, end, best)) ++informative;
        }
        return best;
    }

    // Scans every midpoint threshold of one feature. Returns false when the
    // feature is constant inside the node.
    bool evaluate_feature(std::size_t feature, std::size_t begin, std::size_t end, Split& best) {
        column_.clear();
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t row = indices_[k];
            column_.push_back({data_.at(row, feature), data_.y[row]});
        }
        std::sort(column_.begin(), column_.end());
        if (column_.front().first == column_.back().first) return false;

        std::int64_t total1 = 0;
        for (const auto& [v, label] : column_) total1 += label;
        const auto n = static_cast<std::int64_t>(column_.size());
        std::int64_t left1 = 0;
        for (std::size_t i = 0; i + 1 < column_.size(); ++i) {
            left1 += column_[i].second;
            const double lo = column_[i].first;
            const double hi = column_[i + 1].first;
            if (!(lo < hi)) continue;
            const auto nl = static_cast<std::int64_t>(i + 1);
            const std::int64_t nr = n - nl;
            const std::int64_t l0 = nl - left1;
            const std::int64_t r1 = total1 - left1;
            const std::int64_t r0 = nr - r1;
            const i128 sl = static_cast<i128>(l0) * l0 + static_cast<i128>(left1) * left1;
            const i128 sr = static_cast<i128>(r0) * r0 + static_cast<i128>(r1) * r1;
            Split cand;
            cand.feature = static_cast<int>(feature);
            cand.threshold = lo + (hi - lo) / 2.0;
            if (!(cand.threshold < hi)) cand.threshold = lo;
            cand.num = sl * nr + sr * nl;
            cand.den = static_cast<i128>(nl) * nr;
            if (best.feature < 0 || purer(cand, best) ||
                (equally_pure(cand, best) &&
                 (cand.feature < best.feature ||
                  (cand.feature == best.feature && cand.threshold < best.threshold))))
                best = cand;
        }
        return true;
    }

    const TrainingSet& data_;
    const ForestParams& params_;
    int mtry_;
    rng::Engine& engine_;
    std::vector<std::size_t> indices_;
    std::vector<std::size_t> features_;
    std::vector<std::pair<double, int>> column_;
};

}  // namespace

TrainResult train_forest(std::span<const LabeledSample> samples, const ForestParams& params) {
    if (samples.empty()) throw std::invalid_argument("cannot train on an empty sample set");
    if (params.tree_count < 1) throw std::invalid_argument("tree count must be >= 1");
    if (params.min_samples_split < 2) throw std::invalid_argument("min_samples_split must be >= 2");
    const std::size_t d = samples.front().features.size();
    if (d == 0) throw std::invalid_argument("samples have no features");
    bool has0 = false, has1 = false;
    for (const auto& s : samples) {
        if (s.features.size() != d) throw std::invalid_argument("samples differ in feature length");
        if (s.label != 0 && s.label != 1) throw std::invalid_argument("labels must be 0 or 1");
        for (double v : s.features)
            if (!std::isfinite(v)) throw std::invalid_argument("features must be finite");
        (s.label ? has1 : has0) = true;
    }
    if (!has0 || !has1) throw std::invalid_argument("training data must contain both classes");

    // Canonical order: lexicographic on (features, label).
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& fa = samples[a].features;
        const auto& fb = samples[b].features;
        if (fa != fb) return std::lexicographical_compare(fa.begin(), fa.end(), fb.begin(), fb.end());
        return samples[a].label < samples[b].label;
    });

    TrainingSet data;
    data.rows = samples.size();
    data.cols = d;
    data.x.reserve(data.rows * d);
    for (std::size_t idx : order) {
        data.x.insert(data.x.end(), samples[idx].features.begin(), samples[idx].features.end());
        data.y.push_back(samples[idx].label);
    }

    const int mtry = params.max_features > 0
                         ? std::min<int>(params.max_features, static_cast<int>(d))
                         : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
    const auto trees = static_cast<std::size_t>(params.tree_count);
    std::vector<DecisionTree> forest(trees);
    std::vector<std::vector<char>> in_bag(trees);

#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < static_cast<long>(trees); ++t) {
        rng::Engine engine(rng::hash(params.seed, static_cast<std::uint64_t>(t), 0x7472656573ULL));
        std::vector<std::size_t> indices(data.rows);
        auto& bag = in_bag[static_cast<std::size_t>(t)];
        bag.assign(data.rows, 0);
        if (params.bootstrap) {
            for (auto& idx : indices) idx = rng::uniform_index(engine, data.rows);
            std::sort(indices.begin(), indices.end());
        } else {
            std::iota(indices.begin(), indices.end(), std::size_t{0});
        }
        for (std::size_t idx : indices) bag[idx] = 1;
        TreeBuilder builder(data, params, mtry, engine);
        forest[static_cast<std::size_t>(t)] = builder.build(std::move(indices));
    }

    TrainResult result;
    result.oob_scores.assign(samples.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t row = 0; row < data.rows; ++row) {
        double sum = 0.0;
        int votes = 0;
        const std::span<const double> x(data.x.data() + row * d, d);
        for (std::size_t t = 0; t < trees; ++t) {
            if (in_bag[t][row]) continue;
            sum += forest[t].predict(x);
            ++votes;
        }
        if (votes > 0) result.oob_scores[order[row]] = sum / votes;
    }
    result.model = ForestModel(std::move(forest), d, params.seed);
    return result;
}

namespace {

constexpr char kModelMagic[4] = {'C', 'T', 'R', 'F'};
constexpr std::size_t kNodeBytes = 4 + 8 + 4 + 4 + 4 + 4;

}  // namespace

std::string save_model(const ForestModel& model) {
    using detail::put_le;
    std::string buf(kModelMagic, sizeof kModelMagic);
    put_le<std::uint32_t>(buf, kModelFormatVersion);
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(model.tree_count()));
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(model.feature_count()));
    put_le<std::uint64_t>(buf, model.seed());
    for (const auto& tree : model.trees()) {
        std::string rec;
        put_le<std::uint32_t>(rec, static_cast<std::uint32_t>(tree.nodes.size()));
        for (const auto& n : tree.nodes) {
            put_le<std::int32_t>(rec, n.feature);
            put_le<double>(rec, n.threshold);
            put_le<std::int32_t>(rec, n.left);
            put_le<std::int32_t>(rec, n.right);
            put_le<std::uint32_t>(rec, n.count0);
            put_le<std::uint32_t>(rec, n.count1);
        }
        put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(rec.size()));
        buf += rec;
    }
    return buf;
}

ForestModel load_model(std::string_view bytes) {
    detail::ByteReader reader(bytes.data(), bytes.size());
    if (bytes.size() < 4 || reader.get_bytes(4) != std::string(kModelMagic, 4))
        throw FormatError("not a forest model (bad magic)");
    const auto version = reader.get<std::uint32_t>();
    if (version != kModelFormatVersion)
        throw FormatError("model format version " + std::to_string(version) + " is not supported (expected version " +
                          std::to_string(kModelFormatVersion) + ")");
    const auto tree_count = reader.get<std::uint32_t>();
    const auto feature_count = reader.get<std::uint32_t>();
    const auto seed = reader.get<std::uint64_t>();
    if (tree_count == 0 || feature_count == 0) throw FormatError("model has no trees or no features");

    std::vector<DecisionTree> trees(tree_count);
    for (auto& tree : trees) {
        const auto rec_len = reader.get<std::uint32_t>();
        const auto start = reader.position();
        const auto node_count = reader.get<std::uint32_t>();
        if (node_count == 0) throw FormatError("tree with no nodes");
        if (reader.remaining() / kNodeBytes < node_count) throw FormatError("payload truncated");
        tree.nodes.resize(node_count);
        for (std::uint32_t i = 0; i < node_count; ++i) {
            auto& n = tree.nodes[i];
            n.feature = reader.get<std::int32_t>();
            n.threshold = reader.get<double>();
            n.left = reader.get<std::int32_t>();
            n.right = reader.get<std::int32_t>();
            n.count0 = reader.get<std::uint32_t>();
            n.count1 = reader.get<std::uint32_t>();
            if (n.is_leaf()) {
                if (n.count0 + n.count1 == 0) throw FormatError("leaf without samples");
            } else {
                const auto self = static_cast<std::int64_t>(i);
                if (static_cast<std::uint32_t>(n.feature) >= feature_count)
                    throw FormatError("split feature index out of range");
                if (n.left <= self || n.right <= self || n.left >= static_cast<std::int64_t>(node_count) ||
                    n.right >= static_cast<std::int64_t>(node_count))
                    throw FormatError("child index out of range");
            }
        }
        if (reader.position() - start != rec_len) throw FormatError("tree record length mismatch");
    }
    if (reader.remaining() != 0) throw FormatError("trailing bytes after model payload");
    return ForestModel(std::move(trees), feature_count, seed);
}

void save_model_file(const std::filesystem::path& path, const ForestModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const auto bytes = save_model(model);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

ForestModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model " + path.string());
    return load_model(detail::slurp(in));
}

}  // namespace crowdtex
