#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdtex/sample.hpp"

namespace crowdtex {

struct ForestParams {
    int tree_count = 50;
    std::uint64_t seed = 0;
    int max_features = 0;  ///< features tried per split; 0 means floor(sqrt(d))
    bool bootstrap = true;
    int min_samples_split = 2;
};

/// Flat node; `feature < 0` marks a leaf. Samples with x[feature] <= threshold
/// go left. Every node keeps the class counts of the training samples that
/// reached it.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t count0 = 0;
    std::uint32_t count1 = 0;

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  ///< nodes[0] is the root

    /// Positive-class fraction of the leaf `x` lands in.
    double predict(std::span<const double> x) const;
    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

class ForestModel {
public:
    ForestModel() = default;
    ForestModel(std::vector<DecisionTree> trees, std::size_t feature_count, std::uint64_t seed);

    /// Mean over trees of the leaf positive fraction, in [0, 1]. Throws
    /// std::invalid_argument on a feature-length mismatch.
    double predict_proba(std::span<const double> x) const;

    std::size_t tree_count() const noexcept { return trees_.size(); }
    std::size_t feature_count() const noexcept { return feature_count_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

    friend bool operator==(const ForestModel&, const ForestModel&) = default;

private:
    std::vector<DecisionTree> trees_;
    std::size_t feature_count_ = 0;
    std::uint64_t seed_ = 0;
};

struct TrainResult {
    ForestModel model;
    /// Out-of-bag positive probability per input sample (input order); NaN
    /// for samples that were in every bootstrap draw.
    std::vector<double> oob_scores;
};

/// Fits a forest. Samples are first put in a canonical order, so shuffling
/// the input leaves the model unchanged. Tree t draws its randomness from
/// (seed, t) alone; trees are built concurrently. Throws std::invalid_argument
/// for empty or single-class input or ragged feature vectors.
TrainResult train_forest(std::span<const LabeledSample> samples, const ForestParams& params);

inline ForestModel train(std::span<const LabeledSample> samples, const ForestParams& params) {
    return train_forest(samples, params).model;
}

// Model file, little-endian:
//   "CTRF" u32 version u32 tree_count u32 feature_count u64 seed
//   per tree: u32 byte_len u32 node_count
//             node_count x (i32 feature f64 threshold i32 left i32 right u32 c0 u32 c1)
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string save_model(const ForestModel& model);
/// Throws FormatError on malformed, truncated or version-mismatched payloads.
ForestModel load_model(std::string_view bytes);
void save_model_file(const std::filesystem::path& path, const ForestModel& model);
ForestModel load_model_file(const std::filesystem::path& path);

}  // namespace crowdtex
