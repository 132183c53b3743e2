#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crowdtex {

/// One descriptor with its ground truth: label 0 = normal, 1 = abnormal.
/// `group` identifies the source video; samples of a group never straddle a
/// train/test split.
struct LabeledSample {
    std::vector<double> features;
    int label = 0;
    std::string group;
    std::int64_t frame_index = 0;

    friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

}  // namespace crowdtex
