#pragma once

// Hand-worked 1-cell, ng=2 chain on 3x2 frames with horizontal pairs.
//   A = [0 0 1; 0 1 1]  pairs 00 01 01 11  -> p00=1/4 p01=1/2 p11=1/4
//   Z = [0 0 0; 0 0 0]  pairs 00 x4        -> point mass at (0,0)
//   C = [0 1 0; 1 0 1]  pairs 01 10 10 01  -> p01=p10=1/2
// Features (asm, contrast, homogeneity, correlation, dissimilarity):
//   A: 3/8, 1/2, 3/4, 2/3, 1/2   (mu_i=1/4, mu_j=3/4, var=3/16 each, cov=1/16)
//   Z: 1,   0,   1,   1/2, 0     (zero variance)
//   C: 1/2, 1,   1/2, 0,   1     (pearson -1)
// With background differencing on the stream Z, A, Z, C the differenced counts are
//   A-Z: 01 x2, 11 x1 -> 5/9, 2/3, 2/3, 1/2, 2/3 (column marginal constant)
//   Z-A: 00 x3        -> 1, 0, 1, 1/2, 0
//   C-Z: 01 x2, 10 x2 -> 1/2, 1, 1/2, 0, 1

#include <array>
#include <vector>

#include "crowdtex/frame.hpp"

namespace toy {

inline crowdtex::QuantizedFrame frame_a() { return {3, 2, 2, {0, 0, 1, 0, 1, 1}}; }
inline crowdtex::QuantizedFrame frame_z() { return {3, 2, 2, {0, 0, 0, 0, 0, 0}}; }
inline crowdtex::QuantizedFrame frame_c() { return {3, 2, 2, {0, 1, 0, 1, 0, 1}}; }

using FeatureRows = std::array<std::vector<double>, 5>;  // [feature][time]

// Stream A, Z, C without differencing.
inline FeatureRows plain_sequences() {
    return {{{3.0 / 8, 1.0, 0.5}, {0.5, 0.0, 1.0}, {0.75, 1.0, 0.5}, {2.0 / 3, 0.5, 0.0}, {0.5, 0.0, 1.0}}};
}

// Stream Z, A, Z, C with differencing.
inline FeatureRows diff_sequences() {
    return {{{5.0 / 9, 1.0, 0.5},
             {2.0 / 3, 0.0, 1.0},
             {2.0 / 3, 1.0, 0.5},
             {0.5, 0.5, 0.0},
             {2.0 / 3, 0.0, 1.0}}};
}

}  // namespace toy
