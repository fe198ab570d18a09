#pragma once

#include <cstdint>
#include <vector>

#include "dualband/scene.hpp"

namespace dualband {

// Observation window of r steps ending at origin_index, labeled with whether a
// blockage occurs in the following r' steps.
struct WindowedSample {
    std::vector<Frame> frames;        // r frames, oldest first
    std::vector<PowerVector> powers;  // r power vectors, oldest first
    int label = 0;                    // s[tau]
    int origin_index = 0;             // tau
};

struct SplitFractions {
    double train = 0.7;
    double val = 0.2;
    double test = 0.1;
};

struct SplitDataset {
    std::vector<WindowedSample> train;
    std::vector<WindowedSample> val;
    std::vector<WindowedSample> test;
    SplitFractions fractions;
    std::uint64_t seed = 0;
};

// One sample per tau in [r-1, len-r'-1]; label = 1 iff any a[t]=1 for
// t in {tau+1, ..., tau+r'}.
std::vector<WindowedSample> window_and_label(const LinkTrace& trace, int r,
                                             int r_prime);

// Seeded undersampling of the majority class; counts end up within 1.
std::vector<WindowedSample> balance(const std::vector<WindowedSample>& samples,
                                    std::uint64_t seed);

// Seeded shuffle, then contiguous partition at floor(f1*n) and floor((f1+f2)*n).
SplitDataset split(const std::vector<WindowedSample>& samples,
                   const SplitFractions& fractions, std::uint64_t seed);

}  // namespace dualband
