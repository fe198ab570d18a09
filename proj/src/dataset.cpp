#include "dualband/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualband/errors.hpp"
#include "dualband/rng.hpp"

namespace dualband {

std::vector<WindowedSample> window_and_label(const LinkTrace& trace, int r,
                                             int r_prime) {
    if (r < 1 || r_prime < 1)
        throw ConfigError("windowing: r and r_prime must be >= 1");
    const int len = static_cast<int>(trace.size());
    if (len < r + r_prime)
        throw ConfigError("windowing: trace length " + std::to_string(len) +
                          " below minimum " + std::to_string(r + r_prime));
    std::vector<WindowedSample> out;
    out.reserve(len - r - r_prime + 1);
    for (int tau = r - 1; tau <= len - r_prime - 1; ++tau) {
        WindowedSample s;
        s.origin_index = tau;
        for (int t = tau - r + 1; t <= tau; ++t) {
            s.frames.push_back(trace.frames[t]);
            s.powers.push_back(trace.powers[t]);
        }
        s.label = 0;
        for (int t = tau + 1; t <= tau + r_prime; ++t)
            if (trace.blocked[t]) s.label = 1;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<WindowedSample> balance(const std::vector<WindowedSample>& samples,
                                    std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < samples.size(); ++i)
        (samples[i].label ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw ConfigError("balance: need at least one sample of each class");
    auto& majority = pos.size() > neg.size() ? pos : neg;
    const std::size_t keep = std::min(pos.size(), neg.size());
    Rng rng(seed);
    // seeded Fisher-Yates, then keep the first `keep` of the majority
    for (std::size_t i = majority.size() - 1; i > 0; --i) {
        const auto j = rng.uniform_int(0, i);
        std::swap(majority[i], majority[j]);
    }
    majority.resize(keep);
    std::vector<std::size_t> chosen;
    chosen.insert(chosen.end(), pos.begin(), pos.end());
    chosen.insert(chosen.end(), neg.begin(), neg.end());
    std::sort(chosen.begin(), chosen.end());  // preserve original order
    std::vector<WindowedSample> out;
    out.reserve(chosen.size());
    for (auto i : chosen) out.push_back(samples[i]);
    return out;
}

SplitDataset split(const std::vector<WindowedSample>& samples,
                   const SplitFractions& fractions, std::uint64_t seed) {
    if (samples.empty()) throw ConfigError("split: empty input");
    if (!(fractions.train > 0 && fractions.val > 0 && fractions.test > 0))
        throw ConfigError("split: fractions must be positive");
    if (std::fabs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9)
        throw ConfigError("split: fractions must sum to 1");
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const auto j = rng.uniform_int(0, i);
        std::swap(order[i], order[j]);
    }
    const auto n = samples.size();
    const auto cut1 = static_cast<std::size_t>(std::floor(fractions.train * n));
    const auto cut2 = static_cast<std::size_t>(
        std::floor((fractions.train + fractions.val) * n));
    SplitDataset ds;
    ds.fractions = fractions;
    ds.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = samples[order[i]];
        if (i < cut1)
            ds.train.push_back(s);
        else if (i < cut2)
            ds.val.push_back(s);
        else
            ds.test.push_back(s);
    }
    return ds;
}

}  // namespace dualband
