#ifndef ABC_SAMPLE_HPP
#define ABC_SAMPLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abc/types.hpp"

namespace abc {

/// One retained draw: parameter, nonnegative weight, and (when the sampler
/// keeps it) the simulated output that produced the draw. For summarized
/// runs `x` is the kernel-space output, i.e. post-summary.
struct SampleEntry {
    ParamVector theta;
    double weight = 1.0;
    std::optional<DataVector> x;
};

struct SampleMeta {
    std::uint64_t total_proposals = 0;
    std::uint64_t seed = 0;
    std::string kernel;          // kernel descriptor, e.g. "uniform_ball(delta=0.1,metric=euclidean)"
    std::string algorithm;
    double acceptance_rate = 0.0;
    std::vector<double> per_chain_acceptance; // MCMC only
    std::uint64_t nonfinite_ratio_rejects = 0; // MCMC diagnostic
    bool all_weights_zero = false;
    std::vector<std::uint8_t> decisions; // per-proposal accept flags, only if traced
};

/// A weighted sample (theta_i, w_i) with acceptance metadata.
struct WeightedSample {
    std::vector<SampleEntry> entries;
    SampleMeta meta;

    std::size_t size() const { return entries.size(); }

    double total_weight() const {
        double s = 0.0;
        for (const auto& e : entries) s += e.weight;
        return s;
    }
};

} // namespace abc

#endif // ABC_SAMPLE_HPP
