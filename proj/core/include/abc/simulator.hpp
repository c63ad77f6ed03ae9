#ifndef ABC_SIMULATOR_HPP
#define ABC_SIMULATOR_HPP

#include "abc/random.hpp"
#include "abc/types.hpp"

namespace abc {

/// A stochastic forward model X ~ eta(theta). Implementations draw all
/// randomness from the stream they are handed, so identical (theta, stream
/// state) pairs produce identical outputs.
class Simulator {
public:
    virtual ~Simulator() = default;
    virtual DataVector run(const ParamVector& theta, RngStream& rng) const = 0;
    virtual std::size_t output_dim() const = 0;
};

/// Deterministic projection S(.) of data or model output onto summaries.
/// Output always carries is_summary = true.
class SummaryFn {
public:
    virtual ~SummaryFn() = default;
    virtual DataVector apply(const DataVector& raw) const = 0;
    virtual std::size_t out_dim() const = 0;
};

/// S(x) = x. Useful as a baseline: a run configured with the identity
/// summary is bit-identical to the unsummarized run.
class IdentitySummary final : public SummaryFn {
public:
    explicit IdentitySummary(std::size_t dim) : dim_(dim) {}

    DataVector apply(const DataVector& raw) const override {
        DataVector out = raw;
        out.is_summary = true;
        return out;
    }

    std::size_t out_dim() const override { return dim_; }

private:
    std::size_t dim_;
};

} // namespace abc

#endif // ABC_SIMULATOR_HPP
