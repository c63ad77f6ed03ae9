#include "abc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace abc {

namespace {

double checked_total_weight(const WeightedSample& sample) {
    double total = 0.0;
    for (const auto& e : sample.entries) {
        if (e.weight < 0.0) throw Error("weighted sample contains a negative weight");
        total += e.weight;
    }
    if (!(total > 0.0)) {
        throw AllWeightsZeroError("all weights are zero; no posterior mass captured");
    }
    return total;
}

} // namespace

std::vector<double> weighted_expectation(const WeightedSample& sample,
                                         const std::function<std::vector<double>(const ParamVector&)>& f) {
    const double total = checked_total_weight(sample);
    std::vector<double> acc;
    for (const auto& e : sample.entries) {
        if (e.weight == 0.0 && !acc.empty()) continue;
        const std::vector<double> v = f(e.theta);
        if (acc.empty()) acc.assign(v.size(), 0.0);
        if (v.size() != acc.size()) throw Error("weighted_expectation: f returned inconsistent dimensions");
        for (std::size_t k = 0; k < v.size(); ++k) acc[k] += e.weight * v[k];
    }
    for (double& a : acc) a /= total;
    return acc;
}

double weighted_expectation_scalar(const WeightedSample& sample,
                                   const std::function<double(const ParamVector&)>& f) {
    return weighted_expectation(sample, [&f](const ParamVector& t) {
        return std::vector<double>{f(t)};
    })[0];
}

double weighted_expectation_std_error(const WeightedSample& sample,
                                      const std::function<double(const ParamVector&)>& f) {
    const double total = checked_total_weight(sample);
    const double mu = weighted_expectation_scalar(sample, f);
    double s2 = 0.0;
    for (const auto& e : sample.entries) {
        if (e.weight == 0.0) continue;
        const double d = f(e.theta) - mu;
        s2 += e.weight * e.weight * d * d;
    }
    return std::sqrt(s2) / total;
}

double effective_sample_size(const WeightedSample& sample) {
    const double total = checked_total_weight(sample);
    double wmax = 0.0;
    for (const auto& e : sample.entries) wmax = std::max(wmax, e.weight);
    return total / wmax;
}

EvidenceEstimate estimate_evidence(const Prior& prior, const Simulator& sim, const DataVector& obs,
                                   const DiscrepancyKernel& kernel, std::uint64_t n, std::uint64_t m,
                                   std::uint64_t seed, unsigned workers) {
    if (n < 1 || m < 1) throw Error("estimate_evidence: n and m must be >= 1");
    if (workers < 1) throw Error("estimate_evidence: workers must be >= 1");

    const DiscrepancyKernel k =
        kernel.metric() == Metric::MaxRelative ? kernel.with_reference(obs.values) : kernel;
    if (k.dim() != obs.dim()) {
        throw DimensionMismatchError("kernel dimension does not match observation dimension");
    }

    // Per-outer-draw inner means, filled by index so the final reduction is
    // independent of thread timing.
    std::vector<double> inner_means(n, 0.0);
    std::vector<std::exception_ptr> failures(workers);
    auto work = [&](unsigned w) {
        try {
            const std::uint64_t lo = n * w / workers;
            const std::uint64_t hi = n * (w + 1) / workers;
            RngStream rng(seed, w);
            for (std::uint64_t i = lo; i < hi; ++i) {
                const ParamVector theta = prior.sample(rng);
                double acc = 0.0;
                for (std::uint64_t j = 0; j < m; ++j) {
                    const DataVector x = sim.run(theta, rng);
                    acc += k.density(difference(obs, x));
                }
                inner_means[i] = acc / static_cast<double>(m);
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    EvidenceEstimate est;
    est.n = n;
    est.m = m;
    double sum = 0.0;
    for (double v : inner_means) sum += v;
    est.value = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : inner_means) ss += (v - est.value) * (v - est.value);
        est.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return est;
}

BayesFactor bayes_factor(const EvidenceEstimate& e1, const EvidenceEstimate& e2) {
    if (e2.value == 0.0) {
        throw ZeroDenominatorError("bayes_factor: denominator evidence estimate is zero");
    }
    BayesFactor bf;
    bf.value = e1.value / e2.value;
    const double r1 = e1.value != 0.0 ? e1.std_error / e1.value : 0.0;
    const double r2 = e2.std_error / e2.value;
    bf.std_error = std::abs(bf.value) * std::sqrt(r1 * r1 + r2 * r2);
    return bf;
}

} // namespace abc
