#ifndef ABC_TYPES_HPP
#define ABC_TYPES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "abc/errors.hpp"

namespace abc {

/// A point theta in parameter space. Dimension is fixed for the lifetime of
/// a run and component order matches the owning model's declared order.
struct ParamVector {
    std::vector<double> values;
    std::vector<std::string> labels; // optional; empty or one per component

    ParamVector() = default;
    explicit ParamVector(std::vector<double> v) : values(std::move(v)) {}
    ParamVector(std::initializer_list<double> v) : values(v) {}

    std::size_t dim() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool all_finite() const;

    friend bool operator==(const ParamVector& a, const ParamVector& b) {
        return a.values == b.values;
    }
};

/// An observation D or simulator output X. `is_summary` marks values that
/// have been projected through a summary statistic; kernels only ever
/// compare vectors with matching flags. Components listed in
/// `integral_components` are counts stored as reals and must hold integers.
struct DataVector {
    std::vector<double> values;
    bool is_summary = false;
    std::vector<std::size_t> integral_components;

    DataVector() = default;
    explicit DataVector(std::vector<double> v, bool summary = false)
        : values(std::move(v)), is_summary(summary) {}
    DataVector(std::initializer_list<double> v) : values(v) {}

    std::size_t dim() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool all_finite() const;

    /// Throws DimensionMismatchError if a flagged count component holds a
    /// non-integral value. Called at ingestion points (config, model data).
    void check_integrality() const;

    friend bool operator==(const DataVector& a, const DataVector& b) {
        return a.values == b.values && a.is_summary == b.is_summary;
    }
};

/// Succeeds iff the two vectors can be compared by a kernel: equal
/// dimension and equal summary flag.
void validate_pair(const DataVector& d, const DataVector& x);

/// Componentwise d - x. The difference space the acceptance kernels live on.
DataVector difference(const DataVector& d, const DataVector& x);

} // namespace abc

#endif // ABC_TYPES_HPP
