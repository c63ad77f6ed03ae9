#include "abc/types.hpp"

#include <cmath>

namespace abc {

bool ParamVector::all_finite() const {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

bool DataVector::all_finite() const {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void DataVector::check_integrality() const {
    for (std::size_t i : integral_components) {
        if (i >= values.size()) {
            throw DimensionMismatchError("integral component index " + std::to_string(i) +
                                         " out of range for dimension " + std::to_string(values.size()));
        }
        if (values[i] != std::nearbyint(values[i])) {
            throw DimensionMismatchError("component " + std::to_string(i) +
                                         " is flagged as a count but holds " + std::to_string(values[i]));
        }
    }
}

void validate_pair(const DataVector& d, const DataVector& x) {
    if (d.dim() != x.dim()) {
        throw DimensionMismatchError("data dimension " + std::to_string(d.dim()) +
                                     " does not match simulator output dimension " + std::to_string(x.dim()));
    }
    if (d.is_summary != x.is_summary) {
        throw DimensionMismatchError("summary flag mismatch: one side is raw, the other summarized");
    }
}

DataVector difference(const DataVector& d, const DataVector& x) {
    validate_pair(d, x);
    DataVector out;
    out.values.resize(d.dim());
    out.is_summary = d.is_summary;
    for (std::size_t i = 0; i < d.dim(); ++i) {
        out.values[i] = d.values[i] - x.values[i];
    }
    return out;
}

} // namespace abc
