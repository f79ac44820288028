#pragma once

#include <cmath>
#include <vector>

#include "voltacal/errors.hpp"

namespace voltacal {

// A value with a symmetric absolute uncertainty. The unit is whatever the
// surrounding context says it is; this type only does the error algebra.
struct MeasuredQuantity {
    double value = 0.0;
    double error = 0.0;

    MeasuredQuantity() = default;
    MeasuredQuantity(double v, double e) : value(v), error(std::fabs(e)) {}
};

// Error of a sum (or difference): quadrature of the individual errors.
// Signs of the values are the caller's business and must be applied before
// the call; the error combination is sign-blind anyway.
MeasuredQuantity propagate_sum(const std::vector<MeasuredQuantity>& terms);

// Error of a quotient: relative errors combine in quadrature.
// Evaluated as sqrt((ea/b)^2 + (value*eb/b)^2), which is algebraically the
// same as |a/b|*sqrt((ea/a)^2 + (eb/b)^2) but stays finite when a == 0.
MeasuredQuantity propagate_ratio(const MeasuredQuantity& numerator,
                                 const MeasuredQuantity& denominator);

}  // namespace voltacal
