#include "voltacal/measured.hpp"

namespace voltacal {

MeasuredQuantity propagate_sum(const std::vector<MeasuredQuantity>& terms) {
    double value = 0.0;
    double err_sq = 0.0;
    for (const auto& t : terms) {
        value += t.value;
        err_sq += t.error * t.error;
    }
    return {value, std::sqrt(err_sq)};
}

MeasuredQuantity propagate_ratio(const MeasuredQuantity& numerator,
                                 const MeasuredQuantity& denominator) {
    if (denominator.value == 0.0)
        throw DivisionByZero("propagate_ratio: denominator value is zero");
    const double value = numerator.value / denominator.value;
    const double ra = numerator.error / denominator.value;
    const double rb = value * denominator.error / denominator.value;
    return {value, std::hypot(ra, rb)};
}

}  // namespace voltacal
