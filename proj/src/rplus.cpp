#include "coda/rplus.hpp"

#include "coda/errors.hpp"

#include <cmath>
#include <string>

namespace coda {

namespace {

constexpr double kLogEqualityTolerance = 1e-12;

double checked_log(double value) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw Error(ErrorKind::NonPositivePart,
                    "positive value required, got " + std::to_string(value));
    }
    return std::log(value);
}

} // namespace

PositiveValue::PositiveValue(double value) : log_(checked_log(value)) {}

PositiveValue PositiveValue::from_log(double log_value) {
    if (!std::isfinite(log_value)) {
        throw Error(ErrorKind::InvalidArgument, "log coordinate must be finite");
    }
    return PositiveValue(FromLog{}, log_value);
}

double PositiveValue::value() const { return std::exp(log_); }

bool operator==(const PositiveValue& a, const PositiveValue& b) {
    return std::abs(a.log_ - b.log_) <= kLogEqualityTolerance;
}

PositiveValue rp_add(const PositiveValue& x, const PositiveValue& y) {
    return PositiveValue::from_log(x.log() + y.log());
}

PositiveValue rp_negate(const PositiveValue& x) { return PositiveValue::from_log(-x.log()); }

PositiveValue rp_scale(double a, const PositiveValue& x) {
    if (!std::isfinite(a)) {
        throw Error(ErrorKind::InvalidArgument, "scalar must be finite");
    }
    return PositiveValue::from_log(a * x.log());
}

double rp_inner(const PositiveValue& x, const PositiveValue& y) { return x.log() * y.log(); }

double rp_norm(const PositiveValue& x) { return std::abs(x.log()); }

double rp_distance(const PositiveValue& x, const PositiveValue& y) {
    return std::abs(y.log() - x.log());
}

double rp_coord(const PositiveValue& x) { return x.log(); }

PositiveValue rp_coord_inv(double y) { return PositiveValue::from_log(y); }

double rp_measure_ratio(const PositiveValue& x) { return std::exp(-x.log()); }

double rp_interval_measure(const PositiveValue& a, const PositiveValue& b) {
    return rp_distance(a, b);
}

} // namespace coda
