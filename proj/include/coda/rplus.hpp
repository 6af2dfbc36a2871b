#ifndef CODA_RPLUS_HPP
#define CODA_RPLUS_HPP

/**
 * @file rplus.hpp
 * @brief Euclidean vector-space structure of the positive real line.
 *
 * The positive reals form a one-dimensional vector space with the product as
 * inner sum and the power as scalar multiplication. The coordinate of x with
 * respect to the unit basis vector e is ln x, so every operation here is a
 * plain real-line operation on logarithms.
 */

#include <utility>

namespace coda {

/**
 * A strictly positive real number.
 *
 * The value is held as its log coordinate, so chains of `rp_add` and
 * `rp_scale` never overflow until `value()` is called. Two values compare
 * equal when their log coordinates agree within 1e-12.
 */
class PositiveValue {
public:
    /// Throws `Error(NonPositivePart)` unless `value` is finite and > 0.
    explicit PositiveValue(double value);

    /// Build directly from a finite log coordinate.
    static PositiveValue from_log(double log_value);

    double value() const;
    double log() const noexcept { return log_; }

    friend bool operator==(const PositiveValue& a, const PositiveValue& b);

private:
    struct FromLog {};
    PositiveValue(FromLog, double log_value) noexcept : log_(log_value) {}

    double log_;
};

/// Inner sum x ⊕ y = x·y.
PositiveValue rp_add(const PositiveValue& x, const PositiveValue& y);

/// Inverse element with respect to ⊕, i.e. 1/x.
PositiveValue rp_negate(const PositiveValue& x);

/// External product a ⊙ x = x^a. Throws for non-finite `a`.
PositiveValue rp_scale(double a, const PositiveValue& x);

/// ⟨x, y⟩₊ = ln x · ln y.
double rp_inner(const PositiveValue& x, const PositiveValue& y);

/// |ln x|
double rp_norm(const PositiveValue& x);

/// d₊(x, y) = |ln y − ln x|.
double rp_distance(const PositiveValue& x, const PositiveValue& y);

/// Coordinate with respect to the basis e: ln x.
double rp_coord(const PositiveValue& x);
PositiveValue rp_coord_inv(double y);

/// Density of the space's own measure λ₊ with respect to Lebesgue measure: 1/x.
double rp_measure_ratio(const PositiveValue& x);

/// λ₊ measure of the interval between a and b, |ln b − ln a|.
double rp_interval_measure(const PositiveValue& a, const PositiveValue& b);

} // namespace coda

#endif
