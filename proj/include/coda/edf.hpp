#ifndef CODA_EDF_HPP
#define CODA_EDF_HPP

/**
 * @file edf.hpp
 * @brief Empirical distribution function statistics.
 *
 * Each statistic takes probability-integral-transformed values u_i = F(x_i).
 * Modified forms and 1% critical values follow D'Agostino & Stephens (1986),
 * "Goodness-of-Fit Techniques", Table 4.2 (fully specified null, used for the
 * uniformity tests) and Table 4.7 (normal null with mean and variance estimated).
 */

#include <span>
#include <string_view>

namespace coda::edf {

enum class Statistic { AndersonDarling, CramerVonMises, Watson };

std::string_view name(Statistic s) noexcept;

/// Raw A², W² and U² of a sample of values in (0, 1). The input need not be sorted.
double anderson_darling(std::span<const double> u);
double cramer_von_mises(std::span<const double> u);
double watson(std::span<const double> u);

double raw_statistic(Statistic s, std::span<const double> u);

/// Null hypothesis family that fixes the small-sample modification and critical value.
enum class Null { FullySpecified, NormalEstimated };

double modified(Statistic s, Null null, double raw, std::size_t n);
double critical_value_1pct(Statistic s, Null null);

} // namespace coda::edf

#endif
