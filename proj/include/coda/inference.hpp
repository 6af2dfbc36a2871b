#ifndef CODA_INFERENCE_HPP
#define CODA_INFERENCE_HPP

/**
 * @file inference.hpp
 * @brief Estimation and goodness-of-fit on coordinates.
 */

#include "coda/edf.hpp"
#include "coda/laws.hpp"
#include "coda/rplus.hpp"
#include "coda/simplex.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace coda {

/// Nonempty sample of positive values with cached log coordinates.
class RPlusSample {
public:
    explicit RPlusSample(std::vector<PositiveValue> values);

    const std::vector<PositiveValue>& values() const noexcept { return values_; }
    const Eigen::VectorXd& logs() const noexcept { return logs_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// ȳ, the mean of the logs.
    double log_mean() const;
    /// V, the standard deviation of the logs with divisor n − 1. Needs n >= 2.
    double log_sd() const;

private:
    std::vector<PositiveValue> values_;
    Eigen::VectorXd logs_;
};

/// Nonempty sample of compositions sharing D and kappa, with a coordinate basis.
class SimplexSample {
public:
    SimplexSample(std::vector<Composition> compositions, ContrastBasis basis);

    const std::vector<Composition>& compositions() const noexcept { return compositions_; }
    const ContrastBasis& basis() const noexcept { return basis_; }
    std::size_t size() const noexcept { return compositions_.size(); }
    std::size_t parts() const noexcept { return basis_.parts(); }

    /// n×(D−1) matrix of ilr coordinates, one row per composition.
    const Eigen::MatrixXd& coordinates() const noexcept { return coords_; }

    /// Same compositions with coordinates in another basis.
    SimplexSample with_basis(ContrastBasis basis) const;

private:
    std::vector<Composition> compositions_;
    ContrastBasis basis_;
    Eigen::MatrixXd coords_;
};

/// Estimates from a sample on R+. sigma2 may be zero for constant samples.
struct RPlusEstimate {
    double mu;
    double sigma2;
    std::size_t n;

    /// Geometric mean of the data, e^μ̂.
    PositiveValue fitted_mean() const;
    /// Throws DegenerateVariance when sigma2 == 0.
    NormalOnRPlus law() const;
};

/// μ̂ = ȳ and σ̂² = V² (divisor n − 1). Throws InsufficientData for n < 2.
RPlusEstimate fit_nrp(const RPlusSample& sample);

/**
 * Exact (1 − alpha) confidence interval for the mean e^μ:
 * exp(ȳ ∓ t_{α/2, n−1} · V / √n).
 */
std::pair<PositiveValue, PositiveValue> ci_mean_nrp(const RPlusSample& sample, double alpha);

/// Back-transformed lognormal mean estimate e^(ȳ + V²/2).
double naive_lognormal_mean(const RPlusSample& sample);

/// μ̂ = coordinate mean, Σ̂ = coordinate covariance with divisor n − 1.
NormalOnSimplex fit_nsd(const SimplexSample& sample);

struct GofEntry {
    /// "marginal", "angle" or "radius".
    std::string layer;
    /// Coordinate label such as "y1", "y1,y2" or "r".
    std::string component;
    edf::Statistic test;
    double statistic;
    double critical_1pct;
    bool passed_at_1pct;
};

struct GofReport {
    std::vector<GofEntry> entries;
    std::size_t n;

    std::size_t rejections() const;
    std::size_t rejections(const std::string& layer) const;
};

/**
 * Normality battery on the coordinates of `sample` against `fitted`.
 *
 * - marginal: each coordinate standardized with the fitted mean and variance,
 *   tested for normality with estimated-parameter modifications;
 * - angle: for each coordinate pair, the angle of the Cholesky-whitened centred
 *   pair divided by 2π, tested for uniformity;
 * - radius: χ²_{D−1} CDF of the Mahalanobis distances, tested for uniformity.
 * Each layer runs Anderson–Darling, Cramér–von Mises and Watson. For D = 3 this
 * gives 12 tests. Throws InsufficientData for n < 8.
 */
GofReport gof_battery(const SimplexSample& sample, const NormalOnSimplex& fitted);

} // namespace coda

#endif
