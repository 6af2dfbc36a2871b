#ifndef CODA_LAWS_HPP
#define CODA_LAWS_HPP

/**
 * @file laws.hpp
 * @brief Normal laws on R+ and S^D, and their Lebesgue-measure counterparts.
 *
 * `NormalOnRPlus` and `LognormalLaw` share parameters and describe the same
 * probability law; they differ only in the reference measure their density is
 * taken against (λ₊ versus Lebesgue). The same holds for `NormalOnSimplex`
 * (density against λ_a) and `AlnLaw` (density against Lebesgue measure on the
 * first D−1 parts). Probabilities of events therefore agree, while densities,
 * modes and means do not.
 */

#include "coda/rplus.hpp"
#include "coda/simplex.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>

namespace coda {

// ---------------------------------------------------------------------------
// Positive real line

class NormalOnRPlus {
public:
    /// Throws InvalidArgument unless mu is finite and sigma2 is finite and > 0.
    NormalOnRPlus(double mu, double sigma2);

    double mu() const noexcept { return mu_; }
    double sigma2() const noexcept { return sigma2_; }
    double sigma() const noexcept;

private:
    double mu_;
    double sigma2_;
};

class LognormalLaw {
public:
    LognormalLaw(double mu, double sigma2);

    double mu() const noexcept { return mu_; }
    double sigma2() const noexcept { return sigma2_; }
    double sigma() const noexcept;

private:
    double mu_;
    double sigma2_;
};

LognormalLaw as_lognormal(const NormalOnRPlus& law);
NormalOnRPlus as_normal_on_rplus(const LognormalLaw& law);

/// Law of a ⊕ (b ⊙ X): N₊(ln a + bμ, b²σ²). Throws DegenerateScale for b = 0.
NormalOnRPlus nrp_transform(const NormalOnRPlus& law, const PositiveValue& a, double b);

/// Density with respect to λ₊.
double nrp_pdf(const NormalOnRPlus& law, const PositiveValue& x);
double nrp_log_pdf(const NormalOnRPlus& law, const PositiveValue& x);
double nrp_cdf(const NormalOnRPlus& law, const PositiveValue& x);

/// Density with respect to Lebesgue measure; exactly 0 for x <= 0.
double lognormal_pdf(const LognormalLaw& law, double x);
double lognormal_cdf(const LognormalLaw& law, double x);

struct RPlusMoments {
    PositiveValue mean;
    PositiveValue median;
    PositiveValue mode;
    double metric_variance;
};

/// Mean, median and mode all equal e^μ; the metric variance is σ².
RPlusMoments nrp_moments(const NormalOnRPlus& law);

struct LognormalMoments {
    double mean;
    double median;
    double mode;
    double variance;

    double sd() const;
};

LognormalMoments lognormal_moments(const LognormalLaw& law);

/// mean ± k·sd computed with classical lognormal moments.
struct NaiveInterval {
    double lower;
    double upper;
    /// False when the lower endpoint falls outside R+.
    bool within_support;
};

NaiveInterval lognormal_naive_interval(const LognormalLaw& law, double k);

/// (e^(μ−kσ), e^(μ+kσ)), an isodensity interval of d₊-length 2kσ.
std::pair<PositiveValue, PositiveValue> nrp_interval(const NormalOnRPlus& law, double k);

/// P(a < X < b) via the normal CDF of log coordinates. Throws BadInterval unless 0 < a < b.
double probability_of_interval(const NormalOnRPlus& law, double a, double b);
double probability_of_interval(const LognormalLaw& law, double a, double b);

// ---------------------------------------------------------------------------
// Simplex

/// Normal law of the ilr coordinates, density taken against λ_a.
class NormalOnSimplex {
public:
    /// Throws DimensionMismatch on inconsistent sizes and NotSPD when the
    /// Cholesky factorization of sigma fails.
    NormalOnSimplex(Eigen::VectorXd mu, Eigen::MatrixXd sigma, ContrastBasis basis);

    const Eigen::VectorXd& mu() const noexcept { return mu_; }
    const Eigen::MatrixXd& sigma() const noexcept { return sigma_; }
    const ContrastBasis& basis() const noexcept { return basis_; }
    std::size_t parts() const noexcept { return basis_.parts(); }
    std::size_t dimension() const noexcept { return basis_.dimension(); }

    /// Lower Cholesky factor L with L L' = Σ.
    const Eigen::MatrixXd& cholesky_factor() const noexcept { return chol_; }
    double log_det_sigma() const noexcept { return log_det_; }

    /// (y − μ)' Σ⁻¹ (y − μ) for a coordinate vector y.
    double mahalanobis2(const Eigen::VectorXd& coords) const;

    /// Log density of the coordinate normal at y.
    double coordinate_log_pdf(const Eigen::VectorXd& coords) const;

private:
    Eigen::VectorXd mu_;
    Eigen::MatrixXd sigma_;
    ContrastBasis basis_;
    Eigen::MatrixXd chol_;
    double log_det_ = 0.0;
};

/// Additive logistic normal law (ilr parametrization), density against Lebesgue measure.
class AlnLaw {
public:
    AlnLaw(Eigen::VectorXd mu, Eigen::MatrixXd sigma, ContrastBasis basis);
    explicit AlnLaw(NormalOnSimplex coordinates) : normal_(std::move(coordinates)) {}

    const Eigen::VectorXd& mu() const noexcept { return normal_.mu(); }
    const Eigen::MatrixXd& sigma() const noexcept { return normal_.sigma(); }
    const ContrastBasis& basis() const noexcept { return normal_.basis(); }
    std::size_t parts() const noexcept { return normal_.parts(); }

    /// The law with identical parameters described against λ_a.
    const NormalOnSimplex& paired() const noexcept { return normal_; }

private:
    NormalOnSimplex normal_;
};

double nsd_pdf(const NormalOnSimplex& law, const Composition& x);
double nsd_log_pdf(const NormalOnSimplex& law, const Composition& x);

/// nsd_pdf(x) · sd_measure_ratio(x).
double aln_pdf(const AlnLaw& law, const Composition& x);
double aln_log_pdf(const AlnLaw& law, const Composition& x);

/// Law of a ⊕ (b ⊙ X): N_S(h(a) + bμ, b²Σ). Throws DegenerateScale for b = 0.
NormalOnSimplex nsd_transform(const NormalOnSimplex& law, const Composition& a, double b);
AlnLaw aln_transform(const AlnLaw& law, const Composition& a, double b);

/// Law of P·X: μ_P = (U'PU)μ, Σ_P = (U'PU)Σ(U'PU)'.
NormalOnSimplex nsd_permute(const NormalOnSimplex& law, const PermutationMap& p);

/// Law of the closed subcomposition C(S·X), expressed in the default basis of C parts.
NormalOnSimplex nsd_subcomposition(const NormalOnSimplex& law, const SelectionMatrix& s);
NormalOnSimplex nsd_subcomposition(const NormalOnSimplex& law, const SelectionMatrix& s,
                                   const ContrastBasis& sub_basis);

/// Same law expressed in another orthonormal basis.
NormalOnSimplex nsd_change_basis(const NormalOnSimplex& law, const ContrastBasis& to);

struct SimplexMoments {
    /// Expected value in the Aitchison geometry, ilr_inv(μ).
    Composition center;
    /// Expected squared Aitchison distance to the center, trace(Σ).
    double metric_variance;
};

SimplexMoments nsd_moments(const NormalOnSimplex& law);

/// Mode of the density against λ_a; coincides with the center.
Composition nsd_mode(const NormalOnSimplex& law);

/**
 * Expected value of the parts in the classical (Lebesgue) sense.
 *
 * Tensorized Gauss–Hermite quadrature after whitening with the Cholesky
 * factor of Σ. The result is recomputed at 1.5× the order; a change above 1e-6
 * in any component raises QuadratureUnstable. Above 4 coordinates the
 * quadrature grid is replaced by 10⁶ seeded Monte-Carlo draws.
 */
Eigen::VectorXd aln_classical_mean(const AlnLaw& law, int quad_order = 40);

/// Nodes and weights for ∫ f(x) e^(−x²) dx.
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

GaussHermiteRule gauss_hermite(int order);

/// Axis-aligned box in coordinate space; bounds may be infinite.
struct CoordinateBox {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

/**
 * P(lower < Y < upper) for Y ~ N(mu, sigma).
 *
 * One dimension uses the normal CDF directly. Higher dimensions use the
 * sequential conditioning transform: the innermost variable is integrated in
 * closed form and the rest by nested adaptive Gauss–Kronrod quadrature (up to
 * four dimensions) or a randomized lattice rule beyond that.
 */
double normal_rectangle_probability(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

/// Probability of the event ilr_inv(box).
double probability_of_box(const NormalOnSimplex& law, const CoordinateBox& box);
double probability_of_box(const AlnLaw& law, const CoordinateBox& box);

} // namespace coda

#endif
