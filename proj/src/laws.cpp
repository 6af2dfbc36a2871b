#include "coda/laws.hpp"

#include "coda/errors.hpp"
#include "coda/sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace coda {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

void require_scale_parameters(double mu, double sigma2) {
    if (!std::isfinite(mu)) throw Error(ErrorKind::InvalidArgument, "mu must be finite");
    if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
        throw Error(ErrorKind::InvalidArgument, "sigma2 must be finite and positive");
    }
}

// Φ(z) and 1 − Φ(z) without cancellation.
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_interval(double za, double zb) {
    if (za > 0.0) return normal_cdf(-za) - normal_cdf(-zb);
    return normal_cdf(zb) - normal_cdf(za);
}

void require_interval(double a, double b) {
    if (!(a > 0.0) || !(b > a)) {
        throw Error(ErrorKind::BadInterval, "need 0 < a < b, got (" + std::to_string(a) + ", " +
                                                std::to_string(b) + ")");
    }
}

double log_interval_probability(double mu, double sigma, double a, double b) {
    require_interval(a, b);
    return normal_interval((std::log(a) - mu) / sigma, (std::log(b) - mu) / sigma);
}

void require_parts(const NormalOnSimplex& law, const Composition& x) {
    if (x.size() != law.parts()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "law on " + std::to_string(law.parts()) + " parts evaluated at " +
                        std::to_string(x.size()) + " parts");
    }
}

} // namespace

NormalOnRPlus::NormalOnRPlus(double mu, double sigma2) : mu_(mu), sigma2_(sigma2) {
    require_scale_parameters(mu, sigma2);
}

double NormalOnRPlus::sigma() const noexcept { return std::sqrt(sigma2_); }

LognormalLaw::LognormalLaw(double mu, double sigma2) : mu_(mu), sigma2_(sigma2) {
    require_scale_parameters(mu, sigma2);
}

double LognormalLaw::sigma() const noexcept { return std::sqrt(sigma2_); }

LognormalLaw as_lognormal(const NormalOnRPlus& law) { return {law.mu(), law.sigma2()}; }

NormalOnRPlus as_normal_on_rplus(const LognormalLaw& law) { return {law.mu(), law.sigma2()}; }

NormalOnRPlus nrp_transform(const NormalOnRPlus& law, const PositiveValue& a, double b) {
    if (b == 0.0) throw Error(ErrorKind::DegenerateScale, "b = 0 collapses the law to a point");
    return {rp_coord(a) + b * law.mu(), b * b * law.sigma2()};
}

double nrp_log_pdf(const NormalOnRPlus& law, const PositiveValue& x) {
    const double z = rp_coord(x) - law.mu();
    return -0.5 * (kLogTwoPi + std::log(law.sigma2())) - z * z / (2.0 * law.sigma2());
}

double nrp_pdf(const NormalOnRPlus& law, const PositiveValue& x) { return std::exp(nrp_log_pdf(law, x)); }

double nrp_cdf(const NormalOnRPlus& law, const PositiveValue& x) {
    return normal_cdf((rp_coord(x) - law.mu()) / law.sigma());
}

double lognormal_pdf(const LognormalLaw& law, double x) {
    if (!(x > 0.0)) return 0.0;
    if (!std::isfinite(x)) return 0.0;
    const double z = std::log(x) - law.mu();
    return std::exp(-0.5 * (kLogTwoPi + std::log(law.sigma2())) - z * z / (2.0 * law.sigma2())) / x;
}

double lognormal_cdf(const LognormalLaw& law, double x) {
    if (!(x > 0.0)) return 0.0;
    return normal_cdf((std::log(x) - law.mu()) / law.sigma());
}

RPlusMoments nrp_moments(const NormalOnRPlus& law) {
    const auto center = PositiveValue::from_log(law.mu());
    return {center, center, center, law.sigma2()};
}

double LognormalMoments::sd() const { return std::sqrt(variance); }

LognormalMoments lognormal_moments(const LognormalLaw& law) {
    const double mu = law.mu();
    const double s2 = law.sigma2();
    return {
        std::exp(mu + 0.5 * s2),
        std::exp(mu),
        std::exp(mu - s2),
        std::expm1(s2) * std::exp(2.0 * mu + s2),
    };
}

NaiveInterval lognormal_naive_interval(const LognormalLaw& law, double k) {
    if (!(k > 0.0)) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    const auto m = lognormal_moments(law);
    const double lower = m.mean - k * m.sd();
    return {lower, m.mean + k * m.sd(), lower > 0.0};
}

std::pair<PositiveValue, PositiveValue> nrp_interval(const NormalOnRPlus& law, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    const double half = k * law.sigma();
    return {PositiveValue::from_log(law.mu() - half), PositiveValue::from_log(law.mu() + half)};
}

double probability_of_interval(const NormalOnRPlus& law, double a, double b) {
    return log_interval_probability(law.mu(), law.sigma(), a, b);
}

double probability_of_interval(const LognormalLaw& law, double a, double b) {
    return log_interval_probability(law.mu(), law.sigma(), a, b);
}

NormalOnSimplex::NormalOnSimplex(Eigen::VectorXd mu, Eigen::MatrixXd sigma, ContrastBasis basis)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), basis_(std::move(basis)) {
    const auto dim = static_cast<Eigen::Index>(basis_.dimension());
    if (mu_.size() != dim || sigma_.rows() != dim || sigma_.cols() != dim) {
        throw Error(ErrorKind::DimensionMismatch,
                    "parameters do not match a basis of dimension " + std::to_string(dim));
    }
    if (!mu_.allFinite()) throw Error(ErrorKind::InvalidArgument, "mu must be finite");
    if (!sigma_.allFinite()) throw Error(ErrorKind::NotSPD, "sigma has non-finite entries");
    const double scale = sigma_.cwiseAbs().maxCoeff();
    if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
        throw Error(ErrorKind::NotSPD, "sigma is not symmetric");
    }
    sigma_ = 0.5 * (sigma_ + sigma_.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::NotSPD, "Cholesky factorization of sigma failed");
    }
    chol_ = llt.matrixL();
    const Eigen::VectorXd diag = chol_.diagonal();
    if (diag.minCoeff() <= 0.0) throw Error(ErrorKind::NotSPD, "sigma is singular");
    log_det_ = 2.0 * diag.array().log().sum();
}

double NormalOnSimplex::mahalanobis2(const Eigen::VectorXd& coords) const {
    const Eigen::VectorXd w = chol_.triangularView<Eigen::Lower>().solve(coords - mu_);
    return w.squaredNorm();
}

double NormalOnSimplex::coordinate_log_pdf(const Eigen::VectorXd& coords) const {
    const double m = static_cast<double>(dimension());
    return -0.5 * (m * kLogTwoPi + log_det_ + mahalanobis2(coords));
}

AlnLaw::AlnLaw(Eigen::VectorXd mu, Eigen::MatrixXd sigma, ContrastBasis basis)
    : normal_(std::move(mu), std::move(sigma), std::move(basis)) {}

double nsd_log_pdf(const NormalOnSimplex& law, const Composition& x) {
    require_parts(law, x);
    return law.coordinate_log_pdf(ilr(x, law.basis()));
}

double nsd_pdf(const NormalOnSimplex& law, const Composition& x) { return std::exp(nsd_log_pdf(law, x)); }

double aln_log_pdf(const AlnLaw& law, const Composition& x) {
    return nsd_log_pdf(law.paired(), x) + std::log(sd_measure_ratio(x));
}

double aln_pdf(const AlnLaw& law, const Composition& x) { return std::exp(aln_log_pdf(law, x)); }

NormalOnSimplex nsd_transform(const NormalOnSimplex& law, const Composition& a, double b) {
    require_parts(law, a);
    if (b == 0.0) throw Error(ErrorKind::DegenerateScale, "b = 0 gives a singular covariance");
    if (!std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "b must be finite");
    return {ilr(a, law.basis()) + b * law.mu(), b * b * law.sigma(), law.basis()};
}

AlnLaw aln_transform(const AlnLaw& law, const Composition& a, double b) {
    return AlnLaw(nsd_transform(law.paired(), a, b));
}

namespace {

NormalOnSimplex linear_image(const NormalOnSimplex& law, const Eigen::MatrixXd& m, ContrastBasis basis) {
    Eigen::MatrixXd sigma = m * law.sigma() * m.transpose();
    return {m * law.mu(), std::move(sigma), std::move(basis)};
}

} // namespace

NormalOnSimplex nsd_permute(const NormalOnSimplex& law, const PermutationMap& p) {
    return linear_image(law, permutation_coordinate_map(p, law.basis()), law.basis());
}

NormalOnSimplex nsd_subcomposition(const NormalOnSimplex& law, const SelectionMatrix& s) {
    return nsd_subcomposition(law, s, default_basis(s.selected()));
}

NormalOnSimplex nsd_subcomposition(const NormalOnSimplex& law, const SelectionMatrix& s,
                                   const ContrastBasis& sub_basis) {
    if (s.parts() != law.parts()) {
        throw Error(ErrorKind::InvalidSelection, "selection built for a different number of parts");
    }
    return linear_image(law, subcomposition_coordinate_map(s, law.basis(), sub_basis), sub_basis);
}

NormalOnSimplex nsd_change_basis(const NormalOnSimplex& law, const ContrastBasis& to) {
    return linear_image(law, basis_change(law.basis(), to), to);
}

SimplexMoments nsd_moments(const NormalOnSimplex& law) {
    return {ilr_inv(law.mu(), law.basis()), law.sigma().trace()};
}

Composition nsd_mode(const NormalOnSimplex& law) { return ilr_inv(law.mu(), law.basis()); }

GaussHermiteRule gauss_hermite(int order) {
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Hermite order must be >= 1");
    // Golub–Welsch: eigen-decomposition of the Jacobi matrix of the Hermite recurrence.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double off = std::sqrt(k / 2.0);
        jacobi(k, k - 1) = off;
        jacobi(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    GaussHermiteRule rule{eig.eigenvalues(), Eigen::VectorXd(order)};
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (int k = 0; k < order; ++k) {
        const double v0 = eig.eigenvectors()(0, k);
        rule.weights[k] = sqrt_pi * v0 * v0;
    }
    return rule;
}

namespace {

Eigen::VectorXd gauss_hermite_mean(const NormalOnSimplex& law, double kappa, int order) {
    const GaussHermiteRule rule = gauss_hermite(order);
    const auto dim = static_cast<Eigen::Index>(law.dimension());
    const auto parts = static_cast<Eigen::Index>(law.parts());
    const Eigen::MatrixXd scaled_chol = std::numbers::sqrt2 * law.cholesky_factor();
    const double norm = std::pow(std::numbers::pi, -0.5 * static_cast<double>(dim));
    const double max_weight = rule.weights.maxCoeff();
    const double prune = 1e-300;

    Eigen::VectorXd total = Eigen::VectorXd::Zero(parts);
    std::vector<int> index(static_cast<std::size_t>(dim), 0);
    Eigen::VectorXd t(dim);
    while (true) {
        double w = norm;
        for (Eigen::Index d = 0; d < dim; ++d) {
            const int k = index[static_cast<std::size_t>(d)];
            t[d] = rule.nodes[k];
            w *= rule.weights[k];
        }
        if (w > prune * max_weight) {
            const Eigen::VectorXd v = law.mu() + scaled_chol * t;
            total += w * ilr_inv(v, law.basis(), kappa).parts();
        }
        Eigen::Index d = 0;
        for (; d < dim; ++d) {
            auto& k = index[static_cast<std::size_t>(d)];
            if (++k < order) break;
            k = 0;
        }
        if (d == dim) break;
    }
    return total;
}

} // namespace

Eigen::VectorXd aln_classical_mean(const AlnLaw& law, int quad_order) {
    if (quad_order < 2) throw Error(ErrorKind::InvalidArgument, "quadrature order must be >= 2");
    const NormalOnSimplex& normal = law.paired();
    constexpr double kappa = 1.0;
    if (normal.dimension() > 4) {
        SeededStream stream(0x5eed'a1c0'ffee'0001ULL, 0);
        const auto draws = sample_nsd(normal, 1'000'000, stream);
        Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(normal.parts()));
        for (const auto& x : draws) total += x.parts();
        return total / static_cast<double>(draws.size());
    }
    const Eigen::VectorXd base = gauss_hermite_mean(normal, kappa, quad_order);
    const int check_order = (3 * quad_order + 1) / 2;
    const Eigen::VectorXd refined = gauss_hermite_mean(normal, kappa, check_order);
    const double change = (refined - base).cwiseAbs().maxCoeff();
    if (!(change <= 1e-6)) {
        throw Error(ErrorKind::QuadratureUnstable,
                    "order " + std::to_string(quad_order) + " vs " + std::to_string(check_order) +
                        " differ by " + std::to_string(change));
    }
    return base;
}

double probability_of_box(const NormalOnSimplex& law, const CoordinateBox& box) {
    return normal_rectangle_probability(law.mu(), law.sigma(), box.lower, box.upper);
}

double probability_of_box(const AlnLaw& law, const CoordinateBox& box) {
    return probability_of_box(law.paired(), box);
}

} // namespace coda
