#include "coda/errors.hpp"
#include "coda/laws.hpp"
#include "coda/sampling.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coda {

namespace {

double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double phi_inv(double p) {
    p = std::clamp(p, 1e-300, 1.0 - 1e-16);
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

// Sequential conditioning: Y = μ + L Z with Z standard normal, so the bounds of
// Z_i depend only on Z_1..Z_{i-1}. Level i returns the probability mass of the
// remaining coordinates given the prefix already fixed in `z`.
class Conditioner {
public:
    Conditioner(const Eigen::MatrixXd& chol, Eigen::VectorXd lower, Eigen::VectorXd upper)
        : chol_(chol), lower_(std::move(lower)), upper_(std::move(upper)), z_(lower_.size()) {}

    std::pair<double, double> limits(Eigen::Index i) const {
        const double shift = chol_.row(i).head(i).dot(z_.head(i));
        const double diag = chol_(i, i);
        return {phi((lower_[i] - shift) / diag), phi((upper_[i] - shift) / diag)};
    }

    double nested(Eigen::Index i) {
        const auto [d, e] = limits(i);
        const double width = e - d;
        if (i + 1 == z_.size() || width <= 0.0) return std::max(width, 0.0);
        auto inner = [&, d = d, width = width](double w) {
            z_[i] = phi_inv(d + w * width);
            return nested(i + 1);
        };
        const double integral =
            boost::math::quadrature::gauss_kronrod<double, 15>::integrate(inner, 0.0, 1.0, 12, 1e-11);
        return width * integral;
    }

    // One point of the unit cube [0,1)^(m-1) mapped through the conditioning chain.
    double chain(const Eigen::VectorXd& w) {
        double value = 1.0;
        for (Eigen::Index i = 0; i < z_.size(); ++i) {
            const auto [d, e] = limits(i);
            const double width = e - d;
            if (width <= 0.0) return 0.0;
            value *= width;
            if (i + 1 < z_.size()) z_[i] = phi_inv(d + w[i] * width);
        }
        return value;
    }

private:
    const Eigen::MatrixXd& chol_;
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
    Eigen::VectorXd z_;
};

// Randomly shifted rank-1 lattice with Richtmyer (square-root-of-prime) generators.
double lattice_estimate(Conditioner& cond, Eigen::Index dim) {
    static constexpr double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    const Eigen::Index free = dim - 1;
    if (free > static_cast<Eigen::Index>(std::size(primes))) {
        throw Error(ErrorKind::InvalidArgument, "rectangle probability limited to 17 dimensions");
    }
    SeededStream stream(0x0b0c'5eedULL, static_cast<std::uint64_t>(dim));
    constexpr int shifts = 16;
    constexpr int points = 1 << 13;
    double total = 0.0;
    Eigen::VectorXd w(free);
    for (int s = 0; s < shifts; ++s) {
        Eigen::VectorXd shift(free);
        for (Eigen::Index j = 0; j < free; ++j) shift[j] = stream.uniform();
        double sum = 0.0;
        for (int k = 1; k <= points; ++k) {
            for (Eigen::Index j = 0; j < free; ++j) {
                const double x = k * std::sqrt(primes[j]) + shift[j];
                // Baker's tent transform for a smoother periodization.
                const double frac = x - std::floor(x);
                w[j] = 1.0 - std::abs(2.0 * frac - 1.0);
            }
            sum += cond.chain(w);
        }
        total += sum / points;
    }
    return total / shifts;
}

} // namespace

double normal_rectangle_probability(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    const Eigen::Index m = mu.size();
    if (m < 1 || sigma.rows() != m || sigma.cols() != m || lower.size() != m || upper.size() != m) {
        throw Error(ErrorKind::DimensionMismatch, "rectangle probability dimensions disagree");
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        if (std::isnan(lower[i]) || std::isnan(upper[i])) {
            throw Error(ErrorKind::InvalidArgument, "box bounds must not be NaN");
        }
        if (!(upper[i] > lower[i])) return 0.0;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotSPD, "covariance is not SPD");
    const Eigen::MatrixXd chol = llt.matrixL();

    Conditioner cond(chol, lower - mu, upper - mu);
    if (m <= 4) {
        return std::clamp(cond.nested(0), 0.0, 1.0);
    }
    return std::clamp(lattice_estimate(cond, m), 0.0, 1.0);
}

} // namespace coda
