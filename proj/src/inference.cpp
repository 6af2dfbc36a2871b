#include "coda/inference.hpp"

#include "coda/errors.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coda {

RPlusSample::RPlusSample(std::vector<PositiveValue> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorKind::EmptyData, "sample on R+ is empty");
    logs_.resize(static_cast<Eigen::Index>(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) logs_[static_cast<Eigen::Index>(i)] = values_[i].log();
}

double RPlusSample::log_mean() const { return logs_.mean(); }

double RPlusSample::log_sd() const {
    if (size() < 2) throw Error(ErrorKind::InsufficientData, "standard deviation needs n >= 2");
    const double mean = log_mean();
    return std::sqrt((logs_.array() - mean).square().sum() / static_cast<double>(size() - 1));
}

SimplexSample::SimplexSample(std::vector<Composition> compositions, ContrastBasis basis)
    : compositions_(std::move(compositions)), basis_(std::move(basis)) {
    if (compositions_.empty()) throw Error(ErrorKind::EmptyData, "simplex sample is empty");
    const auto& first = compositions_.front();
    coords_.resize(static_cast<Eigen::Index>(compositions_.size()),
                   static_cast<Eigen::Index>(basis_.dimension()));
    for (std::size_t i = 0; i < compositions_.size(); ++i) {
        const auto& x = compositions_[i];
        if (x.size() != first.size() || x.kappa() != first.kappa()) {
            throw Error(ErrorKind::DimensionMismatch,
                        "composition " + std::to_string(i + 1) + " differs in parts or closure");
        }
        coords_.row(static_cast<Eigen::Index>(i)) = ilr(x, basis_).transpose();
    }
}

SimplexSample SimplexSample::with_basis(ContrastBasis basis) const {
    return SimplexSample(compositions_, std::move(basis));
}

PositiveValue RPlusEstimate::fitted_mean() const { return PositiveValue::from_log(mu); }

NormalOnRPlus RPlusEstimate::law() const {
    if (!(sigma2 > 0.0)) throw Error(ErrorKind::DegenerateVariance, "sample log-variance is zero");
    return {mu, sigma2};
}

RPlusEstimate fit_nrp(const RPlusSample& sample) {
    if (sample.size() < 2) throw Error(ErrorKind::InsufficientData, "fitting needs n >= 2");
    const double v = sample.log_sd();
    return {sample.log_mean(), v * v, sample.size()};
}

std::pair<PositiveValue, PositiveValue> ci_mean_nrp(const RPlusSample& sample, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
    if (sample.size() < 2) throw Error(ErrorKind::InsufficientData, "interval needs n >= 2");
    const double v = sample.log_sd();
    if (!(v > 0.0)) throw Error(ErrorKind::DegenerateVariance, "sample log-variance is zero");
    const double n = static_cast<double>(sample.size());
    const boost::math::students_t t_dist(n - 1.0);
    const double t = boost::math::quantile(boost::math::complement(t_dist, alpha / 2.0));
    const double half = t * v / std::sqrt(n);
    const double ybar = sample.log_mean();
    return {PositiveValue::from_log(ybar - half), PositiveValue::from_log(ybar + half)};
}

double naive_lognormal_mean(const RPlusSample& sample) {
    if (sample.size() < 2) throw Error(ErrorKind::InsufficientData, "estimate needs n >= 2");
    const double v = sample.log_sd();
    return std::exp(sample.log_mean() + 0.5 * v * v);
}

NormalOnSimplex fit_nsd(const SimplexSample& sample) {
    const Eigen::MatrixXd& y = sample.coordinates();
    if (y.rows() < 2) throw Error(ErrorKind::InsufficientData, "fitting needs n >= 2");
    const Eigen::VectorXd mu = y.colwise().mean().transpose();
    const Eigen::MatrixXd centred = y.rowwise() - mu.transpose();
    const Eigen::MatrixXd sigma = centred.transpose() * centred / static_cast<double>(y.rows() - 1);

    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    const double scale = std::max(sigma.diagonal().maxCoeff(), 0.0);
    bool singular = llt.info() != Eigen::Success || !(scale > 0.0);
    if (!singular) {
        const Eigen::MatrixXd l = llt.matrixL();
        // Pivots far below the largest variance mean rank deficiency in floating point.
        singular = l.diagonal().array().square().minCoeff() <= 1e-12 * scale;
    }
    if (singular) throw Error(ErrorKind::SingularCovariance, "coordinate covariance is singular");
    try {
        return {mu, sigma, sample.basis()};
    } catch (const Error& e) {
        throw Error(ErrorKind::SingularCovariance, e.what());
    }
}

std::size_t GofReport::rejections() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const GofEntry& e) { return !e.passed_at_1pct; }));
}

std::size_t GofReport::rejections(const std::string& layer) const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const GofEntry& e) {
        return e.layer == layer && !e.passed_at_1pct;
    }));
}

namespace {

constexpr edf::Statistic kStatistics[] = {
    edf::Statistic::AndersonDarling,
    edf::Statistic::CramerVonMises,
    edf::Statistic::Watson,
};

void run_layer(GofReport& report, const std::string& layer, const std::string& component,
               const std::vector<double>& u, edf::Null null) {
    for (const auto s : kStatistics) {
        const double stat = edf::modified(s, null, edf::raw_statistic(s, u), u.size());
        const double crit = edf::critical_value_1pct(s, null);
        report.entries.push_back({layer, component, s, stat, crit, stat <= crit});
    }
}

std::string label(Eigen::Index i) { return "y" + std::to_string(i + 1); }

} // namespace

GofReport gof_battery(const SimplexSample& sample, const NormalOnSimplex& fitted) {
    if (sample.size() < 8) throw Error(ErrorKind::InsufficientData, "goodness-of-fit needs n >= 8");
    if (fitted.parts() != sample.parts()) {
        throw Error(ErrorKind::DimensionMismatch, "fitted law and sample differ in parts");
    }
    const NormalOnSimplex law = nsd_change_basis(fitted, sample.basis());
    const Eigen::MatrixXd& y = sample.coordinates();
    const auto n = static_cast<std::size_t>(y.rows());
    const Eigen::Index dim = y.cols();

    GofReport report{{}, n};
    std::vector<double> u(n);

    for (Eigen::Index j = 0; j < dim; ++j) {
        const double sd = std::sqrt(law.sigma()(j, j));
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (y(static_cast<Eigen::Index>(i), j) - law.mu()[j]) / sd;
            u[i] = 0.5 * std::erfc(-z / std::numbers::sqrt2);
        }
        run_layer(report, "marginal", label(j), u, edf::Null::NormalEstimated);
    }

    const Eigen::MatrixXd centred = y.rowwise() - law.mu().transpose();
    const Eigen::MatrixXd white =
        law.cholesky_factor().triangularView<Eigen::Lower>().solve(centred.transpose()).transpose();
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = a + 1; b < dim; ++b) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto r = static_cast<Eigen::Index>(i);
                double theta = std::atan2(white(r, b), white(r, a));
                if (theta <= 0.0) theta += 2.0 * std::numbers::pi;
                u[i] = theta / (2.0 * std::numbers::pi);
            }
            run_layer(report, "angle", label(a) + "," + label(b), u, edf::Null::FullySpecified);
        }
    }

    const double half_df = 0.5 * static_cast<double>(dim);
    for (std::size_t i = 0; i < n; ++i) {
        const double r2 = white.row(static_cast<Eigen::Index>(i)).squaredNorm();
        u[i] = boost::math::gamma_p(half_df, 0.5 * r2);
    }
    run_layer(report, "radius", "r", u, edf::Null::FullySpecified);
    return report;
}

} // namespace coda
