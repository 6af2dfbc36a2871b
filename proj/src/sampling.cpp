#include "coda/sampling.hpp"

#include "coda/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

namespace coda {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(splitmix64(seed ^ splitmix64(stream_id))) {}

double SeededStream::uniform() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double SeededStream::normal() {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform());
}

Eigen::VectorXd SeededStream::normal_vector(Eigen::Index n) {
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal();
    return z;
}

double SeededStream::exponential() { return -std::log(uniform()); }

std::vector<PositiveValue> sample_nrp(const NormalOnRPlus& law, std::size_t n, SeededStream& stream) {
    std::vector<PositiveValue> out;
    out.reserve(n);
    const double sigma = law.sigma();
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(PositiveValue::from_log(law.mu() + sigma * stream.normal()));
    }
    return out;
}

std::vector<PositiveValue> sample_lognormal(const LognormalLaw& law, std::size_t n, SeededStream& stream) {
    return sample_nrp(as_normal_on_rplus(law), n, stream);
}

std::vector<Composition> sample_nsd(const NormalOnSimplex& law, std::size_t n, SeededStream& stream) {
    std::vector<Composition> out;
    out.reserve(n);
    const auto dim = static_cast<Eigen::Index>(law.dimension());
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::VectorXd y = law.mu() + law.cholesky_factor() * stream.normal_vector(dim);
        out.push_back(ilr_inv(y, law.basis()));
    }
    return out;
}

std::vector<Composition> sample_aln(const AlnLaw& law, std::size_t n, SeededStream& stream) {
    return sample_nsd(law.paired(), n, stream);
}

std::vector<Composition> sample_uniform_simplex(std::size_t parts, std::size_t n, SeededStream& stream,
                                                double kappa) {
    if (parts < 2) throw Error(ErrorKind::DimensionMismatch, "simplex needs at least two parts");
    std::vector<Composition> out;
    out.reserve(n);
    Eigen::VectorXd e(static_cast<Eigen::Index>(parts));
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < e.size(); ++j) e[j] = stream.exponential();
        out.push_back(closure(e, kappa));
    }
    return out;
}

namespace {

template <class Draw, class F>
McEstimate accumulate(std::size_t n, Draw&& draw, F&& f) {
    if (n < 100) throw Error(ErrorKind::InsufficientData, "Monte-Carlo expectation needs n >= 100");
    // Welford update keeps the variance accurate for large n.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f(draw());
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double var = m2 / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

} // namespace

McEstimate mc_expectation(const std::function<double(const Composition&)>& f,
                          const NormalOnSimplex& law, std::size_t n, SeededStream& stream) {
    const auto dim = static_cast<Eigen::Index>(law.dimension());
    return accumulate(
        n,
        [&] {
            const Eigen::VectorXd y = law.mu() + law.cholesky_factor() * stream.normal_vector(dim);
            return ilr_inv(y, law.basis());
        },
        f);
}

McEstimate mc_expectation(const std::function<double(const PositiveValue&)>& f,
                          const NormalOnRPlus& law, std::size_t n, SeededStream& stream) {
    const double sigma = law.sigma();
    return accumulate(
        n, [&] { return PositiveValue::from_log(law.mu() + sigma * stream.normal()); }, f);
}

} // namespace coda
