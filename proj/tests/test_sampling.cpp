#include "coda/errors.hpp"
#include "coda/inference.hpp"
#include "coda/laws.hpp"
#include "coda/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace coda;

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace

TEST_CASE("splitmix64 reference values") {
    // first output of the reference generator with state 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("streams are deterministic") {
    SeededStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.normal() == b.normal());
    SeededStream c(42, 8);
    SeededStream d(42, 7);
    CHECK(c.uniform() != d.uniform());
}

TEST_CASE("uniforms stay inside the open interval") {
    SeededStream s(1, 0);
    double lo = 1, hi = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
}

TEST_CASE("distinct streams are uncorrelated") {
    const std::size_t n = 100000;
    std::vector<double> a(n), b(n), c(n);
    SeededStream s0(2024, 0), s1(2024, 1), t0(2025, 0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = s0.normal();
        b[i] = s1.normal();
        c[i] = t0.normal();
    }
    CHECK(std::abs(correlation(a, b)) < 0.01);
    CHECK(std::abs(correlation(a, c)) < 0.01);
}

TEST_CASE("standard normal moments") {
    SeededStream s(5, 0);
    const int n = 200000;
    double m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        m1 += z;
        m2 += z * z;
    }
    m1 /= n;
    m2 /= n;
    CHECK(std::abs(m1) < 3 / std::sqrt(double(n)));
    CHECK(std::abs(m2 - 1) < 3 * std::sqrt(2.0 / n));
}

TEST_CASE("positive samples") {
    SeededStream s(3, 0);
    const auto tight = sample_nrp(NormalOnRPlus(0.5, 1e-14), 100, s);
    for (const auto& x : tight) CHECK(x.value() == doctest::Approx(std::exp(0.5)).epsilon(1e-6));

    SeededStream r(3, 1);
    const std::size_t n = 100000;
    auto draws = sample_nrp(NormalOnRPlus(1, 4), n, r);
    std::vector<double> logs;
    for (const auto& x : draws) logs.push_back(x.log());
    std::nth_element(logs.begin(), logs.begin() + n / 2, logs.end());
    // se of the sample median is σ·sqrt(π/2n) in coordinates
    const double se = 2.0 * std::sqrt(std::numbers::pi / (2.0 * n));
    CHECK(std::abs(logs[n / 2] - 1.0) < 3 * se);

    SeededStream p(9, 0), q(9, 0);
    const auto ln = sample_lognormal(LognormalLaw(1, 4), 50, p);
    const auto nr = sample_nrp(NormalOnRPlus(1, 4), 50, q);
    for (std::size_t i = 0; i < 50; ++i) CHECK(ln[i].value() == nr[i].value());
}

TEST_CASE("metric variance on R+ by simulation") {
    const NormalOnRPlus law(0.7, 2.5);
    SeededStream s(11, 0);
    const auto centre = nrp_moments(law).mean;
    const auto est = mc_expectation([&](const PositiveValue& x) { return std::pow(rp_distance(x, centre), 2); },
                                    law, 100000, s);
    CHECK(std::abs(est.estimate - 2.5) < 3 * est.standard_error);
}

TEST_CASE("simplex samples") {
    const auto basis = default_basis(4);
    SeededStream s(17, 0);
    const NormalOnSimplex tight(Eigen::Vector3d::Zero(), 1e-14 * Eigen::Matrix3d::Identity(), basis);
    for (const auto& x : sample_nsd(tight, 100, s)) CHECK(ait_distance(x, Composition::uniform(4)) < 1e-5);

    Eigen::Matrix3d sigma;
    sigma << 2.0, 0.5, -0.3, 0.5, 1.0, 0.2, -0.3, 0.2, 0.7;
    const NormalOnSimplex law(Eigen::Vector3d(1.0, -2.0, 0.5), sigma, basis);
    SeededStream r(17, 1);
    const std::size_t n = 100000;
    const auto draws = sample_nsd(law, n, r);
    for (const auto& x : draws) {
        CHECK((x.parts().array() > 0).all());
        CHECK(std::abs(x.parts().sum() - 1.0) < 1e-12);
    }
    const auto fit = fit_nsd(SimplexSample(draws, basis));
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(fit.mu()[j] - law.mu()[j]) < 3 * std::sqrt(sigma(j, j) / n));
        CHECK(std::abs(fit.sigma()(j, j) - sigma(j, j)) < 3 * sigma(j, j) * std::sqrt(2.0 / n));
    }
    for (int j = 0; j < 3; ++j) {
        for (int k = j + 1; k < 3; ++k) {
            const double se = std::sqrt((sigma(j, j) * sigma(k, k) + sigma(j, k) * sigma(j, k)) / n);
            CHECK(std::abs(fit.sigma()(j, k) - sigma(j, k)) < 3 * se);
        }
    }

    SeededStream a(5, 5), b(5, 5);
    const auto nsd = sample_nsd(law, 200, a);
    const auto aln = sample_aln(AlnLaw(law), 200, b);
    for (std::size_t i = 0; i < 200; ++i) CHECK((nsd[i].parts().array() == aln[i].parts().array()).all());
}

TEST_CASE("uniform simplex draws") {
    SeededStream s(8, 0);
    const auto draws = sample_uniform_simplex(3, 100000, s, 100.0);
    double first = 0;
    for (const auto& x : draws) {
        CHECK(x.kappa() == 100.0);
        first += x[0];
    }
    first /= 100000.0;
    // Dirichlet(1,1,1): each part has mean κ/3 and variance κ²/18
    CHECK(std::abs(first - 100.0 / 3) < 3 * 100.0 / std::sqrt(18.0 * 100000.0));
}

TEST_CASE("Monte-Carlo expectation") {
    const NormalOnSimplex law(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), default_basis(3));
    SeededStream s(1, 0);
    const auto one = mc_expectation([](const Composition&) { return 1.0; }, law, 1000, s);
    CHECK(one.estimate == 1.0);
    CHECK(one.standard_error == 0.0);

    SeededStream r(1, 1);
    const auto centre = nsd_moments(law).center;
    const auto var = mc_expectation([&](const Composition& x) { return std::pow(ait_distance(x, centre), 2); }, law,
                                    100000, r);
    CHECK(std::abs(var.estimate - 2.0) < 3 * var.standard_error);

    SeededStream q(1, 2);
    const auto first = mc_expectation([](const Composition& x) { return x[0]; }, law, 100000, q);
    CHECK(std::abs(first.estimate - aln_classical_mean(AlnLaw(law))[0]) < 3 * first.standard_error);

    SeededStream t(1, 3);
    try {
        mc_expectation([](const Composition&) { return 1.0; }, law, 99, t);
        FAIL("expected InsufficientData");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientData);
    }
}
