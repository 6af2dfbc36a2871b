// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "coda/errors.hpp"
#include "coda/inference.hpp"
#include "coda/io.hpp"
#include "coda/laws.hpp"
#include "coda/modality.hpp"
#include "coda/sampling.hpp"
#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace coda;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "failed: ";
            else detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double max_seconds, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (max_seconds > 0) {
        std::ostringstream t;
        t << "runtime " << secs << " s exceeds " << max_seconds << " s";
        out.require(secs < max_seconds, t.str());
    }
    if (!out.pass) ++failures;
    std::printf("[%s] %2d %s (%.2f s)%s%s\n", out.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
                out.detail.str().empty() ? "" : " | ", out.detail.str().c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(8);
    s << v;
    return s.str();
}

bool near(double got, double want, double tol) { return std::abs(got - want) <= tol; }

std::vector<Composition> skye() {
    io::ReadOptions opt;
    opt.kind = io::SpaceKind::Simplex;
    opt.kappa = 100;
    const auto data = io::read_dataset(std::filesystem::path(CODA_DATA_DIR) / "skye_afm.csv", opt);
    return io::to_simplex_sample(data, default_basis(3)).compositions();
}

Eigen::VectorXd ilr_mean(const std::vector<Composition>& xs, const ContrastBasis& b) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dimension()));
    for (const auto& x : xs) m += ilr(x, b);
    return m / static_cast<double>(xs.size());
}

// Mean and covariance of the fitted law of `draws` against a predicted law, at 3 se.
void check_against(Outcome& out, const std::string& tag, const std::vector<Composition>& draws,
                   const NormalOnSimplex& predicted) {
    const auto fit = fit_nsd(SimplexSample(draws, predicted.basis()));
    const double n = static_cast<double>(draws.size());
    for (Eigen::Index j = 0; j < predicted.mu().size(); ++j) {
        const double s2 = predicted.sigma()(j, j);
        const double se_mu = std::sqrt(s2 / n);
        out.require(std::abs(fit.mu()[j] - predicted.mu()[j]) < 3 * se_mu,
                    tag + " mean[" + std::to_string(j) + "] " + fmt(fit.mu()[j]) + " vs " + fmt(predicted.mu()[j]));
        for (Eigen::Index k = j; k < predicted.mu().size(); ++k) {
            const double sjk = predicted.sigma()(j, k);
            const double se = std::sqrt((s2 * predicted.sigma()(k, k) + sjk * sjk) / n);
            out.require(std::abs(fit.sigma()(j, k) - sjk) < 3 * se, tag + " cov(" + std::to_string(j) + "," +
                                                                        std::to_string(k) + ") " +
                                                                        fmt(fit.sigma()(j, k)) + " vs " + fmt(sjk));
        }
    }
}

void mc_within(Outcome& out, const std::string& tag, const McEstimate& est, double expected) {
    out.require(std::abs(est.estimate - expected) < 3 * est.standard_error,
                tag + " " + fmt(est.estimate) + " vs " + fmt(expected) + " (se " + fmt(est.standard_error) + ")");
}

} // namespace

int main() {
    criterion(1, "Skye lavas golden fit", 1.0, [](Outcome& out) {
        const SimplexSample sample(skye(), default_basis(3));
        out.require(sample.size() == 23, "expected 23 rows");
        const auto fit = fit_nsd(sample);
        out.require(near(fit.mu()[0], 0.555, 0.002), "mu1 " + fmt(fit.mu()[0]));
        out.require(near(fit.mu()[1], 0.639, 0.002), "mu2 " + fmt(fit.mu()[1]));
        out.require(near(fit.sigma()(0, 0), 0.126, 0.002), "s11 " + fmt(fit.sigma()(0, 0)));
        out.require(near(fit.sigma()(0, 1), -0.229, 0.002), "s12 " + fmt(fit.sigma()(0, 1)));
        out.require(near(fit.sigma()(1, 0), -0.229, 0.002), "s21 " + fmt(fit.sigma()(1, 0)));
        out.require(near(fit.sigma()(1, 1), 0.456, 0.002), "s22 " + fmt(fit.sigma()(1, 1)));
    });

    criterion(2, "Skye lavas transformed fit", 0, [](Outcome& out) {
        const auto data = skye();
        const auto basis = default_basis(3);
        const auto fit = fit_nsd(SimplexSample(data, basis));
        const double b = std::sqrt(3.0);
        std::vector<Composition> powered;
        for (const auto& x : data) powered.push_back(power(b, x));
        const auto a = power(-1, center_of(powered));
        std::vector<Composition> moved;
        for (const auto& x : powered) moved.push_back(perturb(a, x));
        const auto tf = fit_nsd(SimplexSample(moved, basis));
        out.require(near(tf.mu()[0], 0.0, 0.002) && near(tf.mu()[1], 0.0, 0.002),
                    "mu " + fmt(tf.mu()[0]) + "," + fmt(tf.mu()[1]));
        out.require(near(tf.sigma()(0, 0), 0.377, 0.003), "s11 " + fmt(tf.sigma()(0, 0)));
        out.require(near(tf.sigma()(0, 1), -0.688, 0.003), "s12 " + fmt(tf.sigma()(0, 1)));
        out.require(near(tf.sigma()(1, 1), 1.369, 0.003), "s22 " + fmt(tf.sigma()(1, 1)));
        out.require((tf.sigma() - 3.0 * fit.sigma()).cwiseAbs().maxCoeff() <= 0.003, "transformed != 3x original");
    });

    criterion(3, "Lognormal naive interval", 0, [](Outcome& out) {
        const auto iv = lognormal_naive_interval(LognormalLaw(0, 1), 1.0);
        out.require(near(iv.lower, -0.512, 0.001), "lower " + fmt(iv.lower));
        out.require(near(iv.upper, 3.810, 0.001), "upper " + fmt(iv.upper));
        out.require(!iv.within_support, "lower endpoint not flagged outside R+");
    });

    criterion(4, "Same-law equivalence on R+", 0, [](Outcome& out) {
        std::mt19937_64 rng(4004);
        std::uniform_real_distribution<double> mu_d(-2, 2), ls_d(std::log(0.05), std::log(4.0)), z_d(-3, 3);
        double worst_cdf = 0, worst_quad = 0;
        for (int rep = 0; rep < 100; ++rep) {
            const NormalOnRPlus law(mu_d(rng), std::exp(ls_d(rng)));
            double za = z_d(rng), zb = z_d(rng);
            if (za > zb) std::swap(za, zb);
            if (zb - za < 0.05) zb = za + 0.05;
            const double a = std::exp(law.mu() + za * law.sigma());
            const double b = std::exp(law.mu() + zb * law.sigma());
            const double p_nrp = probability_of_interval(law, a, b);
            const LognormalLaw ln = as_lognormal(law);
            worst_cdf = std::max(worst_cdf, std::abs(probability_of_interval(ln, a, b) - p_nrp));
            double err = 0;
            const double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double x) { return lognormal_pdf(ln, x); }, a, b, 15, 1e-12, &err);
            worst_quad = std::max(worst_quad, std::abs(quad - p_nrp));
        }
        out.require(worst_cdf < 1e-12, "CDF identity gap " + fmt(worst_cdf));
        out.require(worst_quad < 1e-8, "quadrature gap " + fmt(worst_quad));
        if (out.pass) out.detail << "CDF gap " << worst_cdf << ", quadrature gap " << worst_quad;
    });

    criterion(5, "Same-law equivalence on the simplex", 60.0, [](Outcome& out) {
        std::mt19937_64 rng(5005);
        std::uniform_real_distribution<double> mu_d(-1, 1), lo_d(-1.5, 0.5), w_d(0.5, 2.5);
        const auto basis = default_basis(3);
        const std::size_t n = 1'000'000;
        // Lebesgue area of the simplex in the (x1, x2) chart
        const double area = 0.5;
        for (int rep = 0; rep < 20; ++rep) {
            const Eigen::Vector2d mu(mu_d(rng), mu_d(rng));
            const AlnLaw law(mu, oracle::random_spd(rng, 2, 0.2, 1.5), basis);
            Eigen::Vector2d lo, hi;
            for (int j = 0; j < 2; ++j) {
                const double sd = std::sqrt(law.sigma()(j, j));
                lo[j] = mu[j] + lo_d(rng) * sd;
                hi[j] = lo[j] + w_d(rng) * sd;
            }
            const double exact = probability_of_box(law.paired(), CoordinateBox{lo, hi});

            SeededStream stream(5005, static_cast<std::uint64_t>(rep));
            double sum = 0, sum2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e1 = stream.exponential(), e2 = stream.exponential(), e3 = stream.exponential();
                const Composition x = closure(Eigen::VectorXd(Eigen::Vector3d(e1, e2, e3)));
                const Eigen::Vector2d y = oracle::balance_coordinates(x.parts());
                double f = 0;
                if ((y.array() > lo.array()).all() && (y.array() < hi.array()).all()) f = aln_pdf(law, x) * area;
                sum += f;
                sum2 += f * f;
            }
            const double mean = sum / n;
            const double se = std::sqrt((sum2 / n - mean * mean) / n);
            out.require(std::abs(mean - exact) < 3 * se, "rep " + std::to_string(rep) + ": MC " + fmt(mean) +
                                                             " vs " + fmt(exact) + " (se " + fmt(se) + ")");
        }
    });

    criterion(6, "Trimodality and unimodality on the ternary grid", 10.0, [](Outcome& out) {
        const TernaryGrid grid(400, 1e-4);
        const NormalOnSimplex standard(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), default_basis(3));
        const auto aln = find_local_maxima(aln_density_grid(AlnLaw(standard), grid)).size();
        const auto nsd = find_local_maxima(nsd_density_grid(standard, grid)).size();
        out.require(aln == 3, "aln(0,I) maxima " + std::to_string(aln));
        out.require(nsd == 1, "nsd(0,I) maxima " + std::to_string(nsd));
    });

    criterion(7, "Law properties: transport, invariance, moments", 0, [](Outcome& out) {
        const std::size_t n = 100000;
        std::mt19937_64 rng(7007);

        // positive reals
        const NormalOnRPlus law(0.8, 1.7);
        const PositiveValue a(2.5);
        const double b = -0.6;
        const auto moved = nrp_transform(law, a, b);
        out.require(moved.mu() == std::log(2.5) + b * 0.8 && moved.sigma2() == b * b * 1.7, "affine transport closed form");
        SeededStream s1(7007, 1);
        std::vector<PositiveValue> tx;
        for (const auto& x : sample_nrp(law, n, s1)) tx.push_back(rp_add(a, rp_scale(b, x)));
        const auto f1 = fit_nrp(RPlusSample(tx));
        out.require(std::abs(f1.mu - moved.mu()) < 3 * std::sqrt(moved.sigma2() / n), "affine transport MC mean");
        out.require(std::abs(f1.sigma2 - moved.sigma2()) < 3 * moved.sigma2() * std::sqrt(2.0 / n), "affine transport MC var");

        double p2 = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            const auto shift = PositiveValue::from_log(std::uniform_real_distribution<double>(-4, 4)(rng));
            const auto x = PositiveValue::from_log(std::uniform_real_distribution<double>(-4, 4)(rng));
            p2 = std::max(p2, std::abs(nrp_pdf(nrp_transform(law, shift, 1.0), rp_add(shift, x)) - nrp_pdf(law, x)));
        }
        out.require(p2 < 1e-12, "R+ shift invariance gap " + fmt(p2));

        const auto m = nrp_moments(law);
        out.require(m.mean.value() == std::exp(0.8) && m.median.value() == std::exp(0.8) &&
                        m.mode.value() == std::exp(0.8),
                    "R+ centre closed form");
        out.require(m.metric_variance == 1.7, "R+ metric variance closed form");
        SeededStream s3(7007, 3), s4(7007, 4);
        mc_within(out, "R+ centre MC log-mean", mc_expectation([](const PositiveValue& x) { return x.log(); }, law, n, s3),
                  0.8);
        mc_within(out, "R+ metric variance MC",
                  mc_expectation([&](const PositiveValue& x) { return std::pow(rp_distance(x, m.mean), 2); }, law,
                                 n, s4),
                  1.7);

        // simplex S^4
        const auto basis = default_basis(4);
        const NormalOnSimplex nsd(Eigen::Vector3d(0.4, -0.7, 1.1), oracle::random_spd(rng, 3, 0.3, 1.5), basis);
        SeededStream s5(7007, 5);
        const auto draws = sample_nsd(nsd, n, s5);

        const auto ca = closure(oracle::random_parts(rng, 4));
        const double cb = 1.8;
        const auto t5 = nsd_transform(nsd, ca, cb);
        out.require((t5.mu() - (ilr(ca, basis) + cb * nsd.mu())).cwiseAbs().maxCoeff() < 1e-12 &&
                        (t5.sigma() - cb * cb * nsd.sigma()).cwiseAbs().maxCoeff() < 1e-12,
                    "simplex affine transport closed form");
        std::vector<Composition> d5, d7, d8;
        const PermutationMap perm({2, 0, 3, 1});
        const SelectionMatrix sel({3, 0, 2}, 4);
        for (const auto& x : draws) {
            d5.push_back(perturb(ca, power(cb, x)));
            d7.push_back(permute(x, perm));
            d8.push_back(subcomposition(x, sel));
        }
        check_against(out, "simplex affine transport", d5, t5);

        double p6 = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            const auto shift = closure(oracle::random_parts(rng, 4));
            const auto x = closure(oracle::random_parts(rng, 4));
            p6 = std::max(p6, std::abs(nsd_pdf(nsd_transform(nsd, shift, 1.0), perturb(shift, x)) - nsd_pdf(nsd, x)));
        }
        out.require(p6 < 1e-12, "simplex shift invariance gap " + fmt(p6));

        const auto t7 = nsd_permute(nsd, perm);
        const Eigen::MatrixXd q = permutation_coordinate_map(perm, basis);
        out.require((t7.mu() - q * nsd.mu()).cwiseAbs().maxCoeff() < 1e-12, "permutation transport closed form");
        check_against(out, "permutation transport", d7, t7);

        const auto t8 = nsd_subcomposition(nsd, sel);
        const Eigen::MatrixXd r = subcomposition_coordinate_map(sel, basis, default_basis(3));
        out.require((t8.mu() - r * nsd.mu()).cwiseAbs().maxCoeff() < 1e-12 &&
                        (t8.sigma() - r * nsd.sigma() * r.transpose()).cwiseAbs().maxCoeff() < 1e-12,
                    "subcomposition transport closed form");
        check_against(out, "subcomposition transport", d8, t8);

        const auto mom = nsd_moments(nsd);
        out.require(ait_distance(mom.center, ilr_inv(nsd.mu(), basis)) < 1e-12, "simplex centre closed form");
        out.require(mom.metric_variance == nsd.sigma().trace(), "simplex metric variance closed form");
        const Eigen::VectorXd centre_coords = ilr_mean(draws, basis);
        for (Eigen::Index j = 0; j < 3; ++j) {
            out.require(std::abs(centre_coords[j] - nsd.mu()[j]) < 3 * std::sqrt(nsd.sigma()(j, j) / n),
                        "simplex centre MC centre coordinate " + std::to_string(j));
        }
        SeededStream s10(7007, 10);
        mc_within(out, "simplex metric variance MC",
                  mc_expectation([&](const Composition& x) { return std::pow(ait_distance(x, mom.center), 2); }, nsd,
                                 n, s10),
                  mom.metric_variance);
    });

    criterion(8, "CI coverage", 0, [](Outcome& out) {
        const NormalOnRPlus law(1, 0.25);
        const double target = std::exp(1.0);
        int covered = 0;
        const int reps = 10000;
        for (int rep = 0; rep < reps; ++rep) {
            SeededStream s(8008, static_cast<std::uint64_t>(rep));
            const auto [lo, hi] = ci_mean_nrp(RPlusSample(sample_nrp(law, 30, s)), 0.10);
            if (lo.value() < target && target < hi.value()) ++covered;
        }
        const double rate = static_cast<double>(covered) / reps;
        out.require(rate >= 0.89 && rate <= 0.91, "coverage " + fmt(rate));
        if (out.pass) out.detail << "coverage " << rate;
    });

    criterion(9, "Geometric mean below the naive lognormal mean", 0, [](Outcome& out) {
        std::mt19937_64 rng(9009);
        std::uniform_real_distribution<double> mu_d(-3, 3), s_d(0.01, 2.0);
        std::uniform_int_distribution<int> n_d(2, 200);
        int ordered = 0, exact = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            SeededStream s(9009, static_cast<std::uint64_t>(rep));
            const RPlusSample sample(sample_nrp(NormalOnRPlus(mu_d(rng), s_d(rng)), n_d(rng), s));
            const auto fit = fit_nrp(sample);
            const double gm = fit.fitted_mean().value();
            if (gm < naive_lognormal_mean(sample)) ++ordered;
            double logsum = 0;
            for (const auto& v : sample.values()) logsum += std::log(v.value());
            const double direct = std::exp(logsum / static_cast<double>(sample.size()));
            if (gm == std::exp(fit.mu) && std::abs(gm - direct) <= 1e-12 * direct) ++exact;
        }
        out.require(ordered == 1000, "strict ordering held in " + std::to_string(ordered) + "/1000");
        out.require(exact == 1000, "geometric mean identity held in " + std::to_string(exact) + "/1000");
    });

    criterion(10, "GOF battery on the Skye lavas", 0, [](Outcome& out) {
        const SimplexSample sample(skye(), default_basis(3));
        const auto report = gof_battery(sample, fit_nsd(sample));
        out.require(report.entries.size() == 12, "entries " + std::to_string(report.entries.size()));
        out.require(report.rejections() == 1, "rejections " + std::to_string(report.rejections()));
        out.require(report.rejections("marginal") == 1, "marginal rejections " +
                                                            std::to_string(report.rejections("marginal")));
        for (const auto& e : report.entries) {
            if (!e.passed_at_1pct) {
                out.detail << "rejected " << e.layer << " " << e.component << " " << edf::name(e.test) << " "
                           << fmt(e.statistic) << " > " << e.critical_1pct;
            }
        }
    });

    criterion(11, "Isometry and homomorphism fuzz", 10.0, [](Outcome& out) {
        std::mt19937_64 rng(1111);
        std::uniform_int_distribution<int> d_d(2, 10);
        std::uniform_real_distribution<double> a_d(-3, 3);
        std::vector<ContrastBasis> bases, rotated;
        for (Eigen::Index d = 2; d <= 10; ++d) {
            bases.push_back(default_basis(static_cast<std::size_t>(d)));
            rotated.emplace_back(bases.back().matrix() * oracle::random_rotation(rng, d - 1));
        }
        double worst = 0;
        for (int rep = 0; rep < 10000; ++rep) {
            const int d = d_d(rng);
            const auto& u = bases[static_cast<std::size_t>(d - 2)];
            const auto& v = rotated[static_cast<std::size_t>(d - 2)];
            const auto x = closure(oracle::random_parts(rng, d));
            const auto y = closure(oracle::random_parts(rng, d));
            const double a = a_d(rng);
            const auto dd = static_cast<std::size_t>(d);
            const Eigen::VectorXd hx = ilr(x, u), hy = ilr(y, u);
            const double gaps[] = {
                std::abs((hx - hy).norm() - ait_distance(x, y)),
                std::abs(oracle::pairwise_distance(x.parts(), y.parts()) - ait_distance(x, y)),
                std::abs(oracle::pairwise_inner(x.parts(), y.parts()) - ait_inner(x, y)),
                (ilr(perturb(x, y), u) - hx - hy).cwiseAbs().maxCoeff(),
                (ilr(power(a, x), u) - a * hx).cwiseAbs().maxCoeff(),
                (ilr(x, v) - basis_change(u, v) * hx).cwiseAbs().maxCoeff(),
                (hx - oracle::balance_coordinates(x.parts())).cwiseAbs().maxCoeff(),
                (alr_to_clr_matrix(dd) * alr(x) - clr(x)).cwiseAbs().maxCoeff(),
                (u.matrix() * hx - clr(x)).cwiseAbs().maxCoeff(),
                ait_distance(ilr_inv(hx, u), x),
                std::abs(ait_distance(perturb(x, y), perturb(x, x)) - ait_distance(y, x)),
                std::abs(ait_distance(power(a, x), power(a, y)) - std::abs(a) * ait_distance(x, y)),
            };
            for (double g : gaps) worst = std::max(worst, g);
        }
        out.require(worst < 1e-10, "worst invariant gap " + fmt(worst));
        if (out.pass) out.detail << "worst gap " << worst;
    });

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
