#ifndef CODA_SAMPLING_HPP
#define CODA_SAMPLING_HPP

/**
 * @file sampling.hpp
 * @brief Seeded random generation and Monte-Carlo helpers.
 *
 * Draw sequences are fully determined by (seed, stream_id):
 *  - the engine is std::mt19937_64, whose output sequence is fixed by the C++ standard;
 *  - it is seeded with splitmix64(seed ^ splitmix64(stream_id));
 *  - uniforms take the top 53 bits, u = (k + 0.5) / 2^53, so u lies in (0, 1);
 *  - standard normals use the inverse CDF, z = −√2 · erfc⁻¹(2u).
 * Replications run on distinct stream ids rather than by jumping one sequence.
 */

#include "coda/laws.hpp"
#include "coda/rplus.hpp"
#include "coda/simplex.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace coda {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

class SeededStream {
public:
    SeededStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    Eigen::VectorXd normal_vector(Eigen::Index n);
    /// Exponential with unit rate.
    double exponential();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

std::vector<PositiveValue> sample_nrp(const NormalOnRPlus& law, std::size_t n, SeededStream& stream);
std::vector<PositiveValue> sample_lognormal(const LognormalLaw& law, std::size_t n, SeededStream& stream);

std::vector<Composition> sample_nsd(const NormalOnSimplex& law, std::size_t n, SeededStream& stream);
/// Same law as `sample_nsd` with the same parameters; draws are identical for the same stream.
std::vector<Composition> sample_aln(const AlnLaw& law, std::size_t n, SeededStream& stream);

/// Uniform draws (Lebesgue measure) on the simplex with closure kappa.
std::vector<Composition> sample_uniform_simplex(std::size_t parts, std::size_t n, SeededStream& stream,
                                                double kappa = 1.0);

struct McEstimate {
    double estimate;
    double standard_error;
};

/// Sample mean of f over n draws and its standard error sd/√n. Requires n >= 100.
McEstimate mc_expectation(const std::function<double(const Composition&)>& f,
                          const NormalOnSimplex& law, std::size_t n, SeededStream& stream);
McEstimate mc_expectation(const std::function<double(const PositiveValue&)>& f,
                          const NormalOnRPlus& law, std::size_t n, SeededStream& stream);

} // namespace coda

#endif
