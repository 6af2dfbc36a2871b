#ifndef CODA_MODALITY_HPP
#define CODA_MODALITY_HPP

/**
 * @file modality.hpp
 * @brief Density evaluation on a barycentric grid of S^3 and local-maximum detection.
 */

#include "coda/laws.hpp"
#include "coda/simplex.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace coda {

/**
 * Triangular grid over the 3-part simplex.
 *
 * Node (i, j) with i + j <= r has parts
 *   margin + (1 − 3·margin) · (i, j, r − i − j) / r,
 * so every node stays `margin` away from the boundary.
 */
class TernaryGrid {
public:
    TernaryGrid(int resolution, double margin);

    int resolution() const noexcept { return resolution_; }
    double margin() const noexcept { return margin_; }
    std::size_t node_count() const noexcept;

    bool contains(int i, int j) const noexcept;
    Composition point(int i, int j) const;

private:
    int resolution_;
    double margin_;
};

struct TernaryDensity {
    TernaryGrid grid;
    /// values[i][j] for j <= r − i.
    std::vector<std::vector<double>> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
};

struct LocalMaximum {
    int i;
    int j;
    Composition location;
    double density;
};

TernaryDensity evaluate_on_grid(const std::function<double(const Composition&)>& density,
                                const TernaryGrid& grid);

TernaryDensity nsd_density_grid(const NormalOnSimplex& law, const TernaryGrid& grid);
TernaryDensity aln_density_grid(const AlnLaw& law, const TernaryGrid& grid);

/**
 * Local maxima of a gridded density.
 *
 * A node is a candidate when no node within its first two rings of the
 * triangular lattice (12 neighbours) exceeds it by more than a relative 1e-12.
 * Adjacent candidates form a plateau and are reported once, at the candidate
 * with the largest value.
 */
std::vector<LocalMaximum> find_local_maxima(const TernaryDensity& density);

} // namespace coda

#endif
