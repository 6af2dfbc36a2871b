#include "coda/modality.hpp"

#include "coda/errors.hpp"

#include <array>
#include <utility>

namespace coda {

namespace {

// First ring (6) and second ring (6) of the triangular lattice in (i, j) index space.
constexpr std::array<std::pair<int, int>, 12> kNeighbours{{
    {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1},
    {1, 1}, {-1, -1}, {2, -1}, {-2, 1}, {1, -2}, {-1, 2},
}};

constexpr double kTieTolerance = 1e-12;

} // namespace

TernaryGrid::TernaryGrid(int resolution, double margin) : resolution_(resolution), margin_(margin) {
    if (resolution_ < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 2");
    if (!(margin_ > 0.0) || !(margin_ < 1.0 / 3.0)) {
        throw Error(ErrorKind::InvalidArgument, "grid margin must lie in (0, 1/3)");
    }
}

std::size_t TernaryGrid::node_count() const noexcept {
    const auto r = static_cast<std::size_t>(resolution_);
    return (r + 1) * (r + 2) / 2;
}

bool TernaryGrid::contains(int i, int j) const noexcept {
    return i >= 0 && j >= 0 && i + j <= resolution_;
}

Composition TernaryGrid::point(int i, int j) const {
    if (!contains(i, j)) throw Error(ErrorKind::InvalidArgument, "grid index out of range");
    const double r = resolution_;
    const double span = 1.0 - 3.0 * margin_;
    Eigen::Vector3d parts(margin_ + span * i / r, margin_ + span * j / r,
                          margin_ + span * (resolution_ - i - j) / r);
    return closure(Eigen::VectorXd(parts));
}

TernaryDensity evaluate_on_grid(const std::function<double(const Composition&)>& density,
                                const TernaryGrid& grid) {
    TernaryDensity out{grid, {}};
    const int r = grid.resolution();
    out.values.resize(static_cast<std::size_t>(r) + 1);
    for (int i = 0; i <= r; ++i) {
        auto& row = out.values[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(r - i) + 1);
        for (int j = 0; j <= r - i; ++j) row[static_cast<std::size_t>(j)] = density(grid.point(i, j));
    }
    return out;
}

TernaryDensity nsd_density_grid(const NormalOnSimplex& law, const TernaryGrid& grid) {
    if (law.parts() != 3) throw Error(ErrorKind::DimensionMismatch, "ternary grids need D = 3");
    return evaluate_on_grid([&](const Composition& x) { return nsd_pdf(law, x); }, grid);
}

TernaryDensity aln_density_grid(const AlnLaw& law, const TernaryGrid& grid) {
    if (law.parts() != 3) throw Error(ErrorKind::DimensionMismatch, "ternary grids need D = 3");
    return evaluate_on_grid([&](const Composition& x) { return aln_pdf(law, x); }, grid);
}

std::vector<LocalMaximum> find_local_maxima(const TernaryDensity& density) {
    const TernaryGrid& grid = density.grid;
    const int r = grid.resolution();

    std::vector<std::vector<char>> candidate(static_cast<std::size_t>(r) + 1);
    for (int i = 0; i <= r; ++i) {
        candidate[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(r - i) + 1, 0);
        for (int j = 0; j <= r - i; ++j) {
            const double v = density.at(i, j);
            bool is_max = true;
            for (const auto& [di, dj] : kNeighbours) {
                if (grid.contains(i + di, j + dj) && density.at(i + di, j + dj) > v * (1.0 + kTieTolerance)) {
                    is_max = false;
                    break;
                }
            }
            candidate[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = is_max ? 1 : 0;
        }
    }

    // Flood-fill plateaus of adjacent candidates.
    std::vector<LocalMaximum> maxima;
    std::vector<std::pair<int, int>> stack;
    for (int i = 0; i <= r; ++i) {
        for (int j = 0; j <= r - i; ++j) {
            if (candidate[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 1) continue;
            int best_i = i;
            int best_j = j;
            stack.assign(1, {i, j});
            candidate[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 2;
            while (!stack.empty()) {
                const auto [ci, cj] = stack.back();
                stack.pop_back();
                if (density.at(ci, cj) > density.at(best_i, best_j)) {
                    best_i = ci;
                    best_j = cj;
                }
                for (const auto& [di, dj] : kNeighbours) {
                    const int ni = ci + di;
                    const int nj = cj + dj;
                    if (!grid.contains(ni, nj)) continue;
                    auto& flag = candidate[static_cast<std::size_t>(ni)][static_cast<std::size_t>(nj)];
                    if (flag == 1) {
                        flag = 2;
                        stack.emplace_back(ni, nj);
                    }
                }
            }
            maxima.push_back({best_i, best_j, grid.point(best_i, best_j), density.at(best_i, best_j)});
        }
    }
    return maxima;
}

} // namespace coda
