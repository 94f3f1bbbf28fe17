// Exact vibronic spectrum by conserved-j block diagonalization, and the Born-Oppenheimer
// spectrum of the lower surface with the vector potential xi e_theta / r.
//
// J = p_theta + xi sz commutes with H. In a block of fixed j the state is
//   (R0(r) e^{i m0 theta}, R1(r) e^{i m1 theta}),  m0 = j - xi,  m1 = j + xi,
// and each channel sees -1/2 (1/r)(r R')' + m^2/(2 r^2) R + r^2/2 R, coupled by k r^{2|xi|}.
//
// Radial discretization: reduced amplitudes u_i = sqrt(r_i) R(r_i) on the cell-centered grid
// r_i = (i - 1/2) h, i = 1..n, h = r_max / (n + 1/2), with u = 0 at r_max. The flux form of
// the radial Laplacian gives the symmetric three-point stencil
//   diagonal 1/h^2,  off-diagonal -(1/2h^2) i / sqrt(i^2 - 1/4),
// which is second-order accurate also for m = 0. Half-odd angular numbers (the BO problem for
// half-integer xi) use the plain u-form -u''/2 + (mu^2 - 1/4)/(2 r^2) u with u_0 = -u_1 instead.
#pragma once

#include <map>
#include <vector>

#include "mab/banded_eigen.hpp"
#include "mab/model.hpp"

namespace mab {

struct RadialGrid {
    double r_max = 12.0;
    int n = 1200;

    /// r_max = max(r_ref + 8, 12), n = 1200.
    static RadialGrid defaults(const ModelParams& params);

    double spacing() const { return r_max / (n + 0.5); }
    double node(int i) const { return (i + 0.5) * spacing(); }  ///< i = 0..n-1
    void validate(const ModelParams& params) const;
    friend bool operator==(const RadialGrid&, const RadialGrid&) = default;
};

/// Tridiagonal discretization of -1/2 Laplacian_mu + potential for one radial channel.
struct RadialChannel {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;
};

/// Channel with angular number mu (integer m, or m + xi for the BO problem) and an
/// additional local potential sampled at the nodes.
RadialChannel radial_channel(const RadialGrid& grid, double mu, const std::vector<double>& potential);

struct JBlock {
    double j = 0.0;
    int m0 = 0;  ///< channel paired with |0>
    int m1 = 0;  ///< channel paired with |1>
    RadialGrid grid;
    RadialChannel channel0;
    RadialChannel channel1;
    std::vector<double> coupling;  ///< k r_i^{2|xi|}

    /// Interleaved (u0_1, u1_1, u0_2, u1_2, ...) pentadiagonal band.
    SymmetricBand banded() const;
    /// Full 2n x 2n matrix, channel 0 first. Intended for small grids.
    Eigen::MatrixXd dense() const;
};

/// Throws DomainError unless j - xi is an integer.
JBlock build_j_block(const ModelParams& params, double j, const RadialGrid& grid);

/// Lowest n_eigs eigenvalues, ascending.
std::vector<double> solve_block(const JBlock& block, int n_eigs);

struct BlockSpectrum {
    double j;
    int m0;
    int m1;
    std::vector<double> eigenvalues;
};

struct SpectrumResult {
    ModelParams params;
    RadialGrid grid;
    std::vector<BlockSpectrum> blocks;  ///< in the order of the requested j list

    const BlockSpectrum* find(double j) const;
    /// Block holding the lowest level; ties go to the earlier block.
    const BlockSpectrum& ground_block() const;
};

/// xi = 1/2: {1/2, -1/2, 3/2, -3/2, 5/2, -5/2}; integer xi: {0, 1, -1, 2, -2}; otherwise
/// the six admissible j closest to zero.
std::vector<double> default_j_list(double xi);

SpectrumResult exact_spectrum(const ModelParams& params, const std::vector<double>& j_list,
                              const RadialGrid& grid, int n_eigs);

struct BOLevel {
    int m = 0;
    double j_eff = 0.0;  ///< m + xi
    std::vector<double> eigenvalues;
};

struct BOLevels {
    ModelParams params;
    RadialGrid grid;
    bool include_born_huang = false;
    std::vector<BOLevel> levels;

    const BOLevel* find_j(double j_eff) const;
};

/// Radial problem on the lower surface: angular number m + xi, potential
/// r^2/2 - k r^{2|xi|} (+ 1/(8 r^2) with the Born-Huang term).
BOLevels bo_spectrum(const ModelParams& params, const std::vector<int>& m_list, const RadialGrid& grid,
                     bool include_born_huang, int n_eigs);

/// m = j - xi for each j (the BO level aligned with exact block j).
std::vector<int> bo_m_list(double xi, const std::vector<double>& j_list);

struct LevelComparison {
    double j;
    int level_index;
    double exact;
    double bo;
    double difference;
    double relative_error;
};

struct SplittingComparison {
    double j;
    double exact_splitting;  ///< E0(j) - E0(ground block)
    double bo_splitting;
    double relative_error;   ///< NaN when the exact splitting vanishes (degenerate partner)
};

struct SpectrumComparison {
    std::vector<LevelComparison> levels;
    std::vector<SplittingComparison> lowest_band;
    double reference_j = 0.0;
    double max_level_relative_error = 0.0;
    double max_splitting_relative_error = 0.0;
};

/// Levelwise and lowest-band comparison. Throws MismatchError on differing params or grid.
SpectrumComparison compare_spectra(const SpectrumResult& exact, const BOLevels& bo);

/// Exact-vs-exact variant used for regression comparisons.
SpectrumComparison compare_spectra(const SpectrumResult& a, const SpectrumResult& b);

struct MultisetCheck {
    bool equal = true;
    double first_mismatch = 0.0;  ///< smallest value whose multiplicities differ
    std::map<long long, std::pair<int, int>> multiplicities;  ///< 4*value -> (shifted, unshifted)
};

/// Compares the multisets {(m + xi)^2} and {m^2} over m in Z for values up to cutoff^2.
MultisetCheck compare_angular_multisets(double xi, int cutoff);

/// Largest |E(j) - E(-j)| over levels, across all +-j pairs present.
double max_pair_degeneracy_error(const SpectrumResult& result);

}  // namespace mab
