#include "mab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mab {

namespace {

constexpr double kAdmissibleTolerance = 1e-12;

int integer_or_throw(double value, const char* what) {
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > kAdmissibleTolerance)
        throw DomainError(std::string(what) + " must be an integer (got " + std::to_string(value) + ")");
    return static_cast<int>(rounded);
}

}  // namespace

RadialGrid RadialGrid::defaults(const ModelParams& params) {
    return {std::max(params.r_ref() + 8.0, 12.0), 1200};
}

void RadialGrid::validate(const ModelParams& params) const {
    if (!std::isfinite(r_max) || r_max < params.r_ref() + 8.0)
        throw DomainError("radial grid: r_max must be >= r_ref + 8");
    if (n < 400) throw DomainError("radial grid: n must be >= 400");
}

RadialChannel radial_channel(const RadialGrid& grid, double mu, const std::vector<double>& potential) {
    const int n = grid.n;
    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    // Half-odd mu: u ~ r^{|mu|+1/2} is regular, so use the plain u-form with an odd ghost u_0 = -u_1.
    const bool half_odd = std::abs(std::remainder(2.0 * mu, 2.0)) > 0.5;
    RadialChannel ch;
    ch.diagonal.resize(n);
    ch.off_diagonal.resize(n - 1);
    for (int i = 0; i < n; ++i) {
        const double r = grid.node(i);
        const double centrifugal = half_odd ? (mu * mu - 0.25) / (2.0 * r * r) : mu * mu / (2.0 * r * r);
        ch.diagonal[i] = inv_h2 + centrifugal + 0.5 * r * r + potential[i];
    }
    if (half_odd) ch.diagonal[0] += 0.5 * inv_h2;
    for (int i = 1; i < n; ++i) {
        const double face = static_cast<double>(i);  // r_{i+1/2} / h in one-based numbering
        ch.off_diagonal[i - 1] = half_odd ? -0.5 * inv_h2 : -0.5 * inv_h2 * face / std::sqrt(face * face - 0.25);
    }
    return ch;
}

SymmetricBand JBlock::banded() const {
    const int n = grid.n;
    SymmetricBand band(2 * n, 2);
    for (int i = 0; i < n; ++i) {
        band.at(2 * i, 2 * i) = channel0.diagonal[i];
        band.at(2 * i + 1, 2 * i + 1) = channel1.diagonal[i];
        band.at(2 * i + 1, 2 * i) = coupling[i];
        if (i + 1 < n) {
            band.at(2 * i + 2, 2 * i) = channel0.off_diagonal[i];
            band.at(2 * i + 3, 2 * i + 1) = channel1.off_diagonal[i];
        }
    }
    return band;
}

Eigen::MatrixXd JBlock::dense() const {
    const int n = grid.n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = channel0.diagonal[i];
        h(n + i, n + i) = channel1.diagonal[i];
        h(i, n + i) = h(n + i, i) = coupling[i];
        if (i + 1 < n) {
            h(i, i + 1) = h(i + 1, i) = channel0.off_diagonal[i];
            h(n + i, n + i + 1) = h(n + i + 1, n + i) = channel1.off_diagonal[i];
        }
    }
    return h;
}

JBlock build_j_block(const ModelParams& params, double j, const RadialGrid& grid) {
    if (grid.n < 2 || !(grid.r_max > 0.0)) throw DomainError("radial grid too small");
    JBlock block;
    block.j = j;
    block.m0 = integer_or_throw(j - params.xi(), "j - xi");
    block.m1 = integer_or_throw(j + params.xi(), "j + xi");
    block.grid = grid;
    const std::vector<double> no_potential(grid.n, 0.0);
    block.channel0 = radial_channel(grid, block.m0, no_potential);
    block.channel1 = radial_channel(grid, block.m1, no_potential);
    block.coupling.resize(grid.n);
    for (int i = 0; i < grid.n; ++i)
        block.coupling[i] = params.k() * std::pow(grid.node(i), params.coupling_power());
    return block;
}

std::vector<double> solve_block(const JBlock& block, int n_eigs) {
    if (n_eigs < 1 || n_eigs > 2 * block.grid.n) throw DomainError("solve_block: n_eigs out of range");
    return lowest_eigenvalues(block.banded(), n_eigs);
}

const BlockSpectrum* SpectrumResult::find(double j) const {
    for (const auto& b : blocks)
        if (std::abs(b.j - j) < kAdmissibleTolerance) return &b;
    return nullptr;
}

const BlockSpectrum& SpectrumResult::ground_block() const {
    if (blocks.empty()) throw DomainError("spectrum has no blocks");
    const BlockSpectrum* best = &blocks.front();
    for (const auto& b : blocks)
        if (b.eigenvalues.front() < best->eigenvalues.front()) best = &b;
    return *best;
}

std::vector<double> default_j_list(double xi) {
    if (xi == 0.5 || xi == -0.5) return {0.5, -0.5, 1.5, -1.5, 2.5, -2.5};
    const double twice = 2.0 * xi;
    if (std::abs(std::fmod(twice, 2.0)) < kAdmissibleTolerance) return {0.0, 1.0, -1.0, 2.0, -2.0};
    return {0.5, -0.5, 1.5, -1.5, 2.5, -2.5};
}

SpectrumResult exact_spectrum(const ModelParams& params, const std::vector<double>& j_list,
                              const RadialGrid& grid, int n_eigs) {
    if (j_list.empty()) throw DomainError("exact_spectrum: empty j list");
    SpectrumResult result{params, grid, {}};
    for (double j : j_list) {
        const JBlock block = build_j_block(params, j, grid);
        result.blocks.push_back({j, block.m0, block.m1, solve_block(block, n_eigs)});
    }
    return result;
}

const BOLevel* BOLevels::find_j(double j_eff) const {
    for (const auto& l : levels)
        if (std::abs(l.j_eff - j_eff) < kAdmissibleTolerance) return &l;
    return nullptr;
}

BOLevels bo_spectrum(const ModelParams& params, const std::vector<int>& m_list, const RadialGrid& grid,
                     bool include_born_huang, int n_eigs) {
    if (grid.n < 2 || !(grid.r_max > 0.0)) throw DomainError("radial grid too small");
    if (n_eigs < 1 || n_eigs > grid.n) throw DomainError("bo_spectrum: n_eigs out of range");
    std::vector<double> potential(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double r = grid.node(i);
        potential[i] = -params.k() * std::pow(r, params.coupling_power()) +
                       (include_born_huang ? 1.0 / (8.0 * r * r) : 0.0);
    }
    BOLevels out{params, grid, include_born_huang, {}};
    for (int m : m_list) {
        const double mu = m + params.xi();
        const RadialChannel ch = radial_channel(grid, mu, potential);
        SymmetricBand band(grid.n, 1);
        for (int i = 0; i < grid.n; ++i) {
            band.at(i, i) = ch.diagonal[i];
            if (i + 1 < grid.n) band.at(i + 1, i) = ch.off_diagonal[i];
        }
        out.levels.push_back({m, mu, lowest_eigenvalues(band, n_eigs)});
    }
    return out;
}

std::vector<int> bo_m_list(double xi, const std::vector<double>& j_list) {
    std::vector<int> m;
    m.reserve(j_list.size());
    for (double j : j_list) m.push_back(integer_or_throw(j - xi, "j - xi"));
    return m;
}

namespace {

template <typename LevelsOf>
SpectrumComparison compare_impl(const SpectrumResult& exact, LevelsOf other_levels) {
    SpectrumComparison cmp;
    const BlockSpectrum& ground = exact.ground_block();
    cmp.reference_j = ground.j;
    const std::vector<double>* ground_other = other_levels(ground.j);
    if (ground_other == nullptr) throw MismatchError("comparison lacks the ground block j");

    for (const auto& block : exact.blocks) {
        const std::vector<double>* other = other_levels(block.j);
        if (other == nullptr) continue;
        const std::size_t count = std::min(block.eigenvalues.size(), other->size());
        for (std::size_t i = 0; i < count; ++i) {
            const double e = block.eigenvalues[i];
            const double b = (*other)[i];
            const double rel = e != 0.0 ? std::abs(b - e) / std::abs(e) : std::abs(b - e);
            cmp.levels.push_back({block.j, static_cast<int>(i), e, b, b - e, rel});
            cmp.max_level_relative_error = std::max(cmp.max_level_relative_error, rel);
        }
        const double exact_split = block.eigenvalues.front() - ground.eigenvalues.front();
        const double other_split = other->front() - ground_other->front();
        double rel = std::numeric_limits<double>::quiet_NaN();
        if (std::abs(exact_split) > 1e-8) {
            rel = std::abs(other_split - exact_split) / std::abs(exact_split);
            cmp.max_splitting_relative_error = std::max(cmp.max_splitting_relative_error, rel);
        }
        cmp.lowest_band.push_back({block.j, exact_split, other_split, rel});
    }
    return cmp;
}

}  // namespace

SpectrumComparison compare_spectra(const SpectrumResult& exact, const BOLevels& bo) {
    if (!(exact.params == bo.params)) throw MismatchError("compare_spectra: model parameters differ");
    if (!(exact.grid == bo.grid)) throw MismatchError("compare_spectra: radial grids differ");
    return compare_impl(exact, [&](double j) -> const std::vector<double>* {
        const BOLevel* level = bo.find_j(j);
        return level ? &level->eigenvalues : nullptr;
    });
}

SpectrumComparison compare_spectra(const SpectrumResult& a, const SpectrumResult& b) {
    if (!(a.params == b.params)) throw MismatchError("compare_spectra: model parameters differ");
    if (!(a.grid == b.grid)) throw MismatchError("compare_spectra: radial grids differ");
    return compare_impl(a, [&](double j) -> const std::vector<double>* {
        const BlockSpectrum* block = b.find(j);
        return block ? &block->eigenvalues : nullptr;
    });
}

MultisetCheck compare_angular_multisets(double xi, int cutoff) {
    if (cutoff < 0) throw DomainError("cutoff must be non-negative");
    const long long twice_xi = integer_or_throw(2.0 * xi, "2 xi");
    // Work with 4*value = (2m + 2xi)^2 so everything stays integral.
    const long long limit = 4LL * cutoff * cutoff;
    const long long reach = cutoff + std::llabs(twice_xi) + 1;
    MultisetCheck check;
    for (long long m = -reach; m <= reach; ++m) {
        const long long shifted = (2 * m + twice_xi) * (2 * m + twice_xi);
        const long long plain = 4 * m * m;
        if (shifted <= limit) ++check.multiplicities[shifted].first;
        if (plain <= limit) ++check.multiplicities[plain].second;
    }
    for (const auto& [value, counts] : check.multiplicities) {
        if (counts.first != counts.second) {
            check.equal = false;
            check.first_mismatch = static_cast<double>(value) / 4.0;
            break;
        }
    }
    return check;
}

double max_pair_degeneracy_error(const SpectrumResult& result) {
    double worst = 0.0;
    for (const auto& block : result.blocks) {
        if (block.j <= 0.0) continue;
        const BlockSpectrum* partner = result.find(-block.j);
        if (partner == nullptr) continue;
        const std::size_t count = std::min(block.eigenvalues.size(), partner->eigenvalues.size());
        for (std::size_t i = 0; i < count; ++i)
            worst = std::max(worst, std::abs(block.eigenvalues[i] - partner->eigenvalues[i]));
    }
    return worst;
}

}  // namespace mab
