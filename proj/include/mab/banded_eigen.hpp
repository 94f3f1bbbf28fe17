#pragma once

#include <vector>

namespace mab {

/// Symmetric band matrix in LAPACK lower storage: band[d][i] holds A(i + d, i) for
/// d = 0..bandwidth, i = 0..n-1-d.
struct SymmetricBand {
    int n = 0;
    int bandwidth = 0;
    std::vector<std::vector<double>> band;

    SymmetricBand(int size, int kd);
    double& at(int row, int col);  ///< row >= col, row - col <= kd
};

/// Lowest `count` eigenvalues in ascending order (LAPACK dsbevx, index range).
std::vector<double> lowest_eigenvalues(const SymmetricBand& matrix, int count);

}  // namespace mab
