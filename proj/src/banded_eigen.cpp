#include "mab/banded_eigen.hpp"

#include <lapacke.h>

#include <string>

#include "mab/types.hpp"

namespace mab {

SymmetricBand::SymmetricBand(int size, int kd) : n(size), bandwidth(kd) {
    if (size <= 0 || kd < 0 || kd >= size) throw DomainError("invalid band matrix shape");
    band.resize(static_cast<std::size_t>(kd) + 1);
    for (int d = 0; d <= kd; ++d) band[d].assign(static_cast<std::size_t>(size - d), 0.0);
}

double& SymmetricBand::at(int row, int col) {
    const int d = row - col;
    if (d < 0 || d > bandwidth || row >= n) throw DomainError("band index out of range");
    return band[d][static_cast<std::size_t>(col)];
}

std::vector<double> lowest_eigenvalues(const SymmetricBand& matrix, int count) {
    if (count < 1 || count > matrix.n) throw DomainError("eigenvalue count out of range");
    const int n = matrix.n;
    const int kd = matrix.bandwidth;
    const int ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (int col = 0; col < n; ++col)
        for (int d = 0; d <= kd && col + d < n; ++d)
            ab[static_cast<std::size_t>(col) * ldab + d] = matrix.band[d][col];

    std::vector<double> w(n);
    std::vector<lapack_int> ifail(n);
    std::vector<double> q(1);
    double z_dummy = 0.0;
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, kd, ab.data(), ldab, q.data(), 1,
                                           0.0, 0.0, 1, count, abstol, &found, w.data(), &z_dummy, 1,
                                           ifail.data());
    if (info != 0) throw std::runtime_error("dsbevx failed with info = " + std::to_string(info));
    w.resize(static_cast<std::size_t>(found));
    return w;
}

}  // namespace mab
