#ifndef HAQJSK_SPECTRAL_HPP
#define HAQJSK_SPECTRAL_HPP

#include <vector>

#include "haqjsk/graph.hpp"

namespace haqjsk {

/// Symmetric eigendecomposition m = Phi Lambda Phi^T with eigenvalues in
/// non-decreasing order and eigenvectors as orthonormal columns.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Throws std::invalid_argument when max|m - m^T| exceeds 1e-10 (the message
/// reports the asymmetry) and std::runtime_error if the solver fails.
SpectralDecomposition sym_eig(const Matrix& m);

/// One (near-)degenerate eigenspace: the columns of the decomposition whose
/// eigenvalues lie within the grouping tolerance of the representative.
struct EigenGroup {
  double representative_value = 0.0;
  std::vector<int> column_indices;
};

/// Partitions columns into eigenvalue groups: an eigenvalue joins the current
/// group while it stays within tol of the group's representative (its first
/// eigenvalue). Groups come out ordered by representative value.
std::vector<EigenGroup> group_eigenvalues(const SpectralDecomposition& d,
                                          double tol);

/// 1e-8 * max(1, spectral range); floating-point spectra never repeat
/// exactly, so degeneracy detection needs a relative tolerance.
double default_grouping_tolerance(const SpectralDecomposition& d);

}  // namespace haqjsk

#endif
