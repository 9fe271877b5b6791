#include "haqjsk/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <stdexcept>

namespace haqjsk {

SpectralDecomposition sym_eig(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("sym_eig: matrix must be square");
  const double asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-10) {
    std::ostringstream msg;
    msg << "sym_eig: input not symmetric, max|m - m^T| = " << asymmetry;
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sym_eig: eigensolver failed to converge");
  return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<EigenGroup> group_eigenvalues(const SpectralDecomposition& d,
                                          double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("group_eigenvalues: tol must be > 0");
  std::vector<EigenGroup> groups;
  for (int j = 0; j < d.eigenvalues.size(); ++j) {
    const double value = d.eigenvalues[j];
    if (groups.empty() ||
        std::abs(value - groups.back().representative_value) > tol) {
      groups.push_back(EigenGroup{value, {j}});
    } else {
      groups.back().column_indices.push_back(j);
    }
  }
  return groups;
}

double default_grouping_tolerance(const SpectralDecomposition& d) {
  const double range =
      d.eigenvalues.size() == 0
          ? 0.0
          : d.eigenvalues[d.eigenvalues.size() - 1] - d.eigenvalues[0];
  return 1e-8 * std::max(1.0, range);
}

}  // namespace haqjsk
