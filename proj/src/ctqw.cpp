#include "haqjsk/ctqw.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "haqjsk/spectral.hpp"

namespace haqjsk {

namespace {

constexpr double kEntropyEigenvalueFloor = 1e-12;
constexpr double kFactorRankFloor = 1e-14;

// sqrt of the degree distribution; uniform state when the matrix has no
// edge mass at all. Self-loop weight counts once toward the degree.
Vector initial_amplitudes(const Matrix& adjacency) {
  const Vector degrees = adjacency.rowwise().sum();
  const double total = degrees.sum();
  const auto n = adjacency.rows();
  if (total <= 0.0) return Vector::Constant(n, 1.0 / std::sqrt(double(n)));
  return (degrees / total).cwiseSqrt();
}

// Weighted Laplacian; any diagonal mass cancels (it enters both D and A).
Matrix weighted_laplacian(const Matrix& adjacency) {
  Matrix l = -adjacency;
  l.diagonal() += adjacency.rowwise().sum();
  return l;
}

double entropy_of_eigenvalues(const Vector& eigenvalues) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues[i];
    if (lambda >= kEntropyEigenvalueFloor) h -= lambda * std::log(lambda);
  }
  return std::max(0.0, h);
}

}  // namespace

QuantumState initial_state(const Graph& g) {
  return initial_amplitudes(g.adjacency()).cast<std::complex<double>>();
}

QuantumState evolve_state(const Graph& g, double t) {
  if (t < 0.0) throw std::invalid_argument("evolve_state: t must be >= 0");
  const SpectralDecomposition sd = sym_eig(laplacian(g));
  const Vector psi0 = initial_amplitudes(g.adjacency());
  const Vector psibar = sd.eigenvectors.transpose() * psi0;
  QuantumState rotated(psibar.size());
  for (Eigen::Index a = 0; a < psibar.size(); ++a) {
    const double phase = -sd.eigenvalues[a] * t;
    rotated[a] = psibar[a] * std::complex<double>(std::cos(phase),
                                                  std::sin(phase));
  }
  return sd.eigenvectors.cast<std::complex<double>>() * rotated;
}

DensityMatrix density_matrix_infinite(const Graph& g) {
  return density_matrix_infinite(g.adjacency());
}

DensityMatrix density_matrix_infinite(const Matrix& weighted_adjacency) {
  const SpectralDecomposition sd =
      sym_eig(weighted_laplacian(weighted_adjacency));
  const Vector psi0 = initial_amplitudes(weighted_adjacency);
  const Vector psibar = sd.eigenvectors.transpose() * psi0;
  const auto groups = group_eigenvalues(sd, default_grouping_tolerance(sd));
  const auto n = weighted_adjacency.rows();
  DensityMatrix rho = Matrix::Zero(n, n);
  for (const auto& group : groups) {
    // sum_{a,b in B_lambda} phi_ra phi_cb psibar_a psibar_b factors into the
    // outer product of the eigenspace projection of the initial state.
    Vector projection = Vector::Zero(n);
    for (int col : group.column_indices)
      projection += sd.eigenvectors.col(col) * psibar[col];
    rho += projection * projection.transpose();
  }
  return rho;
}

DensityMatrix density_matrix_time_avg(const Graph& g, double horizon,
                                      int steps) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("density_matrix_time_avg: horizon must be > 0");
  if (steps < 2)
    throw std::invalid_argument("density_matrix_time_avg: steps must be >= 2");
  const SpectralDecomposition sd = sym_eig(laplacian(g));
  const Vector psi0 = initial_amplitudes(g.adjacency());
  const Vector psibar = sd.eigenvectors.transpose() * psi0;
  const auto n = psi0.size();
  const double dt = horizon / steps;
  DensityMatrix rho = Matrix::Zero(n, n);
  Vector rotated_re(n), rotated_im(n);
  for (int i = 0; i <= steps; ++i) {
    const double t = dt * i;
    for (Eigen::Index a = 0; a < n; ++a) {
      const double phase = -sd.eigenvalues[a] * t;
      rotated_re[a] = psibar[a] * std::cos(phase);
      rotated_im[a] = psibar[a] * std::sin(phase);
    }
    const Vector re = sd.eigenvectors * rotated_re;
    const Vector im = sd.eigenvectors * rotated_im;
    const double w = (i == 0 || i == steps ? 0.5 : 1.0) / steps;
    // Re(psi psi^dagger) = re re^T + im im^T
    rho += w * (re * re.transpose());
    rho += w * (im * im.transpose());
  }
  return rho;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho,
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("von_neumann_entropy: eigensolver failed");
  return entropy_of_eigenvalues(solver.eigenvalues());
}

double qjsd(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    std::ostringstream msg;
    msg << "qjsd: dimension mismatch, " << rho.rows() << "x" << rho.cols()
        << " vs " << sigma.rows() << "x" << sigma.cols();
    throw std::invalid_argument(msg.str());
  }
  const DensityMatrix mixture = (rho + sigma) / 2.0;
  // grouped so the expression is bitwise symmetric in the arguments
  const double divergence =
      von_neumann_entropy(mixture) -
      (von_neumann_entropy(rho) + von_neumann_entropy(sigma)) / 2.0;
  return std::max(0.0, divergence);
}

DensityFactor density_factor_infinite(const Matrix& weighted_adjacency) {
  const SpectralDecomposition sd =
      sym_eig(weighted_laplacian(weighted_adjacency));
  const Vector psi0 = initial_amplitudes(weighted_adjacency);
  const Vector psibar = sd.eigenvectors.transpose() * psi0;
  const auto groups = group_eigenvalues(sd, default_grouping_tolerance(sd));
  const auto n = weighted_adjacency.rows();
  // Eigenspace projections are mutually orthogonal, so their squared norms
  // are exactly the non-zero eigenvalues of rho-infinity.
  Matrix columns(n, groups.size());
  Vector eigenvalues(groups.size());
  Eigen::Index rank = 0;
  for (const auto& group : groups) {
    Vector projection = Vector::Zero(n);
    for (int col : group.column_indices)
      projection += sd.eigenvectors.col(col) * psibar[col];
    const double mass = projection.squaredNorm();
    if (mass > kFactorRankFloor) {
      columns.col(rank) = projection;
      eigenvalues[rank] = mass;
      ++rank;
    }
  }
  DensityFactor factor;
  factor.columns = columns.leftCols(rank);
  factor.entropy = entropy_of_eigenvalues(eigenvalues.head(rank));
  return factor;
}

DensityFactor density_factor(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("density_factor: eigensolver failed");
  const Vector& eigenvalues = solver.eigenvalues();
  const auto n = rho.rows();
  Matrix columns(n, n);
  Vector kept(n);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eigenvalues[i] > kFactorRankFloor) {
      columns.col(rank) =
          solver.eigenvectors().col(i) * std::sqrt(eigenvalues[i]);
      kept[rank] = eigenvalues[i];
      ++rank;
    }
  }
  DensityFactor factor;
  factor.columns = columns.leftCols(rank);
  factor.entropy = entropy_of_eigenvalues(kept.head(rank));
  return factor;
}

double mixture_entropy(const DensityFactor& a, const DensityFactor& b) {
  const Eigen::Index ra = a.columns.cols();
  const Eigen::Index rb = b.columns.cols();
  if (ra + rb == 0) return 0.0;
  // Nonzero spectrum of (A A^T + B B^T)/2 equals the spectrum of the Gram
  // matrix of M = [A B]/sqrt(2); rows of the shorter factor are zero-padded.
  const Eigen::Index shared = std::min(a.dimension(), b.dimension());
  Matrix gram(ra + rb, ra + rb);
  gram.topLeftCorner(ra, ra) = 0.5 * (a.columns.transpose() * a.columns);
  gram.bottomRightCorner(rb, rb) = 0.5 * (b.columns.transpose() * b.columns);
  const Matrix cross = 0.5 * (a.columns.topRows(shared).transpose() *
                              b.columns.topRows(shared));
  gram.topRightCorner(ra, rb) = cross;
  gram.bottomLeftCorner(rb, ra) = cross.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("mixture_entropy: eigensolver failed");
  return entropy_of_eigenvalues(solver.eigenvalues());
}

double qjsd(const DensityFactor& a, const DensityFactor& b) {
  const double divergence =
      mixture_entropy(a, b) - (a.entropy + b.entropy) / 2.0;
  return std::max(0.0, divergence);
}

}  // namespace haqjsk
