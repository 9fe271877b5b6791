#ifndef HAQJSK_CTQW_HPP
#define HAQJSK_CTQW_HPP

#include <Eigen/Dense>

#include "haqjsk/graph.hpp"

namespace haqjsk {

/// Complex amplitudes over the vertex basis, unit norm.
using QuantumState = Eigen::VectorXcd;

/// Real symmetric PSD unit-trace matrix: the time-averaged CTQW mixed state.
using DensityMatrix = Matrix;

/// sqrt of the degree distribution, alpha_u = sqrt(d_u / sum d). Edgeless
/// graphs (sum d = 0) fall back to the uniform state 1/sqrt(n).
QuantumState initial_state(const Graph& g);

/// Phi exp(-i Lambda t) Phi^T applied to the initial state; norm-preserving.
QuantumState evolve_state(const Graph& g, double t);

/// T -> infinity closed form: sum over distinct-eigenvalue groups of the
/// outer products of the initial state's eigenspace projections.
DensityMatrix density_matrix_infinite(const Graph& g);

/// Same closed form on a raw weighted adjacency matrix. Accepts a non-zero
/// diagonal (self-loop weight cancels in L = D - A and counts once in the
/// degree distribution); this is the delta mapping used by the aligned
/// adjacency kernel route.
DensityMatrix density_matrix_infinite(const Matrix& weighted_adjacency);

/// Trapezoidal quadrature of Re(|psi_t><psi_t|) over [0, horizon] with
/// `steps` subintervals, sampling exact spectral-formula states. Test oracle
/// for the closed form, also usable directly.
DensityMatrix density_matrix_time_avg(const Graph& g, double horizon,
                                      int steps);

/// -sum_j lambda_j ln lambda_j in nats; eigenvalues below 1e-12 count as 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// H_N((rho+sigma)/2) - H_N(rho)/2 - H_N(sigma)/2, clamped to >= 0.
/// Throws std::invalid_argument on dimension mismatch (names both sizes).
double qjsd(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Thin factorization rho = W W^T (columns span the non-null eigenspace)
/// plus the cached entropy. Lets pairwise mixture entropies run on an
/// r_p+r_q sized Gram matrix instead of the full state dimension.
struct DensityFactor {
  Matrix columns;        // dimension x rank
  double entropy = 0.0;  // H_N of the factored matrix
  Eigen::Index dimension() const { return columns.rows(); }
};

/// Factor of density_matrix_infinite(weighted_adjacency) built directly from
/// the eigenspace projections (mutually orthogonal, no second eigensolve).
DensityFactor density_factor_infinite(const Matrix& weighted_adjacency);

/// Factor of an arbitrary density matrix via its eigendecomposition,
/// discarding eigenvalues below 1e-12.
DensityFactor density_factor(const DensityMatrix& rho);

/// H_N((rho+sigma)/2) from factors; shorter factors are zero-padded at the
/// bottom, matching the zero-padding rule for unequal graph sizes.
double mixture_entropy(const DensityFactor& a, const DensityFactor& b);

/// qjsd computed from factors; equals the dense overload to ~1e-12.
double qjsd(const DensityFactor& a, const DensityFactor& b);

}  // namespace haqjsk

#endif
