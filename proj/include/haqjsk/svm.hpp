#ifndef HAQJSK_SVM_HPP
#define HAQJSK_SVM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "haqjsk/kernels.hpp"

namespace haqjsk {

struct SvmModel {
  std::vector<int> support_indices;        // rows with alpha > 0
  std::vector<double> dual_coefficients;   // alpha_i * y_i, same order
  double bias = 0.0;
  std::pair<int, int> class_pair{0, 1};
  bool converged = true;
};

/// Two-variable SMO for the C-SVM dual on a precomputed kernel submatrix.
/// Maximal-violating-pair working set with lowest-index tie-breaks, so the
/// solve is deterministic. labels must be +/-1 with both classes present.
/// Throws on non-finite kernel entries; exceeding max_passes pair updates
/// sets converged = false.
SvmModel smo_train(const Matrix& kernel, const std::vector<int>& labels,
                   double c, double tol = 1e-3, int max_passes = 100000);

struct Prediction {
  int label = 0;          // +/-1
  double decision_value = 0.0;
};

/// sign(sum_i alpha_i y_i K(x_i, .) + b); kernel_row holds the kernel values
/// against every training row.
Prediction predict(const SvmModel& model, const Vector& kernel_row);

/// 0.5 a^T Q a - sum(a) with Q_ij = y_i y_j K_ij; the quantity SMO
/// minimizes, shared with the test oracle for objective comparison.
double svm_dual_objective(const Matrix& kernel, const std::vector<int>& labels,
                          const std::vector<double>& alpha);

std::vector<double> default_c_grid();

struct CvConfig {
  int folds = 10;
  int repeats = 10;
  std::vector<double> c_grid = default_c_grid();
  std::uint64_t seed = 42;
};

struct CvReport {
  double mean_accuracy = 0.0;  // percent
  double std_error = 0.0;      // percent, sample std over repeats / sqrt(repeats)
  std::vector<double> per_repeat;  // percent per repeat
  std::vector<double> c_selected;  // chosen C per outer fold, repeats*folds entries
  std::uint64_t fold_seed = 0;
  int folds = 0;
  int repeats = 0;
};

/// Repeated stratified k-fold cross-validation with per-fold inner 5-fold
/// C selection from the grid and one-vs-one voting for multiclass problems.
/// Stratification degrades to plain shuffling (with a warning) when a class
/// has fewer members than folds. Deterministic for a fixed seed.
CvReport cross_validate(const KernelMatrix& km, const std::vector<int>& labels,
                        const CvConfig& cfg,
                        Execution exec = Execution::Parallel);

}  // namespace haqjsk

#endif
