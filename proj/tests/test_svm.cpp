#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "haqjsk/svm.hpp"
#include "haqjsk/util.hpp"
#include "qp_reference.hpp"
#include "test_helpers.hpp"

using namespace haqjsk;
using namespace haqjsk::testing;

namespace {

std::string g_last_warning;
void capture_warning(const std::string& message) { g_last_warning = message; }

// Linearly separable problem with a planted margin; returns the linear-kernel
// Gram matrix and labels.
struct Problem {
  Matrix kernel;
  std::vector<int> labels;
};

Problem planted_problem(int n, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd w(dim);
  for (int d = 0; d < dim; ++d) w[d] = gauss(rng);
  w.normalize();
  Matrix x(n, dim);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    double score = 0.0;
    do {
      for (int d = 0; d < dim; ++d) x(i, d) = gauss(rng);
      score = x.row(i).dot(w);
    } while (std::abs(score) < 0.3);
    labels[i] = score > 0 ? 1 : -1;
  }
  if (std::count(labels.begin(), labels.end(), 1) == 0) labels[0] = 1;
  if (std::count(labels.begin(), labels.end(), -1) == 0) labels[0] = -1;
  return Problem{x * x.transpose(), labels};
}

KernelMatrix wrap(const Matrix& values) {
  KernelMatrix km;
  km.values = values;
  return km;
}

}  // namespace

TEST_CASE("two separable points with the identity kernel") {
  Matrix kernel = Matrix::Identity(2, 2);
  const std::vector<int> labels = {1, -1};
  const SvmModel model = smo_train(kernel, labels, 10.0);
  CHECK(model.converged);
  REQUIRE(model.support_indices == std::vector<int>{0, 1});
  CHECK(model.dual_coefficients[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(model.dual_coefficients[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(model.bias == doctest::Approx(0.0).epsilon(1e-6));

  const Prediction p0 = predict(model, kernel.col(0));
  const Prediction p1 = predict(model, kernel.col(1));
  CHECK(p0.label == 1);
  CHECK(p1.label == -1);
  // antisymmetric decision values between the two classes
  CHECK(p0.decision_value == doctest::Approx(-p1.decision_value).epsilon(1e-9));
}

TEST_CASE("single-class input is rejected") {
  Matrix kernel = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(smo_train(kernel, {1, 1, 1}, 1.0), std::invalid_argument);
}

TEST_CASE("non-finite kernel entries are rejected") {
  Matrix kernel = Matrix::Identity(2, 2);
  kernel(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(smo_train(kernel, {1, -1}, 1.0), std::invalid_argument);
}

TEST_CASE("iteration cap marks the model unconverged") {
  std::mt19937_64 rng(3);
  const Problem p = planted_problem(12, 3, rng);
  const SvmModel model = smo_train(p.kernel, p.labels, 1.0, 1e-3, 1);
  CHECK_FALSE(model.converged);
}

TEST_CASE("SMO matches the dense QP reference on random problems") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 20;
    const Problem p = planted_problem(n, 3, rng);
    const double c = trial % 2 == 0 ? 1.0 : 10.0;
    const SvmModel model = smo_train(p.kernel, p.labels, c, 1e-6);
    REQUIRE(model.converged);

    std::vector<double> alpha(n, 0.0);
    for (std::size_t s = 0; s < model.support_indices.size(); ++s)
      alpha[model.support_indices[s]] =
          model.dual_coefficients[s] * p.labels[model.support_indices[s]];
    const double smo_objective = svm_dual_objective(p.kernel, p.labels, alpha);

    const QpSolution oracle = qp_reference_solve(p.kernel, p.labels, c);
    const double scale = std::max(1.0, std::abs(oracle.objective));
    CHECK(std::abs(smo_objective - oracle.objective) <= 1e-6 * scale);

    // decision values and predictions on the training points
    for (int i = 0; i < n; ++i) {
      const Prediction mine = predict(model, p.kernel.col(i));
      double oracle_decision = oracle.bias;
      for (int j = 0; j < n; ++j)
        oracle_decision += oracle.alpha[j] * p.labels[j] * p.kernel(j, i);
      CHECK(std::abs(mine.decision_value - oracle_decision) <= 1e-4);
      if (std::abs(oracle_decision) > 1e-3)
        CHECK(mine.label == (oracle_decision > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("free support vectors sit on the margin") {
  std::mt19937_64 rng(11);
  const Problem p = planted_problem(24, 4, rng);
  const double c = 5.0;
  const double tol = 1e-3;
  const SvmModel model = smo_train(p.kernel, p.labels, c, tol);
  REQUIRE(model.converged);
  for (std::size_t s = 0; s < model.support_indices.size(); ++s) {
    const int i = model.support_indices[s];
    const double alpha = model.dual_coefficients[s] * p.labels[i];
    if (alpha < c - 1e-9) {
      const Prediction pred = predict(model, p.kernel.col(i));
      CHECK(pred.label == p.labels[i]);
      CHECK(std::abs(pred.decision_value) >= 1.0 - 10 * tol);
    }
  }
}

TEST_CASE("dual feasibility holds at convergence") {
  std::mt19937_64 rng(13);
  const Problem p = planted_problem(30, 3, rng);
  const double c = 2.0;
  const SvmModel model = smo_train(p.kernel, p.labels, c);
  double balance = 0.0;
  for (std::size_t s = 0; s < model.support_indices.size(); ++s) {
    const double alpha =
        model.dual_coefficients[s] * p.labels[model.support_indices[s]];
    CHECK(alpha >= -1e-12);
    CHECK(alpha <= c + 1e-12);
    balance += model.dual_coefficients[s];
  }
  CHECK(std::abs(balance) <= 1e-9);  // sum alpha_i y_i = 0
}

TEST_CASE("block-diagonal kernel cross-validates at 100 percent") {
  const int n = 20;
  Matrix values = Matrix::Zero(n, n);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = i < n / 2 ? 0 : 1;
    for (int j = 0; j < n; ++j)
      if (labels[i] == (j < n / 2 ? 0 : 1)) values(i, j) = 1.0;
  }
  CvConfig cfg;
  cfg.folds = 5;
  cfg.repeats = 3;
  const CvReport report = cross_validate(wrap(values), labels, cfg);
  CHECK(report.mean_accuracy == doctest::Approx(100.0));
  CHECK(report.std_error == doctest::Approx(0.0));
}

TEST_CASE("random labels score near chance") {
  std::mt19937_64 rng(17);
  const int n = 40;
  const Problem p = planted_problem(n, 3, rng);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % 2;  // balanced, kernel-independent
  std::shuffle(labels.begin(), labels.end(), rng);
  CvConfig cfg;
  cfg.folds = 5;
  cfg.repeats = 4;
  const CvReport report = cross_validate(wrap(p.kernel), labels, cfg);
  CHECK(report.mean_accuracy >= 30.0);
  CHECK(report.mean_accuracy <= 70.0);
}

TEST_CASE("cross-validation is deterministic for a fixed seed") {
  std::mt19937_64 rng(19);
  const Problem p = planted_problem(24, 3, rng);
  std::vector<int> labels(24);
  for (int i = 0; i < 24; ++i) labels[i] = p.labels[i] > 0 ? 1 : 0;
  CvConfig cfg;
  cfg.folds = 4;
  cfg.repeats = 3;
  cfg.seed = 99;
  const CvReport a = cross_validate(wrap(p.kernel), labels, cfg);
  const CvReport b =
      cross_validate(wrap(p.kernel), labels, cfg, Execution::Serial);
  CHECK(a.mean_accuracy == b.mean_accuracy);
  CHECK(a.per_repeat == b.per_repeat);
  CHECK(a.c_selected == b.c_selected);
}

TEST_CASE("accuracy is invariant under consistent class relabeling") {
  std::mt19937_64 rng(23);
  const Problem p = planted_problem(26, 3, rng);
  std::vector<int> labels(26), flipped(26);
  for (int i = 0; i < 26; ++i) {
    labels[i] = p.labels[i] > 0 ? 1 : 0;
    flipped[i] = 1 - labels[i];
  }
  CvConfig cfg;
  cfg.folds = 4;
  cfg.repeats = 2;
  const CvReport a = cross_validate(wrap(p.kernel), labels, cfg);
  const CvReport b = cross_validate(wrap(p.kernel), flipped, cfg);
  CHECK(a.mean_accuracy == b.mean_accuracy);
  CHECK(a.per_repeat == b.per_repeat);
}

TEST_CASE("three-class one-vs-one voting runs and beats chance on separable data") {
  std::mt19937_64 rng(29);
  const int n = 30;
  std::normal_distribution<double> gauss(0.0, 0.3);
  Matrix x(n, 2);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    const int c = i % 3;
    labels[i] = c;
    x(i, 0) = (c == 0 ? -2.0 : c == 1 ? 2.0 : 0.0) + gauss(rng);
    x(i, 1) = (c == 2 ? 2.0 : -1.0) + gauss(rng);
  }
  CvConfig cfg;
  cfg.folds = 5;
  cfg.repeats = 2;
  const CvReport report =
      cross_validate(wrap(x * x.transpose()), labels, cfg);
  CHECK(report.mean_accuracy >= 80.0);
}

TEST_CASE("stratification degrades with a warning when a class is tiny") {
  const WarnHandler previous = set_warn_handler(&capture_warning);
  g_last_warning.clear();
  const int n = 12;
  Matrix values = Matrix::Identity(n, n);
  std::vector<int> labels(n, 0);
  labels[0] = 1;  // one member only
  CvConfig cfg;
  cfg.folds = 4;
  cfg.repeats = 1;
  cfg.c_grid = {1.0};
  const CvReport report = cross_validate(wrap(values), labels, cfg);
  set_warn_handler(previous);
  CHECK(report.per_repeat.size() == 1);
  CHECK(g_last_warning.find("plain shuffling") != std::string::npos);
}

TEST_CASE("label and matrix size mismatch is rejected") {
  CHECK_THROWS_AS(
      cross_validate(wrap(Matrix::Identity(3, 3)), {0, 1}, CvConfig{}),
      std::invalid_argument);
}

TEST_CASE("report bookkeeping: mean over repeats and chosen C per fold") {
  std::mt19937_64 rng(31);
  const Problem p = planted_problem(20, 3, rng);
  std::vector<int> labels(20);
  for (int i = 0; i < 20; ++i) labels[i] = p.labels[i] > 0 ? 1 : 0;
  CvConfig cfg;
  cfg.folds = 4;
  cfg.repeats = 3;
  const CvReport report = cross_validate(wrap(p.kernel), labels, cfg);
  double mean = 0.0;
  for (double a : report.per_repeat) mean += a;
  mean /= report.repeats;
  CHECK(std::abs(mean - report.mean_accuracy) <= 1e-9);
  CHECK(report.c_selected.size() == std::size_t(cfg.folds * cfg.repeats));
  const auto grid = default_c_grid();
  for (double c : report.c_selected)
    CHECK(std::find(grid.begin(), grid.end(), c) != grid.end());
}
