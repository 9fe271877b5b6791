#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "haqjsk/spectral.hpp"
#include "test_helpers.hpp"

using namespace haqjsk;
using namespace haqjsk::testing;

namespace {

Matrix random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  return (a + a.transpose()) / 2.0;
}

}  // namespace

TEST_CASE("K2 Laplacian spectrum is (0, 2)") {
  Matrix l(2, 2);
  l << 1, -1, -1, 1;
  const auto sd = sym_eig(l);
  CHECK(sd.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sd.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("zero matrix decomposes to zero eigenvalues and an orthonormal basis") {
  const auto sd = sym_eig(Matrix::Zero(4, 4));
  CHECK(sd.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_abs_diff(sd.eigenvectors.transpose() * sd.eigenvectors,
                     Matrix::Identity(4, 4)) <= 1e-12);
}

TEST_CASE("diagonal matrix eigenvalues come out sorted") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const auto sd = sym_eig(d);
  CHECK(sd.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(sd.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(sd.eigenvalues[2] == doctest::Approx(3.0));
}

TEST_CASE("reconstruction and orthonormality bounds on random matrices") {
  std::mt19937_64 rng(101);
  // The contract tolerances, exercised across 1e4 random 8x8 draws.
  for (int trial = 0; trial < 10000; ++trial) {
    const Matrix m = random_symmetric(8, rng);
    const auto sd = sym_eig(m);
    const Matrix reconstructed = sd.eigenvectors *
                                 sd.eigenvalues.asDiagonal() *
                                 sd.eigenvectors.transpose();
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    REQUIRE(max_abs_diff(reconstructed, m) <= 1e-8 * scale);
    REQUIRE(max_abs_diff(sd.eigenvectors.transpose() * sd.eigenvectors,
                         Matrix::Identity(8, 8)) <= 1e-8);
  }
}

TEST_CASE("eigenvalues come out non-decreasing") {
  std::mt19937_64 rng(103);
  const auto sd = sym_eig(random_symmetric(12, rng));
  for (int i = 1; i < sd.eigenvalues.size(); ++i)
    CHECK(sd.eigenvalues[i - 1] <= sd.eigenvalues[i]);
}

TEST_CASE("non-symmetric input is rejected with the asymmetry reported") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 0.5;
  try {
    sym_eig(m);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("eigenvalue grouping: examples") {
  SpectralDecomposition sd;
  sd.eigenvalues = Vector(3);

  sd.eigenvalues << 0, 0, 2;
  auto groups = group_eigenvalues(sd, 1e-8);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].column_indices == std::vector<int>{0, 1});
  CHECK(groups[1].column_indices == std::vector<int>{2});

  sd.eigenvalues << 1.0, 1.0 + 5e-9, 3.0;
  groups = group_eigenvalues(sd, 1e-8);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].column_indices == std::vector<int>{0, 1});
  CHECK(groups[1].column_indices == std::vector<int>{2});

  // all-distinct spectrum with a tiny tolerance: one group each
  sd.eigenvalues << 1, 2, 3;
  groups = group_eigenvalues(sd, 1e-15);
  CHECK(groups.size() == 3);
}

TEST_CASE("grouping is idempotent under the same tolerance") {
  std::mt19937_64 rng(107);
  SpectralDecomposition sd;
  sd.eigenvalues = Vector(6);
  sd.eigenvalues << 0, 0, 1e-9, 2, 2 + 2e-9, 5;
  const double tol = 1e-8;
  const auto groups = group_eigenvalues(sd, tol);
  // regroup the representatives: same partition boundaries
  SpectralDecomposition reps;
  reps.eigenvalues = Vector(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i)
    reps.eigenvalues[i] = groups[i].representative_value;
  const auto regrouped = group_eigenvalues(reps, tol);
  CHECK(regrouped.size() == groups.size());
}

TEST_CASE("groups partition all columns within tolerance of the representative") {
  std::mt19937_64 rng(109);
  const auto sd = sym_eig(random_symmetric(10, rng));
  const double tol = default_grouping_tolerance(sd);
  const auto groups = group_eigenvalues(sd, tol);
  int total = 0;
  for (const auto& g : groups) {
    for (int col : g.column_indices) {
      CHECK(std::abs(sd.eigenvalues[col] - g.representative_value) <= tol);
      ++total;
    }
  }
  CHECK(total == 10);
}

TEST_CASE("grouping rejects non-positive tolerance") {
  SpectralDecomposition sd;
  sd.eigenvalues = Vector::Zero(2);
  CHECK_THROWS_AS(group_eigenvalues(sd, 0.0), std::invalid_argument);
}
