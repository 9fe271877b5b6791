#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "haqjsk/dataset_io.hpp"
#include "haqjsk/kernels.hpp"
#include "haqjsk/synthetic.hpp"
#include "test_helpers.hpp"

using namespace haqjsk;
using namespace haqjsk::testing;

namespace {

GraphDataset two_graphs(const Graph& a, const Graph& b) {
  GraphDataset ds;
  ds.name = "pair";
  ds.class_count = 2;
  ds.graphs.push_back(Graph(a.adjacency(), 0));
  ds.graphs.push_back(Graph(b.adjacency(), 1));
  return ds;
}

KernelConfig small_config(KernelVariant variant) {
  KernelConfig cfg;
  cfg.variant = variant;
  cfg.levels = 2;
  cfg.prototypes = 6;
  cfg.max_layer = 3;
  cfg.seed = 42;
  return cfg;
}

AlignedStructures structures_for(const GraphDataset& ds, int index,
                                 const KernelConfig& cfg) {
  const int max_layer =
      cfg.max_layer > 0 ? cfg.max_layer : auto_max_layer(ds);
  const EmbeddingTable table = dataset_embeddings(ds, max_layer);
  std::vector<std::vector<PrototypeSet>> hierarchy(max_layer);
  for (int k = 1; k <= max_layer; ++k)
    hierarchy[k - 1] = hierarchical_prototypes(table, k, cfg.prototypes,
                                               cfg.levels, cfg.seed);
  return build_aligned_structures(
      ds.graphs[index],
      table.rows.middleRows(table.graph_row_offsets[index],
                            ds.graphs[index].vertex_count()),
      hierarchy, cfg);
}

}  // namespace

TEST_CASE("variant names round trip") {
  for (KernelVariant v : {KernelVariant::HaqjskA, KernelVariant::HaqjskD,
                          KernelVariant::Qjsu})
    CHECK(kernel_variant_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(kernel_variant_from_string("nope"), std::invalid_argument);
}

TEST_CASE("identical graphs give kernel value H") {
  std::mt19937_64 rng(3);
  const Graph g = random_connected_graph(7, 0.4, rng);
  const GraphDataset ds = two_graphs(g, g);
  const KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  const AlignedStructures p = structures_for(ds, 0, cfg);
  const AlignedStructures q = structures_for(ds, 1, cfg);
  CHECK(haqjsk_d(p, q) == double(cfg.levels));
  CHECK(haqjsk_a(p, q) == double(cfg.levels));
}

TEST_CASE("H = 1 with orthogonal pure level densities gives exp(-ln 2) = 0.5") {
  // Hand-built level structures: an edge on slots (0,1) vs an edge on slots
  // (2,3). Both delta densities are pure states on disjoint supports.
  AlignedStructures p, q;
  p.levels = q.levels = 1;
  p.prototypes = q.prototypes = 4;
  p.max_layer = q.max_layer = 1;
  p.seed = q.seed = 0;
  Matrix a_p = Matrix::Zero(4, 4);
  a_p(0, 1) = a_p(1, 0) = 1.0;
  Matrix a_q = Matrix::Zero(4, 4);
  a_q(2, 3) = a_q(3, 2) = 1.0;
  p.adjacency = {a_p};
  q.adjacency = {a_q};
  const DensityMatrix rho_p = density_matrix_infinite(a_p);
  const DensityMatrix rho_q = density_matrix_infinite(a_q);
  p.density = {rho_p};
  q.density = {rho_q};
  CHECK(haqjsk_a(p, q) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(haqjsk_d(p, q) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("kernel values are symmetric in the arguments") {
  std::mt19937_64 rng(5);
  const GraphDataset ds =
      two_graphs(erdos_renyi(6, 0.5, rng), erdos_renyi(8, 0.4, rng));
  const KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  const AlignedStructures p = structures_for(ds, 0, cfg);
  const AlignedStructures q = structures_for(ds, 1, cfg);
  CHECK(haqjsk_d(p, q) == haqjsk_d(q, p));
  CHECK(haqjsk_a(p, q) == haqjsk_a(q, p));
}

TEST_CASE("mismatched builds are rejected listing the differing fields") {
  AlignedStructures p, q;
  p.levels = 2;
  q.levels = 3;
  p.prototypes = q.prototypes = 8;
  p.max_layer = 2;
  q.max_layer = 4;
  p.seed = q.seed = 1;
  try {
    haqjsk_d(p, q);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string message = e.what();
    CHECK(message.find("levels") != std::string::npos);
    CHECK(message.find("max_layer") != std::string::npos);
    CHECK(message.find("prototypes") == std::string::npos);
  }
}

TEST_CASE("relabeling both K2 vertices changes nothing end to end") {
  const Graph base = k2();
  const Graph relabeled = permute_graph(base, {1, 0});
  const GraphDataset ds = two_graphs(base, relabeled);
  KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  cfg.levels = 5;
  cfg.max_layer = 1;
  const KernelMatrix km = compute_kernel_matrix(ds, cfg);
  CHECK(km.values(0, 1) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("full-pipeline permutation invariance on a random pair") {
  std::mt19937_64 rng(7);
  const Graph g = erdos_renyi(8, 0.4, rng);
  const Graph permuted = permute_graph(g, random_permutation(8, rng));
  for (KernelVariant variant :
       {KernelVariant::HaqjskA, KernelVariant::HaqjskD}) {
    const KernelConfig cfg = small_config(variant);
    const KernelMatrix km =
        compute_kernel_matrix(two_graphs(g, permuted), cfg);
    CHECK(std::abs(km.values(0, 1) - cfg.levels) <= 1e-8);
  }
}

TEST_CASE("qjsu baseline: self similarity, decay limit, bounds") {
  std::mt19937_64 rng(11);
  const Graph g = random_connected_graph(6, 0.5, rng);
  CHECK(qjsu(g, g, 1.0) == 1.0);

  const Graph h = random_connected_graph(9, 0.4, rng);
  const double value = qjsu(g, h, 1.0);
  CHECK(value > 0.0);
  CHECK(value <= 1.0);
  CHECK(qjsu(g, h, 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(qjsu(g, h, 0.0), std::invalid_argument);
}

TEST_CASE("qjsu is not permutation invariant: a relabeling changes the value") {
  // path vs paw; search all 24 relabelings of the second graph
  const Graph g_p = from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  const Graph g_q = from_edges(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
  std::vector<int> perm = {0, 1, 2, 3};
  double lowest = 2.0, highest = -1.0;
  do {
    const double value = qjsu(g_p, permute_graph(g_q, perm), 1.0);
    lowest = std::min(lowest, value);
    highest = std::max(highest, value);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(highest - lowest > 1e-6);
}

TEST_CASE("kernel matrix of two identical graphs is constant H") {
  const GraphDataset ds = two_graphs(path3(), path3());
  KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  cfg.levels = 5;
  const KernelMatrix km = compute_kernel_matrix(ds, cfg);
  CHECK(km.values(0, 0) == 5.0);
  CHECK(km.values(1, 1) == 5.0);
  CHECK(km.values(0, 1) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(km.values(1, 0) == km.values(0, 1));
}

TEST_CASE("production matrix equals independently assembled pairwise calls") {
  std::mt19937_64 rng(13);
  const GraphDataset ds = random_dataset(6, 4, 9, 0.4, 2, rng);
  for (KernelVariant variant :
       {KernelVariant::HaqjskA, KernelVariant::HaqjskD}) {
    const KernelConfig cfg = small_config(variant);
    const KernelMatrix km = compute_kernel_matrix(ds, cfg);
    std::vector<AlignedStructures> structures;
    for (int i = 0; i < 6; ++i)
      structures.push_back(structures_for(ds, i, cfg));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const double direct = variant == KernelVariant::HaqjskA
                                  ? haqjsk_a(structures[i], structures[j])
                                  : haqjsk_d(structures[i], structures[j]);
        CHECK(std::abs(km.values(i, j) - direct) <= 1e-10);
      }
  }
}

TEST_CASE("production and reference implementations agree") {
  std::mt19937_64 rng(17);
  const GraphDataset ds = random_dataset(7, 3, 8, 0.45, 2, rng);
  for (KernelVariant variant : {KernelVariant::HaqjskA, KernelVariant::HaqjskD,
                                KernelVariant::Qjsu}) {
    const KernelConfig cfg = small_config(variant);
    const KernelMatrix fast = compute_kernel_matrix(ds, cfg);
    const KernelMatrix reference = compute_kernel_matrix_reference(ds, cfg);
    CHECK(max_abs_diff(fast.values, reference.values) <= 1e-10);
  }
}

TEST_CASE("serial and parallel execution produce bit-identical matrices") {
  std::mt19937_64 rng(19);
  const GraphDataset ds = random_dataset(8, 3, 9, 0.4, 2, rng);
  const KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  const KernelMatrix parallel = compute_kernel_matrix(ds, cfg);
  const KernelMatrix serial =
      compute_kernel_matrix(ds, cfg, Execution::Serial);
  CHECK(max_abs_diff(parallel.values, serial.values) == 0.0);
}

TEST_CASE("repeat runs are bit-identical (determinism)") {
  std::mt19937_64 rng(23);
  const GraphDataset ds = random_dataset(6, 4, 8, 0.4, 2, rng);
  const KernelConfig cfg = small_config(KernelVariant::HaqjskA);
  const KernelMatrix first = compute_kernel_matrix(ds, cfg);
  const KernelMatrix second = compute_kernel_matrix(ds, cfg);
  CHECK(max_abs_diff(first.values, second.values) == 0.0);
}

TEST_CASE("diagonal and bounds invariants on random datasets") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 3; ++trial) {
    const GraphDataset ds = random_dataset(8, 3, 8, 0.4, 2, rng);
    for (KernelVariant variant :
         {KernelVariant::HaqjskA, KernelVariant::HaqjskD}) {
      const KernelConfig cfg = small_config(variant);
      const KernelMatrix km = compute_kernel_matrix(ds, cfg);
      CHECK(km.values == km.values.transpose().eval());
      for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(km.values(i, i) - cfg.levels) <= 1e-9);
        for (int j = 0; j < 8; ++j) {
          CHECK(km.values(i, j) >= cfg.levels / 2.0 - 1e-9);
          CHECK(km.values(i, j) <= cfg.levels + 1e-9);
        }
      }
    }
    const KernelMatrix baseline =
        compute_kernel_matrix(ds, small_config(KernelVariant::Qjsu));
    for (int i = 0; i < 8; ++i) {
      CHECK(baseline.values(i, i) == 1.0);
      for (int j = 0; j < 8; ++j) {
        CHECK(baseline.values(i, j) > 0.0);
        CHECK(baseline.values(i, j) <= 1.0);
      }
    }
  }
}

TEST_CASE("empirical PSD check on a 30-graph dataset") {
  std::mt19937_64 rng(31);
  const GraphDataset ds = random_dataset(30, 3, 9, 0.35, 2, rng);
  KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  const KernelMatrix km = compute_kernel_matrix(ds, cfg);
  const PsdReport report = psd_diagnostics(km);
  CHECK(report.min_eigenvalue >=
        -1e-6 * km.values.cwiseAbs().maxCoeff());
  CHECK(km.min_eigenvalue == report.min_eigenvalue);
}

TEST_CASE("psd diagnostics examples") {
  KernelMatrix identity;
  identity.values = Matrix::Identity(3, 3);
  const PsdReport r1 = psd_diagnostics(identity);
  CHECK(r1.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r1.suggested_shift <= 1e-9);

  KernelMatrix near;
  near.values = Matrix(2, 2);
  near.values << 1.0, 0.999, 0.999, 1.0;
  const PsdReport r2 = psd_diagnostics(near);
  CHECK(r2.min_eigenvalue == doctest::Approx(0.001).epsilon(1e-9));
  CHECK(r2.suggested_shift <= 1e-9);

  KernelMatrix indefinite;
  indefinite.values = Matrix(2, 2);
  indefinite.values << 1.0, 2.0, 2.0, 1.0;
  const PsdReport r3 = psd_diagnostics(indefinite);
  CHECK(r3.min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(r3.suggested_shift == doctest::Approx(1.0 + 1e-10));
  // diagnostics never mutate
  CHECK(indefinite.values(0, 0) == 1.0);
}

TEST_CASE("diagonal shift raises the minimum eigenvalue and is recorded") {
  KernelMatrix km;
  km.values = Matrix(2, 2);
  km.values << 1.0, 2.0, 2.0, 1.0;
  km.min_eigenvalue = psd_diagnostics(km).min_eigenvalue;
  apply_diagonal_shift(km, 1.0 + 1e-10);
  CHECK(km.shift_applied);
  CHECK(psd_diagnostics(km).min_eigenvalue >= -1e-12);
}

TEST_CASE("datasets with fewer than two graphs are rejected") {
  GraphDataset ds;
  ds.name = "one";
  ds.class_count = 1;
  ds.graphs.push_back(Graph(k2().adjacency(), 0));
  CHECK_THROWS_AS(
      compute_kernel_matrix(ds, small_config(KernelVariant::HaqjskD)),
      std::invalid_argument);
}

TEST_CASE("invalid configs are rejected") {
  std::mt19937_64 rng(37);
  const GraphDataset ds = random_dataset(3, 3, 5, 0.5, 2, rng);
  KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  cfg.levels = 0;
  CHECK_THROWS_AS(compute_kernel_matrix(ds, cfg), std::invalid_argument);
  cfg = small_config(KernelVariant::Qjsu);
  cfg.mu = 0.0;
  CHECK_THROWS_AS(compute_kernel_matrix(ds, cfg), std::invalid_argument);
}

TEST_CASE("standardized embeddings stay within the kernel bounds") {
  std::mt19937_64 rng(41);
  const GraphDataset ds = random_dataset(6, 4, 8, 0.4, 2, rng);
  KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  cfg.standardize = true;
  const KernelMatrix km = compute_kernel_matrix(ds, cfg);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      CHECK(km.values(i, j) >= cfg.levels / 2.0 - 1e-9);
      CHECK(km.values(i, j) <= cfg.levels + 1e-9);
    }
}

TEST_CASE("auto max layer is used when the config leaves K at zero") {
  std::mt19937_64 rng(43);
  const GraphDataset ds = random_dataset(4, 4, 7, 0.5, 2, rng);
  KernelConfig cfg = small_config(KernelVariant::HaqjskD);
  cfg.max_layer = 0;
  const KernelMatrix km = compute_kernel_matrix(ds, cfg);
  CHECK(km.resolved_max_layer == auto_max_layer(ds));
}
