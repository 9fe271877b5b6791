#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "haqjsk/dataset_io.hpp"
#include "haqjsk/kernels.hpp"
#include "haqjsk/manifest.hpp"
#include "haqjsk/svm.hpp"
#include "haqjsk/synthetic.hpp"

namespace fs = std::filesystem;
using namespace haqjsk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string join_args(int argc, char** argv) {
  std::ostringstream out;
  for (int i = 0; i < argc; ++i) {
    if (i) out << ' ';
    out << argv[i];
  }
  return out.str();
}

void configure_jobs(int jobs) {
  if (jobs <= 0) {
    if (const char* env = std::getenv("HAQJSK_JOBS")) jobs = std::atoi(env);
  }
  if (jobs > 0) omp_set_num_threads(jobs);
}

struct ComputeOptions {
  std::string dataset_dir;
  std::string name;
  std::string kernel = "haqjsk-d";
  int levels = 5;
  int prototypes = 256;
  int max_layer = 0;
  std::uint64_t seed = 42;
  double mu = 1.0;
  bool standardize = false;
  bool serial = false;
  int jobs = 0;
  std::string out;
  std::string dump_embeddings;
  std::string dump_alignment;
};

int run_compute(const ComputeOptions& opt, const std::string& command_line) {
  const auto start = Clock::now();
  configure_jobs(opt.jobs);

  KernelConfig cfg;
  cfg.variant = kernel_variant_from_string(opt.kernel);
  cfg.levels = opt.levels;
  cfg.prototypes = opt.prototypes;
  cfg.max_layer = opt.max_layer;
  cfg.seed = opt.seed;
  cfg.mu = opt.mu;
  cfg.standardize = opt.standardize;

  RunManifest manifest;
  manifest.command_line = command_line;
  manifest.dataset_dir = opt.dataset_dir;
  manifest.dataset_name = opt.name;
  manifest.config = cfg;
  StageTimer timer(manifest);

  const TudBundle bundle{fs::path(opt.dataset_dir), opt.name};
  const GraphDataset ds = timer.run("load", [&] {
    manifest.dataset_fingerprint =
        dataset_fingerprint(bundle.directory, bundle.name);
    return load_tud(bundle);
  });

  const Execution exec = opt.serial ? Execution::Serial : Execution::Parallel;
  PipelineTimings timings;
  const KernelMatrix km = compute_kernel_matrix(ds, cfg, exec, &timings);
  timer.record("embeddings", timings.embeddings_s);
  timer.record("prototypes", timings.prototypes_s);
  timer.record("structures", timings.structures_s);
  timer.record("pairwise", timings.pairwise_s);
  timer.record("diagnostics", timings.diagnostics_s);

  const fs::path out_path(opt.out);
  const std::string manifest_name = out_path.filename().string() +
                                    ".manifest.json";
  timer.run("write", [&] {
    write_kernel_matrix(km, out_path, manifest_name);
    if (!opt.dump_embeddings.empty()) {
      const int max_layer =
          cfg.max_layer > 0 ? cfg.max_layer : auto_max_layer(ds);
      EmbeddingTable table = dataset_embeddings(ds, max_layer, exec);
      if (cfg.standardize) table = standardize(table);
      std::ofstream dump(opt.dump_embeddings);
      if (!dump)
        throw std::runtime_error("cannot write " + opt.dump_embeddings);
      write_embedding_table(table, dump);
      manifest.outputs.push_back(opt.dump_embeddings);
    }
    if (!opt.dump_alignment.empty() && cfg.variant != KernelVariant::Qjsu) {
      const int max_layer = km.resolved_max_layer;
      EmbeddingTable table = dataset_embeddings(ds, max_layer, exec);
      if (cfg.standardize) table = standardize(table);
      std::vector<std::vector<PrototypeSet>> hierarchy(max_layer);
      for (int k = 1; k <= max_layer; ++k)
        hierarchy[k - 1] = hierarchical_prototypes(table, k, cfg.prototypes,
                                                   cfg.levels, cfg.seed);
      write_alignment_bundle(hierarchy, cfg, opt.dump_alignment);
      manifest.outputs.push_back(opt.dump_alignment);
    }
  });

  manifest.outputs.insert(manifest.outputs.begin(), opt.out);
  manifest.total_seconds = seconds_since(start);
  write_manifest(manifest, out_path.parent_path() / manifest_name);

  std::cout << "wrote " << opt.out << " (" << ds.graphs.size() << " graphs, "
            << to_string(cfg.variant) << ", H=" << cfg.levels
            << ", M1=" << cfg.prototypes << ", K=" << km.resolved_max_layer
            << ", seed=" << cfg.seed << ")\n"
            << "min eigenvalue " << km.min_eigenvalue << "\n";
  return 0;
}

struct EvalOptions {
  std::string kernel_matrix;
  int folds = 10;
  int repeats = 10;
  std::string c_grid;
  std::uint64_t seed = 42;
  bool shift_psd = false;
  bool serial = false;
  int jobs = 0;
  std::string out;
};

int run_eval(const EvalOptions& opt, const std::string& command_line) {
  const auto start = Clock::now();
  configure_jobs(opt.jobs);

  RunManifest manifest;
  manifest.command_line = command_line;
  StageTimer timer(manifest);

  KernelMatrix km = timer.run("read", [&] {
    return read_kernel_matrix(opt.kernel_matrix);
  });
  manifest.dataset_name = km.dataset_name;
  manifest.config = km.config;

  if (opt.shift_psd) {
    timer.run("shift", [&] {
      const PsdReport report = psd_diagnostics(km);
      if (report.min_eigenvalue < 0.0)
        apply_diagonal_shift(km, report.suggested_shift);
    });
  }

  CvConfig cv;
  cv.folds = opt.folds;
  cv.repeats = opt.repeats;
  cv.seed = opt.seed;
  if (!opt.c_grid.empty()) {
    cv.c_grid.clear();
    std::istringstream grid(opt.c_grid);
    std::string token;
    while (std::getline(grid, token, ','))
      cv.c_grid.push_back(std::stod(token));
  }

  const Execution exec = opt.serial ? Execution::Serial : Execution::Parallel;
  const CvReport report = timer.run("cross-validate", [&] {
    return cross_validate(km, km.labels, cv, exec);
  });

  const fs::path out_path(opt.out);
  const std::string manifest_name = out_path.filename().string() +
                                    ".manifest.json";
  timer.run("write", [&] {
    write_cv_report(report, km, out_path, manifest_name);
  });
  manifest.outputs.push_back(opt.out);
  manifest.total_seconds = seconds_since(start);
  write_manifest(manifest, out_path.parent_path() / manifest_name);

  char line[128];
  std::snprintf(line, sizeof(line), "%.2f+/-%.2f", report.mean_accuracy,
                report.std_error);
  std::cout << km.dataset_name << " " << to_string(km.config.variant) << ": "
            << line << "\n";
  return 0;
}

// Embedded analytic oracles, cheap enough to run on every install. The
// HAQJSK_SELFTEST_TAMPER hook corrupts one expected constant so the harness
// can verify that failures actually propagate.
int run_selftest() {
  const bool tamper = std::getenv("HAQJSK_SELFTEST_TAMPER") != nullptr;
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::cout << (ok ? "[ ok ] " : "[fail] ") << name << "\n";
    if (!ok) ++failures;
  };

  Matrix k2 = Matrix::Zero(2, 2);
  k2(0, 1) = k2(1, 0) = 1.0;
  const Graph g_k2(k2);

  const double ln2 = tamper ? 0.7 : std::log(2.0);

  {
    Matrix expected(2, 2);
    expected << 0.5, 0.5, 0.5, 0.5;
    const Matrix rho = density_matrix_infinite(g_k2);
    check("K2 closed-form density",
          (rho - expected).cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix averaged = density_matrix_time_avg(g_k2, 200.0, 20000);
    check("K2 time-average oracle",
          (rho - averaged).cwiseAbs().maxCoeff() <= 2e-3);
  }
  {
    Matrix pure = Matrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    Matrix mixed = Matrix::Zero(2, 2);
    mixed.diagonal() << 0.5, 0.5;
    Matrix skewed = Matrix::Zero(2, 2);
    skewed.diagonal() << 0.75, 0.25;
    check("pure-state entropy", von_neumann_entropy(pure) == 0.0);
    check("maximally mixed entropy",
          std::abs(von_neumann_entropy(mixed) - ln2) <= 1e-9);
    check("skewed mixture entropy",
          std::abs(von_neumann_entropy(skewed) - 0.5623351446188083) <= 1e-9);
  }
  {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    bool bounds = true, self_zero = true, symmetric = true;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + int(rng() % 7);
      Matrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
      Matrix rho = a.transpose() * a;
      rho = ((rho + rho.transpose()) / 2.0).eval();
      rho /= rho.trace();
      Matrix b(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = gauss(rng);
      Matrix sigma = b.transpose() * b;
      sigma = ((sigma + sigma.transpose()) / 2.0).eval();
      sigma /= sigma.trace();
      const double d = qjsd(rho, sigma);
      bounds = bounds && d >= 0.0 && d <= ln2 + 1e-10;
      self_zero = self_zero && qjsd(rho, rho) <= 1e-10;
      symmetric = symmetric && d == qjsd(sigma, rho);
    }
    check("QJSD bounds", bounds);
    check("QJSD self-divergence", self_zero);
    check("QJSD symmetry", symmetric);
  }
  {
    std::mt19937_64 rng(999);
    const Graph g = random_connected_graph(6, 0.5, rng);
    const Matrix closed = density_matrix_infinite(g);
    const double err_short =
        (closed - density_matrix_time_avg(g, 50.0, 5000)).cwiseAbs().maxCoeff();
    const double err_long =
        (closed - density_matrix_time_avg(g, 500.0, 20000))
            .cwiseAbs()
            .maxCoeff();
    check("time-average convergence", err_long < err_short && err_long <= 5e-3);
  }
  {
    std::mt19937_64 rng(777);
    const GraphDataset ds = random_dataset(4, 4, 7, 0.5, 2, rng);
    KernelConfig cfg;
    cfg.variant = KernelVariant::HaqjskD;
    cfg.levels = 3;
    cfg.prototypes = 8;
    cfg.max_layer = 2;
    const KernelMatrix fast = compute_kernel_matrix(ds, cfg);
    const KernelMatrix reference = compute_kernel_matrix_reference(ds, cfg);
    bool diagonal = true, in_bounds = true;
    for (int i = 0; i < 4; ++i) {
      diagonal = diagonal && fast.values(i, i) == double(cfg.levels);
      for (int j = 0; j < 4; ++j)
        in_bounds = in_bounds && fast.values(i, j) >= cfg.levels / 2.0 - 1e-9 &&
                    fast.values(i, j) <= cfg.levels + 1e-9;
    }
    check("pipeline diagonal", diagonal);
    check("pipeline bounds", in_bounds);
    check("pipeline fast-vs-reference",
          (fast.values - reference.values).cwiseAbs().maxCoeff() <= 1e-10);
  }
  {
    Matrix identity = Matrix::Identity(2, 2);
    const SvmModel model = smo_train(identity, {1, -1}, 10.0);
    const Prediction p0 = predict(model, identity.col(0));
    const Prediction p1 = predict(model, identity.col(1));
    check("SMO separable toy", model.converged && p0.label == 1 &&
                                   p1.label == -1);
  }

  std::cout << (failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: FAILURES\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HAQJSK graph kernels: CTQW density matrices, hierarchical "
               "transitive alignment, QJSD kernels and a precomputed-kernel "
               "SVM evaluation harness"};
  app.require_subcommand(1);

  ComputeOptions compute;
  CLI::App* compute_cmd = app.add_subcommand(
      "compute", "Compute a kernel matrix for a TU-format dataset");
  compute_cmd->add_option("--dataset-dir", compute.dataset_dir,
                          "Directory holding the TU bundle")->required();
  compute_cmd->add_option("--name", compute.name, "Dataset name prefix")
      ->required();
  compute_cmd->add_option("--kernel", compute.kernel,
                          "haqjsk-a | haqjsk-d | qjsu")
      ->check(CLI::IsMember({"haqjsk-a", "haqjsk-d", "qjsu"}));
  compute_cmd->add_option("--levels", compute.levels, "Hierarchy depth H");
  compute_cmd->add_option("--prototypes", compute.prototypes,
                          "Level-1 prototype count M1");
  compute_cmd->add_option("--max-layer", compute.max_layer,
                          "Embedding layers K (0 = auto)");
  compute_cmd->add_option("--seed", compute.seed, "Base seed");
  compute_cmd->add_option("--mu", compute.mu, "QJSU decay factor");
  compute_cmd->add_flag("--standardize-embeddings", compute.standardize,
                        "z-score embeddings before clustering");
  compute_cmd->add_flag("--serial", compute.serial,
                        "Single-threaded schedule");
  compute_cmd->add_option("--jobs", compute.jobs,
                          "Worker cap (HAQJSK_JOBS fallback)");
  compute_cmd->add_option("--dump-embeddings", compute.dump_embeddings,
                          "Optional embedding-table dump path");
  compute_cmd->add_option("--dump-alignment", compute.dump_alignment,
                          "Optional alignment-bundle dump directory");
  compute_cmd->add_option("--out", compute.out, "Kernel matrix output path")
      ->required();

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Cross-validate a precomputed kernel matrix");
  eval_cmd->add_option("--kernel-matrix", eval.kernel_matrix,
                       "Kernel matrix file from 'compute'")->required();
  eval_cmd->add_option("--folds", eval.folds, "Outer folds");
  eval_cmd->add_option("--repeats", eval.repeats, "Experiment repeats");
  eval_cmd->add_option("--c-grid", eval.c_grid,
                       "Comma-separated C values");
  eval_cmd->add_option("--seed", eval.seed, "Fold seed");
  eval_cmd->add_flag("--shift-psd", eval.shift_psd,
                     "Apply the suggested diagonal shift before training");
  eval_cmd->add_flag("--serial", eval.serial, "Single-threaded schedule");
  eval_cmd->add_option("--jobs", eval.jobs, "Worker cap");
  eval_cmd->add_option("--out", eval.out, "CvReport JSON output path")
      ->required();

  CLI::App* selftest_cmd = app.add_subcommand(
      "selftest", "Run the embedded analytic oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (compute_cmd->parsed()) return run_compute(compute, join_args(argc, argv));
    if (eval_cmd->parsed()) return run_eval(eval, join_args(argc, argv));
    if (selftest_cmd->parsed()) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "haqjsk: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
