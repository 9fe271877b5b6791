#include "haqjsk/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "haqjsk/util.hpp"

namespace haqjsk {

namespace {

constexpr double kTau = 1e-12;

struct WorkingSet {
  int i = -1;
  int j = -1;
  double violation = 0.0;  // m(alpha) - M(alpha)
};

// Maximal violating pair over I_up / I_low with lowest-index tie-breaks.
WorkingSet select_working_set(const std::vector<double>& alpha,
                              const std::vector<double>& gradient,
                              const std::vector<int>& y, double c) {
  const int n = static_cast<int>(alpha.size());
  WorkingSet ws;
  double m = -std::numeric_limits<double>::infinity();
  double big_m = std::numeric_limits<double>::infinity();
  for (int t = 0; t < n; ++t) {
    const double value = -y[t] * gradient[t];
    const bool in_up = (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
    const bool in_low =
        (y[t] < 0 && alpha[t] < c) || (y[t] > 0 && alpha[t] > 0);
    if (in_up && value > m) {
      m = value;
      ws.i = t;
    }
    if (in_low && value < big_m) {
      big_m = value;
      ws.j = t;
    }
  }
  ws.violation = m - big_m;
  return ws;
}

}  // namespace

SvmModel smo_train(const Matrix& kernel, const std::vector<int>& labels,
                   double c, double tol, int max_passes) {
  const int n = static_cast<int>(labels.size());
  if (kernel.rows() != n || kernel.cols() != n)
    throw std::invalid_argument("smo_train: kernel/label size mismatch");
  if (!(c > 0.0)) throw std::invalid_argument("smo_train: C must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("smo_train: tol must be > 0");
  if (!kernel.allFinite())
    throw std::invalid_argument("smo_train: non-finite kernel entries");
  int positives = 0, negatives = 0;
  for (int label : labels) {
    if (label == 1) ++positives;
    else if (label == -1) ++negatives;
    else throw std::invalid_argument("smo_train: labels must be +/-1");
  }
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument("smo_train: both classes must be present");

  std::vector<double> alpha(n, 0.0);
  std::vector<double> gradient(n, -1.0);  // d/dalpha of 0.5 a^T Q a - e^T a
  auto q = [&](int a, int b) { return labels[a] * labels[b] * kernel(a, b); };

  SvmModel model;
  model.converged = false;
  for (int pass = 0; pass < max_passes; ++pass) {
    const WorkingSet ws = select_working_set(alpha, gradient, labels, c);
    if (ws.violation <= tol) {
      model.converged = true;
      break;
    }
    const int i = ws.i;
    const int j = ws.j;
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (labels[i] != labels[j]) {
      double quad = kernel(i, i) + kernel(j, j) + 2.0 * kernel(i, j) *
                        labels[i] * labels[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-gradient[i] - gradient[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      double quad = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j) *
                        labels[i] * labels[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (gradient[i] - gradient[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }
    const double delta_i = alpha[i] - old_ai;
    const double delta_j = alpha[j] - old_aj;
    for (int t = 0; t < n; ++t)
      gradient[t] += q(t, i) * delta_i + q(t, j) * delta_j;
  }

  // rho from the KKT conditions: free vectors average, bound midpoint
  // fallback when none are free.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (int t = 0; t < n; ++t) {
    const double yg = labels[t] * gradient[t];
    if (alpha[t] >= c) {
      if (labels[t] < 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0) {
      if (labels[t] > 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho =
      free_count > 0 ? free_sum / free_count : (upper + lower) / 2.0;
  model.bias = -rho;
  for (int t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_indices.push_back(t);
      model.dual_coefficients.push_back(alpha[t] * labels[t]);
    }
  }
  return model;
}

Prediction predict(const SvmModel& model, const Vector& kernel_row) {
  double decision = model.bias;
  for (std::size_t s = 0; s < model.support_indices.size(); ++s)
    decision += model.dual_coefficients[s] * kernel_row[model.support_indices[s]];
  return Prediction{decision >= 0.0 ? 1 : -1, decision};
}

double svm_dual_objective(const Matrix& kernel, const std::vector<int>& labels,
                          const std::vector<double>& alpha) {
  const int n = static_cast<int>(labels.size());
  double quadratic = 0.0;
  for (int i = 0; i < n; ++i) {
    if (alpha[i] == 0.0) continue;
    for (int j = 0; j < n; ++j)
      quadratic += alpha[i] * alpha[j] * labels[i] * labels[j] * kernel(i, j);
  }
  return 0.5 * quadratic - std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

std::vector<double> default_c_grid() {
  return {1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3, 1e4};
}

namespace {

// Fold id per row. Stratified when every non-empty class has >= folds
// members, otherwise a warned fallback to plain shuffling. One global
// shuffle with per-class round-robin counters keeps the assignment
// invariant under consistent relabeling of classes.
std::vector<int> make_folds(const std::vector<int>& labels, int folds,
                            std::mt19937_64& rng, bool warn_on_degrade) {
  const int n = static_cast<int>(labels.size());
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> class_size(classes, 0);
  for (int label : labels) ++class_size[label];
  bool stratify = true;
  for (int size : class_size)
    if (size > 0 && size < folds) stratify = false;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<int> fold_of(n, 0);
  if (!stratify) {
    if (warn_on_degrade)
      warn("cross_validate: a class has fewer members than folds; "
           "falling back to plain shuffling");
    for (int i = 0; i < n; ++i) fold_of[order[i]] = i % folds;
    return fold_of;
  }
  std::vector<int> counter(classes, 0);
  for (int idx : order) fold_of[idx] = counter[labels[idx]]++ % folds;
  return fold_of;
}

struct OvoModel {
  int class_a = 0;
  int class_b = 0;
  std::vector<int> rows;  // global kernel-row ids of the training subset
  SvmModel svm;
};

std::vector<OvoModel> train_one_vs_one(const Matrix& kernel,
                                       const std::vector<int>& labels,
                                       const std::vector<int>& train,
                                       int classes, double c) {
  std::vector<OvoModel> models;
  for (int a = 0; a < classes; ++a) {
    for (int b = a + 1; b < classes; ++b) {
      OvoModel m;
      m.class_a = a;
      m.class_b = b;
      std::vector<int> pm;
      for (int row : train) {
        if (labels[row] == a || labels[row] == b) {
          m.rows.push_back(row);
          pm.push_back(labels[row] == a ? 1 : -1);
        }
      }
      const bool has_both =
          std::find(pm.begin(), pm.end(), 1) != pm.end() &&
          std::find(pm.begin(), pm.end(), -1) != pm.end();
      if (!has_both) continue;  // this fold saw only one of the two classes
      const int t = static_cast<int>(m.rows.size());
      Matrix sub(t, t);
      for (int r = 0; r < t; ++r)
        for (int s = 0; s < t; ++s) sub(r, s) = kernel(m.rows[r], m.rows[s]);
      m.svm = smo_train(sub, pm, c);
      models.push_back(std::move(m));
    }
  }
  return models;
}

int vote(const std::vector<OvoModel>& models, const Matrix& kernel,
         int classes, int row) {
  std::vector<int> votes(classes, 0);
  std::vector<double> margin(classes, 0.0);
  for (const auto& m : models) {
    Vector k_row(m.rows.size());
    for (std::size_t r = 0; r < m.rows.size(); ++r)
      k_row[r] = kernel(m.rows[r], row);
    const Prediction p = predict(m.svm, k_row);
    ++votes[p.label > 0 ? m.class_a : m.class_b];
    margin[m.class_a] += p.decision_value;
    margin[m.class_b] -= p.decision_value;
  }
  // most votes; vote ties fall back to the aggregated signed margins (which
  // permute with the classes), then to the smallest id
  int best = 0;
  for (int c = 1; c < classes; ++c) {
    if (votes[c] > votes[best] ||
        (votes[c] == votes[best] && margin[c] > margin[best]))
      best = c;
  }
  return best;
}

double select_c(const Matrix& kernel, const std::vector<int>& labels,
                const std::vector<int>& train, int classes,
                const std::vector<double>& grid, std::mt19937_64& rng) {
  if (grid.size() == 1) return grid.front();
  constexpr int kInnerFolds = 5;
  std::vector<int> train_labels;
  train_labels.reserve(train.size());
  for (int row : train) train_labels.push_back(labels[row]);
  const int inner_folds =
      std::min<int>(kInnerFolds, static_cast<int>(train.size()));
  const std::vector<int> fold_of =
      make_folds(train_labels, inner_folds, rng, /*warn_on_degrade=*/false);

  double best_c = grid.front();
  int best_correct = -1;
  for (double c : grid) {  // grid is ascending, so ties pick the smaller C
    int correct = 0;
    for (int f = 0; f < inner_folds; ++f) {
      std::vector<int> inner_train;
      std::vector<int> inner_test;
      for (std::size_t t = 0; t < train.size(); ++t)
        (fold_of[t] == f ? inner_test : inner_train).push_back(train[t]);
      if (inner_train.empty() || inner_test.empty()) continue;
      const auto models =
          train_one_vs_one(kernel, labels, inner_train, classes, c);
      for (int row : inner_test)
        if (vote(models, kernel, classes, row) == labels[row]) ++correct;
    }
    if (correct > best_correct) {
      best_correct = correct;
      best_c = c;
    }
  }
  return best_c;
}

}  // namespace

CvReport cross_validate(const KernelMatrix& km, const std::vector<int>& labels,
                        const CvConfig& cfg, Execution exec) {
  const int n = static_cast<int>(labels.size());
  if (km.values.rows() != n) {
    std::ostringstream msg;
    msg << "cross_validate: " << labels.size() << " labels for a "
        << km.values.rows() << "x" << km.values.cols() << " kernel matrix";
    throw std::invalid_argument(msg.str());
  }
  if (cfg.folds < 2)
    throw std::invalid_argument("cross_validate: folds must be >= 2");
  if (cfg.repeats < 1)
    throw std::invalid_argument("cross_validate: repeats must be >= 1");
  if (cfg.c_grid.empty())
    throw std::invalid_argument("cross_validate: empty C grid");
  for (int label : labels)
    if (label < 0)
      throw std::invalid_argument("cross_validate: unlabeled graph present");
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  const int folds = std::min(cfg.folds, n);
  CvConfig sorted_cfg = cfg;
  std::sort(sorted_cfg.c_grid.begin(), sorted_cfg.c_grid.end());

  CvReport report;
  report.folds = folds;
  report.repeats = cfg.repeats;
  report.fold_seed = cfg.seed;
  report.per_repeat.resize(cfg.repeats);
  std::vector<std::vector<double>> c_per_repeat(cfg.repeats);

  const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int r = 0; r < cfg.repeats; ++r) {
    std::mt19937_64 fold_rng(substream_seed(cfg.seed, "cv-folds", r));
    const std::vector<int> fold_of = make_folds(labels, folds, fold_rng, true);
    int correct = 0;
    std::vector<double> chosen(folds, 0.0);
    for (int f = 0; f < folds; ++f) {
      std::vector<int> train;
      std::vector<int> test;
      for (int i = 0; i < n; ++i)
        (fold_of[i] == f ? test : train).push_back(i);
      if (test.empty()) continue;
      std::mt19937_64 inner_rng(substream_seed(
          cfg.seed, "cv-inner", std::uint64_t(r) * folds + f));
      const double c = select_c(km.values, labels, train, classes,
                                sorted_cfg.c_grid, inner_rng);
      chosen[f] = c;
      const auto models =
          train_one_vs_one(km.values, labels, train, classes, c);
      for (int row : test)
        if (vote(models, km.values, classes, row) == labels[row]) ++correct;
    }
    report.per_repeat[r] = 100.0 * correct / n;
    c_per_repeat[r] = std::move(chosen);
  }

  for (auto& chosen : c_per_repeat)
    report.c_selected.insert(report.c_selected.end(), chosen.begin(),
                             chosen.end());
  const double mean =
      std::accumulate(report.per_repeat.begin(), report.per_repeat.end(),
                      0.0) /
      cfg.repeats;
  double variance = 0.0;
  for (double a : report.per_repeat) variance += (a - mean) * (a - mean);
  variance = cfg.repeats > 1 ? variance / (cfg.repeats - 1) : 0.0;
  report.mean_accuracy = mean;
  report.std_error = std::sqrt(variance) / std::sqrt(double(cfg.repeats));
  return report;
}

}  // namespace haqjsk
