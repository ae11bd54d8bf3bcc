#include "padben/repspace.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "padben/error.hpp"
#include "padben/rng.hpp"

namespace padben {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::cosine: return "cosine";
    case Metric::euclidean: return "euclidean";
    case Metric::manhattan: return "manhattan";
  }
  return "?";
}

Metric metric_from_string(const std::string& name) {
  if (name == "cosine") return Metric::cosine;
  if (name == "euclidean") return Metric::euclidean;
  if (name == "manhattan") return Metric::manhattan;
  raise(ErrorCode::invalid_argument, "unknown metric: " + name);
}

namespace {

void check_dims(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) {
    raise(ErrorCode::invalid_argument, "dimension mismatch: " + std::to_string(u.size()) + " vs " +
                                           std::to_string(v.size()));
  }
}

}  // namespace

double cosine_dist(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  check_dims(u, v);
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) raise(ErrorCode::degenerate, "cosine_dist: zero vector");
  return 1.0 - u.dot(v) / (nu * nv);
}

double euclidean_dist(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  check_dims(u, v);
  return (u - v).norm();
}

double manhattan_dist(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  check_dims(u, v);
  return (u - v).lpNorm<1>();
}

double distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v, Metric m) {
  switch (m) {
    case Metric::cosine: return cosine_dist(u, v);
    case Metric::euclidean: return euclidean_dist(u, v);
    case Metric::manhattan: return manhattan_dist(u, v);
  }
  raise(ErrorCode::invalid_argument, "unknown metric");
}

double pairwise_mean_distance(const EmbeddingSet& a, const EmbeddingSet& b, Metric m) {
  if (a.vectors.rows() == 0 || b.vectors.rows() == 0) {
    raise(ErrorCode::invalid_argument, "pairwise_mean_distance: empty set");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.vectors.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.vectors.rows(); ++j) {
      sum += distance(a.vectors.row(i), b.vectors.row(j), m);
    }
  }
  return sum / (static_cast<double>(a.vectors.rows()) * static_cast<double>(b.vectors.rows()));
}

Eigen::VectorXd centroid(const Eigen::MatrixXd& vectors) {
  if (vectors.rows() == 0) raise(ErrorCode::invalid_argument, "centroid: empty set");
  return vectors.colwise().mean();
}

std::vector<double> sequential_drift(const std::vector<Eigen::VectorXd>& centroids, Metric m) {
  if (centroids.size() < 2) {
    raise(ErrorCode::invalid_argument, "sequential_drift: need at least 2 centroids");
  }
  std::vector<double> drifts;
  drifts.reserve(centroids.size() - 1);
  for (std::size_t i = 0; i + 1 < centroids.size(); ++i) {
    drifts.push_back(distance(centroids[i], centroids[i + 1], m));
  }
  return drifts;
}

Trajectory make_trajectory(const std::string& tag, std::vector<Eigen::VectorXd> centroids,
                           Metric m) {
  Trajectory t;
  t.tag = tag;
  t.centroids = std::move(centroids);
  t.drifts = sequential_drift(t.centroids, m);
  t.total_drift = 0.0;
  for (double d : t.drifts) t.total_drift += d;
  return t;
}

namespace {

double wcss(const Eigen::MatrixXd& X, const std::vector<int>& assignments,
            const Eigen::MatrixXd& centroids) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    total += (X.row(i) - centroids.row(assignments[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

// k-means++ seeding: first center uniform, then D^2-weighted picks.
Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& X, int k, Rng& rng) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd centers(k, X.cols());
  centers.row(0) = X.row(static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2(n);
  for (int c = 1; c < k; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < c; ++j) best = std::min(best, (X.row(i) - centers.row(j)).squaredNorm());
      d2(i) = best;
    }
    const double total = d2.sum();
    if (total <= 0.0) {
      centers.row(c) = X.row(static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n))));
      continue;
    }
    double u = rng.next_double() * total;
    Eigen::Index pick = n - 1;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += d2(i);
      if (u < acc) {
        pick = i;
        break;
      }
    }
    centers.row(c) = X.row(pick);
  }
  return centers;
}

KMeansResult lloyd(const Eigen::MatrixXd& X, int k, Rng& rng, int max_iter) {
  const Eigen::Index n = X.rows();
  KMeansResult result;
  result.centroids = kmeanspp_init(X, k, rng);
  result.assignments.assign(static_cast<std::size_t>(n), -1);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (X.row(i) - result.centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (X.row(i) - result.centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (result.assignments[static_cast<std::size_t>(i)] != best) {
        result.assignments[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    // Recompute centers; empty clusters keep their previous position.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(result.assignments[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[static_cast<std::size_t>(result.assignments[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        result.centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      }
    }
    result.iterations = iter + 1;
    result.inertia_history.push_back(wcss(X, result.assignments, result.centroids));
    if (!changed) break;  // assignment fixpoint
  }
  result.inertia = wcss(X, result.assignments, result.centroids);
  return result;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& X, int k, std::uint64_t seed, int restarts,
                    int max_iter) {
  if (k < 1) raise(ErrorCode::invalid_argument, "kmeans: k must be >= 1");
  if (X.rows() < k) {
    raise(ErrorCode::invalid_argument, "kmeans: need at least k points (" + std::to_string(X.rows()) +
                                           " < " + std::to_string(k) + ")");
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    Rng rng(derive_stream(seed, {kStreamAnalysis, 1, static_cast<std::uint64_t>(r)}));
    KMeansResult candidate = lloyd(X, k, rng, max_iter);
    if (candidate.inertia < best.inertia) best = std::move(candidate);
  }
  return best;
}

Pca2Result pca2(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows(), d = X.cols();
  if (n < 2) raise(ErrorCode::invalid_argument, "pca2: need at least 2 rows");
  if (d < 2) raise(ErrorCode::invalid_argument, "pca2: need at least 2 columns");

  Pca2Result result;
  result.column_means = X.colwise().mean();
  Eigen::MatrixXd Z = X.rowwise() - result.column_means.transpose();
  result.column_scales.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double sd = std::sqrt(Z.col(j).squaredNorm() / static_cast<double>(n));
    result.column_scales(j) = sd;
    if (sd > 0.0) {
      Z.col(j) /= sd;
    } else {
      Z.col(j).setZero();  // constant column
    }
  }

  const Eigen::MatrixXd cov = (Z.transpose() * Z) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) raise(ErrorCode::internal, "pca2: eigendecomposition failed");

  const Eigen::VectorXd& evals = eig.eigenvalues();  // ascending
  double total_var = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) total_var += std::max(evals(j), 0.0);

  result.components.resize(2, d);
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd comp = eig.eigenvectors().col(d - 1 - c);
    // Sign convention: largest-magnitude loading is positive.
    Eigen::Index arg_max = 0;
    comp.cwiseAbs().maxCoeff(&arg_max);
    if (comp(arg_max) < 0.0) comp = -comp;
    result.components.row(c) = comp.transpose();
    result.explained_variance_ratio(c) =
        total_var > 0.0 ? std::max(evals(d - 1 - c), 0.0) / total_var : 0.0;
  }
  result.projected = Z * result.components.transpose();
  return result;
}

TrajectoryAnalysis trajectory_analysis(
    const std::map<std::string, std::vector<EmbeddingSet>>& iterations_by_type) {
  if (iterations_by_type.empty()) {
    raise(ErrorCode::invalid_argument, "trajectory_analysis: no types");
  }
  Eigen::Index total_rows = 0, dim = -1;
  for (const auto& [tag, sets] : iterations_by_type) {
    if (sets.size() < 2) {
      raise(ErrorCode::invalid_argument, "trajectory_analysis: type '" + tag +
                                             "' needs at least 2 iterations");
    }
    for (const auto& set : sets) {
      if (dim < 0) dim = set.vectors.cols();
      if (set.vectors.cols() != dim) {
        raise(ErrorCode::invalid_argument, "trajectory_analysis: inconsistent dimensions");
      }
      total_rows += set.vectors.rows();
    }
  }

  Eigen::MatrixXd pooled(total_rows, dim);
  Eigen::Index offset = 0;
  for (const auto& [tag, sets] : iterations_by_type) {
    for (const auto& set : sets) {
      pooled.middleRows(offset, set.vectors.rows()) = set.vectors;
      offset += set.vectors.rows();
    }
  }

  TrajectoryAnalysis analysis;
  analysis.pca = pca2(pooled);

  offset = 0;
  for (const auto& [tag, sets] : iterations_by_type) {
    std::vector<Eigen::VectorXd> centroids;
    centroids.reserve(sets.size());
    for (const auto& set : sets) {
      centroids.push_back(centroid(analysis.pca.projected.middleRows(offset, set.vectors.rows())));
      offset += set.vectors.rows();
    }
    analysis.trajectories.push_back(make_trajectory(tag, std::move(centroids), Metric::euclidean));
  }
  return analysis;
}

std::vector<std::vector<int>> cluster_type_matrix(const std::vector<int>& assignments,
                                                  const std::vector<int>& true_types) {
  if (assignments.size() != true_types.size()) {
    raise(ErrorCode::invalid_argument, "cluster_type_matrix: length mismatch");
  }
  int k = 0, t = 0;
  for (int a : assignments) k = std::max(k, a + 1);
  for (int y : true_types) t = std::max(t, y + 1);
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(k),
                                       std::vector<int>(static_cast<std::size_t>(t), 0));
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] < 0 || true_types[i] < 0) {
      raise(ErrorCode::invalid_argument, "cluster_type_matrix: negative index");
    }
    ++counts[static_cast<std::size_t>(assignments[i])][static_cast<std::size_t>(true_types[i])];
  }
  return counts;
}

}  // namespace padben
