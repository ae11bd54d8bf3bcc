#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace padben {

// Labeled set of row vectors (n x d), e.g. one text category or one
// paraphrase iteration.
struct EmbeddingSet {
  std::string tag;
  Eigen::MatrixXd vectors;
};

enum class Metric { cosine, euclidean, manhattan };
std::string to_string(Metric m);
Metric metric_from_string(const std::string& name);

// 1 - u.v / (|u||v|); raises on zero vectors or dimension mismatch.
double cosine_dist(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
double euclidean_dist(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
double manhattan_dist(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
double distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v, Metric m);

// Mean of the metric over the full |A| x |B| cross product.
double pairwise_mean_distance(const EmbeddingSet& a, const EmbeddingSet& b, Metric m);

Eigen::VectorXd centroid(const Eigen::MatrixXd& vectors);

// Ordered centroids with per-step drift; total_drift is the sum of step
// norms under the trajectory's metric.
struct Trajectory {
  std::string tag;
  std::vector<Eigen::VectorXd> centroids;
  std::vector<double> drifts;
  double total_drift = 0.0;
};

// Per-step distances between consecutive centroids (length >= 2 required).
std::vector<double> sequential_drift(const std::vector<Eigen::VectorXd>& centroids, Metric m);

Trajectory make_trajectory(const std::string& tag, std::vector<Eigen::VectorXd> centroids,
                           Metric m = Metric::euclidean);

// --- k-means ----------------------------------------------------------------

struct KMeansResult {
  std::vector<int> assignments;
  Eigen::MatrixXd centroids;  // k x d
  double inertia = 0.0;       // within-cluster sum of squares
  int iterations = 0;
  std::vector<double> inertia_history;  // after each Lloyd step
};

// Lloyd's algorithm with seeded k-means++ initialization, `restarts` restarts
// keeping the lowest inertia, run to assignment fixpoint or max_iter.
KMeansResult kmeans(const Eigen::MatrixXd& X, int k, std::uint64_t seed, int restarts = 10,
                    int max_iter = 300);

// --- PCA --------------------------------------------------------------------

struct Pca2Result {
  Eigen::MatrixXd projected;    // n x 2
  Eigen::MatrixXd components;   // 2 x d, orthonormal rows
  Eigen::Vector2d explained_variance_ratio;
  Eigen::VectorXd column_means;  // standardization parameters
  Eigen::VectorXd column_scales;
};

// Z-score standardization (population sd; constant columns map to zero), then
// projection onto the top-2 principal components. Components are oriented so
// the largest-magnitude loading is positive.
Pca2Result pca2(const Eigen::MatrixXd& X);

// --- Trajectory analysis ------------------------------------------------------

struct TrajectoryAnalysis {
  Pca2Result pca;
  std::vector<Trajectory> trajectories;  // one per type, centroids in PCA space
};

// Pools every iteration of every type, standardizes and fits one shared PCA,
// then tracks per-iteration centroids in PCA space. Total drift per type is
// the sum of Euclidean step lengths. Each type needs >= 2 iterations.
TrajectoryAnalysis trajectory_analysis(
    const std::map<std::string, std::vector<EmbeddingSet>>& iterations_by_type);

// k x T contingency counts of cluster assignment vs true category index.
std::vector<std::vector<int>> cluster_type_matrix(const std::vector<int>& assignments,
                                                  const std::vector<int>& true_types);

}  // namespace padben
