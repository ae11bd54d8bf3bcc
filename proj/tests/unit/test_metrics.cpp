#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "padben/error.hpp"
#include "padben/metrics.hpp"
#include "padben/rng.hpp"

using namespace padben;

namespace {

// O(n^2) pairwise concordance oracle, ties counted in half-units so the
// result is exact.
double auroc_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
  unsigned long long num_x2 = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) num_x2 += 2;
      else if (scores[i] == scores[j]) num_x2 += 1;
    }
  }
  return static_cast<double>(num_x2) / (2.0 * static_cast<double>(pairs));
}

// Exhaustive threshold-sweep oracle over every distinct score value.
double tpr_oracle(const std::vector<double>& scores, const std::vector<int>& labels,
                  double fpr_cap) {
  std::vector<double> thresholds = scores;
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(thresholds.empty() ? 0.0 : thresholds.front() - 1.0);

  std::size_t n_pos = 0, n_neg = 0;
  for (int label : labels) (label == 1 ? n_pos : n_neg) += 1;
  double best = 0.0;
  for (double t : thresholds) {
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] > t) (labels[i] == 1 ? tp : fp) += 1;
    }
    const double fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
    const double tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
    if (fpr <= fpr_cap) best = std::max(best, tpr);
  }
  return best;
}

struct RandomInstance {
  std::vector<double> scores;
  std::vector<int> labels;
};

RandomInstance random_instance(Rng& rng, std::size_t max_n) {
  RandomInstance inst;
  const std::size_t n = 2 + rng.next_below(max_n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Quantized scores force plenty of ties.
    inst.scores.push_back(static_cast<double>(rng.next_below(20)) / 10.0);
    inst.labels.push_back(static_cast<int>(rng.next_below(2)));
  }
  // Guarantee both classes.
  inst.labels[0] = 0;
  inst.labels[n - 1] = 1;
  return inst;
}

}  // namespace

TEST_CASE("auroc on the four canonical examples") {
  CHECK(auroc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}) == 1.0);
  CHECK(auroc({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}) == 0.0);
  CHECK(auroc({0.5, 0.5}, {0, 1}) == 0.5);
  CHECK(auroc({1.0, 2.0, 1.5, 3.0}, {0, 1, 0, 1}) == doctest::Approx(auroc_oracle(
            {1.0, 2.0, 1.5, 3.0}, {0, 1, 0, 1})));
}

TEST_CASE("single-class input has no auroc") {
  CHECK_THROWS_WITH_AS(auroc({0.1, 0.2}, {1, 1}), doctest::Contains("undefined AUROC"), Error);
  CHECK_THROWS_AS(auroc({0.1, 0.2}, {0, 0}), Error);
  CHECK_THROWS_AS(auroc({0.1}, {0, 1}), Error);
}

TEST_CASE("auroc equals the concordance oracle exactly on random instances") {
  Rng rng(424242);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = random_instance(rng, 120);
    CHECK(auroc(inst.scores, inst.labels) == auroc_oracle(inst.scores, inst.labels));
  }
}

TEST_CASE("auroc complements under score negation without ties") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 30; ++i) {
      scores.push_back(rng.next_double());  // continuous, ties have measure zero
      labels.push_back(static_cast<int>(rng.next_below(2)));
    }
    labels[0] = 0;
    labels[1] = 1;
    std::vector<double> negated;
    for (double s : scores) negated.push_back(-s);
    CHECK(auroc(scores, labels) + auroc(negated, labels) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("auroc is invariant under strictly increasing transforms") {
  Rng rng(8);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    scores.push_back(rng.next_double() * 4 - 2);
    labels.push_back(static_cast<int>(rng.next_below(2)));
  }
  labels[0] = 0;
  labels[1] = 1;
  std::vector<double> warped;
  for (double s : scores) warped.push_back(std::exp(3.0 * s) + 10.0);
  CHECK(auroc(scores, labels) == auroc(warped, labels));
}

TEST_CASE("tpr at fpr on the worked examples") {
  // perfectly separated
  CHECK(tpr_at_fpr({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}, 0.01) == 1.0);
  // negatives (0.1, 0.4), positives (0.35, 0.9), cap 0.5: threshold just
  // below 0.35 admits one false positive (fpr 0.5) and both positives.
  CHECK(tpr_at_fpr({0.1, 0.4, 0.35, 0.9}, {0, 0, 1, 1}, 0.5) == 1.0);
  // positives strictly below all negatives
  CHECK(tpr_at_fpr({0.8, 0.9, 0.1, 0.2}, {0, 0, 1, 1}, 0.25) == 0.0);
}

TEST_CASE("tpr/fpr input validation") {
  CHECK_THROWS_AS(tpr_at_fpr({0.1, 0.9}, {1, 1}, 0.1), Error);
  CHECK_THROWS_AS(tpr_at_fpr({0.1, 0.9}, {0, 1}, 0.0), Error);
  CHECK_THROWS_AS(tpr_at_fpr({0.1, 0.9}, {0, 1}, 1.0), Error);
}

TEST_CASE("tpr at fpr equals the sweep oracle exactly and is monotone in the cap") {
  Rng rng(515151);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = random_instance(rng, 120);
    double previous = 0.0;
    for (double cap : {0.01, 0.05, 0.10, 0.25, 0.5, 0.9}) {
      const double mine = tpr_at_fpr(inst.scores, inst.labels, cap);
      CHECK(mine == tpr_oracle(inst.scores, inst.labels, cap));
      CHECK(mine >= previous);
      previous = mine;
    }
  }
}

TEST_CASE("metric rows and long csv") {
  auto row = compute_metric_row("radar", 2, "pairs", {0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1});
  CHECK(row.auc == 1.0);
  CHECK(row.tpr1 == 1.0);
  CHECK(row.n == 4);
  const std::string csv = report_csv({row});
  CHECK(csv.find("detector,task,setting,auc,tpr1,tpr5,tpr10,n\n") == 0);
  CHECK(csv.find("radar,2,pairs,1,1,1,1,4") != std::string::npos);
}

TEST_CASE("single row renders as a one-cell grid") {
  auto row = compute_metric_row("gltr", 1, "exhaustive", {0.1, 0.9}, {0, 1});
  const std::string table = report_table_csv({row});
  CHECK(table.find("detector,setting,task1_AUC,task1_T1,task1_T5,task1_T10,task2_AUC") == 0);
  CHECK(table.find("gltr,exhaustive,1,1,1,1,,") != std::string::npos);
}

TEST_CASE("best and second-best are flagged by value order") {
  std::vector<MetricRow> rows;
  rows.push_back(compute_metric_row("alpha", 1, "pairs", {0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}));  // auc 1
  rows.push_back(compute_metric_row("beta", 1, "pairs", {0.8, 0.2, 0.1, 0.9}, {0, 0, 1, 1}));   // auc 0.5
  const std::string text = report_table_text(rows);
  CHECK(text.find("1.000*") != std::string::npos);
  CHECK(text.find("0.500+") != std::string::npos);
}

TEST_CASE("a full grid renders the Table-1 column structure") {
  std::vector<MetricRow> rows;
  const std::vector<std::string> detectors{"binoculars", "fastdetectgpt", "gltr", "radar"};
  const std::vector<std::string> settings{"pairs", "exhaustive", "sampling_30", "sampling_50",
                                          "sampling_80"};
  Rng rng(3);
  for (const auto& d : detectors) {
    for (const auto& s : settings) {
      for (int task = 1; task <= 5; ++task) {
        std::vector<double> scores;
        std::vector<int> labels;
        for (int i = 0; i < 40; ++i) {
          scores.push_back(rng.next_double());
          labels.push_back(static_cast<int>(rng.next_below(2)));
        }
        labels[0] = 0;
        labels[1] = 1;
        rows.push_back(compute_metric_row(d, task, s, scores, labels));
      }
    }
  }
  const std::string csv = report_table_csv(rows);
  std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == "detector,setting,task1_AUC,task1_T1,task1_T5,task1_T10,task2_AUC,task2_T1,"
                  "task2_T5,task2_T10,task3_AUC,task3_T1,task3_T5,task3_T10,task4_AUC,task4_T1,"
                  "task4_T5,task4_T10,task5_AUC,task5_T1,task5_T5,task5_T10");
  // 4 detectors x 5 settings data rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);

  // group_sampling pools the three sampling setups into one marking group
  const std::string grouped = report_table_text(rows, true);
  CHECK(grouped.find("sampling setups pooled") != std::string::npos);
}
