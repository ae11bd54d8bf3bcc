#pragma once

#include <map>
#include <string>
#include <vector>

namespace padben {

// Probability that a random positive outscores a random negative, ties
// counted 1/2 (Mann-Whitney). Labels must contain both classes.
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

// Maximum TPR over thresholds t (predict positive when score > t) subject to
// FPR <= fpr_cap, on the empirical step ROC without interpolation.
double tpr_at_fpr(const std::vector<double>& scores, const std::vector<int>& labels,
                  double fpr_cap);

struct MetricRow {
  std::string detector;
  int task_id = 0;
  std::string setting;
  double auc = 0.0;
  double tpr1 = 0.0;
  double tpr5 = 0.0;
  double tpr10 = 0.0;
  std::size_t n = 0;
};

MetricRow compute_metric_row(const std::string& detector, int task_id, const std::string& setting,
                             const std::vector<double>& scores, const std::vector<int>& labels);

// Long-form CSV: detector,task,setting,auc,tpr1,tpr5,tpr10,n.
std::string report_csv(const std::vector<MetricRow>& rows);

// Wide per-task CSV: detector,setting then task{t}_{AUC,T1,T5,T10} columns.
std::string report_table_csv(const std::vector<MetricRow>& rows);

// Rendered fixed-width table; best value per (task, metric) column is marked
// '*' and second-best '+' within each setting group. With group_sampling the
// three sampling setups are pooled into one marking group.
std::string report_table_text(const std::vector<MetricRow>& rows, bool group_sampling = false);

}  // namespace padben
