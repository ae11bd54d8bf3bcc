#include "padben/metrics.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <set>
#include <sstream>

#include "padben/error.hpp"

namespace padben {

namespace {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts check_inputs(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    raise(ErrorCode::invalid_argument, "scores and labels must have the same length");
  }
  ClassCounts counts;
  for (int label : labels) {
    if (label == 1) ++counts.positives;
    else if (label == 0) ++counts.negatives;
    else raise(ErrorCode::invalid_argument, "labels must be 0 or 1");
  }
  if (counts.positives == 0 || counts.negatives == 0) {
    raise(ErrorCode::degenerate, "undefined AUROC: single-class input");
  }
  return counts;
}

}  // namespace

double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
  const ClassCounts counts = check_inputs(scores, labels);

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midrank-based Mann-Whitney. Ranks and pair counts are accumulated in
  // half-units so everything stays exact in integer arithmetic; this is what
  // lets the result match the O(n^2) concordance oracle bit for bit.
  unsigned long long rank_sum_pos_x2 = 0;  // 2 * sum of positive midranks
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // Tied block occupies ranks i+1 .. j (1-based); midrank*2 = (i+1) + j.
    const unsigned long long midrank_x2 = static_cast<unsigned long long>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) rank_sum_pos_x2 += midrank_x2;
    }
    i = j;
  }
  const auto n_pos = static_cast<unsigned long long>(counts.positives);
  const auto n_neg = static_cast<unsigned long long>(counts.negatives);
  // U*2 = rank_sum*2 - n_pos*(n_pos+1)
  const unsigned long long u_x2 = rank_sum_pos_x2 - n_pos * (n_pos + 1);
  return static_cast<double>(u_x2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double tpr_at_fpr(const std::vector<double>& scores, const std::vector<int>& labels,
                  double fpr_cap) {
  if (!(fpr_cap > 0.0 && fpr_cap < 1.0)) {
    raise(ErrorCode::invalid_argument, "fpr_cap must be in (0,1)");
  }
  const ClassCounts counts = check_inputs(scores, labels);

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Descending sweep over distinct score values: after processing a tied
  // block at value v, (tp, fp) is the operating point of any threshold just
  // below v ("score > t" picks up the whole block).
  double best_tpr = 0.0;
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) ++tp;
      else ++fp;
    }
    const double fpr = static_cast<double>(fp) / static_cast<double>(counts.negatives);
    if (fpr <= fpr_cap) {
      best_tpr = std::max(best_tpr,
                          static_cast<double>(tp) / static_cast<double>(counts.positives));
    }
    i = j;
  }
  return best_tpr;
}

MetricRow compute_metric_row(const std::string& detector, int task_id, const std::string& setting,
                             const std::vector<double>& scores, const std::vector<int>& labels) {
  MetricRow row;
  row.detector = detector;
  row.task_id = task_id;
  row.setting = setting;
  row.auc = auroc(scores, labels);
  row.tpr1 = tpr_at_fpr(scores, labels, 0.01);
  row.tpr5 = tpr_at_fpr(scores, labels, 0.05);
  row.tpr10 = tpr_at_fpr(scores, labels, 0.10);
  row.n = scores.size();
  return row;
}

std::string report_csv(const std::vector<MetricRow>& rows) {
  std::ostringstream out;
  out << "detector,task,setting,auc,tpr1,tpr5,tpr10,n\n";
  for (const auto& r : rows) {
    out << r.detector << ',' << r.task_id << ',' << r.setting << ',' << r.auc << ',' << r.tpr1
        << ',' << r.tpr5 << ',' << r.tpr10 << ',' << r.n << '\n';
  }
  return out.str();
}

namespace {

constexpr int kNumTasks = 5;
constexpr int kMetricsPerTask = 4;

struct GridRow {
  std::string detector;
  std::string setting;
  // task-major: [task][auc, t1, t5, t10]; NaN = missing cell
  double cells[kNumTasks][kMetricsPerTask];
  bool present[kNumTasks] = {false, false, false, false, false};
};

std::vector<GridRow> to_grid(const std::vector<MetricRow>& rows) {
  std::vector<GridRow> grid;
  auto find = [&](const std::string& det, const std::string& set) -> GridRow& {
    for (auto& g : grid) {
      if (g.detector == det && g.setting == set) return g;
    }
    grid.push_back(GridRow{det, set, {}, {}});
    return grid.back();
  };
  for (const auto& r : rows) {
    if (r.task_id < 1 || r.task_id > kNumTasks) continue;
    GridRow& g = find(r.detector, r.setting);
    double* cell = g.cells[r.task_id - 1];
    cell[0] = r.auc;
    cell[1] = r.tpr1;
    cell[2] = r.tpr5;
    cell[3] = r.tpr10;
    g.present[r.task_id - 1] = true;
  }
  return grid;
}

const char* metric_name(int m) {
  switch (m) {
    case 0: return "AUC";
    case 1: return "T1";
    case 2: return "T5";
    case 3: return "T10";
  }
  return "?";
}

}  // namespace

std::string report_table_csv(const std::vector<MetricRow>& rows) {
  auto grid = to_grid(rows);
  std::ostringstream out;
  out << "detector,setting";
  for (int t = 1; t <= kNumTasks; ++t) {
    for (int m = 0; m < kMetricsPerTask; ++m) out << ",task" << t << '_' << metric_name(m);
  }
  out << '\n';
  for (const auto& g : grid) {
    out << g.detector << ',' << g.setting;
    for (int t = 0; t < kNumTasks; ++t) {
      for (int m = 0; m < kMetricsPerTask; ++m) {
        out << ',';
        if (g.present[t]) out << g.cells[t][m];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string report_table_text(const std::vector<MetricRow>& rows, bool group_sampling) {
  auto grid = to_grid(rows);

  auto marking_group = [&](const std::string& setting) -> std::string {
    if (group_sampling && setting.rfind("sampling_", 0) == 0) return "sampling";
    return setting;
  };

  // Rank cells per (marking group, task, metric): best -> '*', second -> '+'.
  std::vector<std::array<std::array<char, kMetricsPerTask>, kNumTasks>> marks(grid.size());
  for (auto& m : marks) {
    for (auto& t : m) t.fill(' ');
  }
  std::set<std::string> groups;
  for (const auto& g : grid) groups.insert(marking_group(g.setting));
  for (const auto& group : groups) {
    for (int t = 0; t < kNumTasks; ++t) {
      for (int m = 0; m < kMetricsPerTask; ++m) {
        double best = -1.0, second = -1.0;
        for (const auto& g : grid) {
          if (marking_group(g.setting) != group || !g.present[t]) continue;
          const double v = g.cells[t][m];
          if (v > best) {
            second = best;
            best = v;
          } else if (v > second) {
            second = v;
          }
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const auto& g = grid[i];
          if (marking_group(g.setting) != group || !g.present[t]) continue;
          const double v = g.cells[t][m];
          if (v == best) marks[i][static_cast<std::size_t>(t)][static_cast<std::size_t>(m)] = '*';
          else if (v == second && second >= 0.0) {
            marks[i][static_cast<std::size_t>(t)][static_cast<std::size_t>(m)] = '+';
          }
        }
      }
    }
  }

  std::ostringstream out;
  out << std::left << std::setw(16) << "detector" << std::setw(14) << "setting";
  for (int t = 1; t <= kNumTasks; ++t) {
    for (int m = 0; m < kMetricsPerTask; ++m) {
      out << std::right << std::setw(9) << ("t" + std::to_string(t) + ":" + metric_name(m));
    }
  }
  out << '\n';
  out << std::fixed << std::setprecision(3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& g = grid[i];
    out << std::left << std::setw(16) << g.detector << std::setw(14) << g.setting;
    for (int t = 0; t < kNumTasks; ++t) {
      for (int m = 0; m < kMetricsPerTask; ++m) {
        if (g.present[t]) {
          std::ostringstream cell;
          cell << std::fixed << std::setprecision(3) << g.cells[t][m]
               << marks[i][static_cast<std::size_t>(t)][static_cast<std::size_t>(m)];
          out << std::right << std::setw(9) << cell.str();
        } else {
          out << std::right << std::setw(9) << "-";
        }
      }
    }
    out << '\n';
  }
  out << "(* best, + second-best per column within each "
      << (group_sampling ? "setup group; sampling setups pooled" : "setting") << ")\n";
  return out.str();
}

}  // namespace padben
