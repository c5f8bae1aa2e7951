#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "semsearch/eval.hpp"

namespace semsearch {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string label(const EvalReport& r, std::size_t c) {
  return c < r.categories.size() ? r.categories[c] : std::to_string(c);
}

}  // namespace

std::string to_json(const EvalReport& report) {
  ordered_json j;
  j["n_instances"] = report.n_instances;
  j["accuracy"] = report.accuracy;
  j["kappa"] = optional_number(report.kappa);
  j["mae"] = optional_number(report.mae);
  j["rmse"] = optional_number(report.rmse);
  j["rae"] = optional_number(report.rae);
  j["rrse"] = optional_number(report.rrse);
  ordered_json per = ordered_json::array();
  for (std::size_t c = 0; c < report.precision.size(); ++c) {
    ordered_json row;
    row["category"] = label(report, c);
    row["precision"] = report.precision[c];
    row["recall"] = report.recall[c];
    per.push_back(row);
  }
  j["per_category"] = per;
  ordered_json cm = ordered_json::array();
  for (std::size_t a = 0; a < report.confusion.size(); ++a) {
    ordered_json row = ordered_json::array();
    for (std::size_t p = 0; p < report.confusion.size(); ++p) row.push_back(report.confusion.at(a, p));
    cm.push_back(row);
  }
  j["confusion"] = cm;
  // nlohmann prints doubles with max_digits10, which is the 17 digits we want.
  return j.dump(2);
}

std::string to_text(const EvalReport& report) {
  std::ostringstream out;
  auto line = [&](const char* name, const std::optional<double>& v) {
    char buf[96];
    if (v) {
      std::snprintf(buf, sizeof buf, "%-28s %12.4f\n", name, *v);
    } else {
      std::snprintf(buf, sizeof buf, "%-28s %12s\n", name, "n/a");
    }
    out << buf;
  };
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-28s %12zu\n", "Instances", report.n_instances);
  out << buf;
  std::snprintf(buf, sizeof buf, "%-28s %12zu\n", "Correctly classified", report.confusion.trace());
  out << buf;
  line("Accuracy", report.accuracy);
  line("Kappa statistic", report.kappa);
  line("Mean absolute error", report.mae);
  line("Root mean squared error", report.rmse);
  line("Relative absolute error", report.rae);
  line("Root relative squared error", report.rrse);

  std::size_t width = 8;
  for (std::size_t c = 0; c < report.confusion.size(); ++c) {
    width = std::max(width, label(report, c).size());
  }
  out << "\n";
  out << std::string(width, ' ') << "  precision     recall\n";
  for (std::size_t c = 0; c < report.precision.size(); ++c) {
    const std::string name = label(report, c);
    std::snprintf(buf, sizeof buf, "  %9.4f  %9.4f\n", report.precision[c], report.recall[c]);
    out << name << std::string(width - name.size(), ' ') << buf;
  }

  out << "\nConfusion matrix (rows actual, columns predicted)\n";
  std::size_t cell = 6;
  for (std::size_t a = 0; a < report.confusion.size(); ++a) {
    for (std::size_t p = 0; p < report.confusion.size(); ++p) {
      cell = std::max(cell, std::to_string(report.confusion.at(a, p)).size() + 1);
    }
  }
  out << std::string(width, ' ');
  for (std::size_t p = 0; p < report.confusion.size(); ++p) {
    const std::string head = std::to_string(p);
    out << std::string(cell - head.size(), ' ') << head;
  }
  out << "\n";
  for (std::size_t a = 0; a < report.confusion.size(); ++a) {
    const std::string name = label(report, a);
    out << name << std::string(width - name.size(), ' ');
    for (std::size_t p = 0; p < report.confusion.size(); ++p) {
      const std::string v = std::to_string(report.confusion.at(a, p));
      out << std::string(cell - v.size(), ' ') << v;
    }
    out << "  " << a << " = " << name << "\n";
  }
  return out.str();
}

}  // namespace semsearch
