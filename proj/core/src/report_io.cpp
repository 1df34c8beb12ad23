#include <sstream>

#include "gibbsrate/format.hpp"
#include "gibbsrate/scan_compare.hpp"
#include "json.hpp"

namespace gibbsrate {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v) { return round_significant(v); }

template <class T>
ordered_json optional_number(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return number(*v);
  } else {
    return *v;
  }
}

ordered_json step_count(const StepCount& s) {
  return ordered_json{{"value", s.str()}, {"log10", number(s.log10())}};
}

std::string csv_cell(double v) { return format_number(v); }

template <class T>
std::string csv_cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_number(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

std::string to_json(const ComparisonReport& report) {
  ordered_json j;
  j["n"] = report.n;
  j["target"] = number(report.target);
  j["max_steps"] = report.max_steps;
  j["second_eigenvalue"] = number(report.second_eigenvalue);
  j["random_scan_eigenvalue"] = number(report.random_scan_eigenvalue);
  j["rosenthal"] = report.rosenthal ? ordered_json{{"d", number(report.rosenthal->d)}, {"r", number(report.rosenthal->r)}}
                                    : ordered_json(nullptr);
  auto& rows = j["rows"] = ordered_json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"steps", row.steps},
                    {"exact_tv_systematic", optional_number(row.exact_tv_systematic)},
                    {"systematic_bound", optional_number(row.systematic_bound)},
                    {"random_lower", number(row.random_lower)},
                    {"random_upper", optional_number(row.random_upper)},
                    {"eigen_lower", number(row.eigen_lower)}});
  }
  const auto& ms = report.min_steps;
  j["min_steps"] = {{"exact_systematic", optional_number(ms.exact_systematic)},
                    {"eigen_lower_systematic", ms.eigen_lower_systematic},
                    {"systematic_bound", ms.systematic_bound},
                    {"random_scan_upper", ms.random_scan_upper},
                    {"random_scan_lower", ms.random_scan_lower},
                    {"rosenthal", ms.rosenthal ? step_count(*ms.rosenthal) : ordered_json(nullptr)},
                    {"random_to_systematic", number(ms.random_to_systematic)},
                    {"rosenthal_log10_excess", optional_number(ms.rosenthal_log10_excess)}};
  auto& mc = j["monte_carlo"] = ordered_json::array();
  for (const auto& cell : report.monte_carlo) {
    mc.push_back({{"steps", cell.steps},
                  {"estimate", number(cell.estimate)},
                  {"std_error", number(cell.std_error)},
                  {"predicted", number(cell.predicted)},
                  {"within_three_se", cell.within_three_se}});
  }
  j["notes"] = report.notes;
  return j.dump(2);
}

std::string to_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "steps,exact_tv_systematic,systematic_bound,random_lower,random_upper,eigen_lower\n";
  for (const auto& row : report.rows) {
    out << row.steps << ',' << csv_cell(row.exact_tv_systematic) << ',' << csv_cell(row.systematic_bound) << ','
        << csv_cell(row.random_lower) << ',' << csv_cell(row.random_upper) << ',' << csv_cell(row.eigen_lower)
        << '\n';
  }
  return out.str();
}

std::string to_json(const PgDemo& demo) {
  ordered_json j;
  j["target"] = number(demo.target);
  j["x_max"] = demo.x_max;
  j["second_eigenvalue"] = number(demo.second_eigenvalue);
  j["stationary_tv_to_geometric"] = number(demo.stationary_tv_to_geometric);
  auto& rows = j["rows"] = ordered_json::array();
  for (const auto& row : demo.rows) {
    rows.push_back(
        {{"start", row.start}, {"exact_min_steps", row.exact_min_steps}, {"chisq_min_steps", row.chisq_min_steps}});
  }
  return j.dump(2);
}

std::string to_csv(const PgDemo& demo) {
  std::ostringstream out;
  out << "start,exact_min_steps,chisq_min_steps\n";
  for (const auto& row : demo.rows) {
    out << row.start << ',' << row.exact_min_steps << ',' << row.chisq_min_steps << '\n';
  }
  return out.str();
}

}  // namespace gibbsrate
