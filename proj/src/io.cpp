#include "mmslab/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace mmslab::io {

namespace {

std::vector<double> number_array(const json& j, const char* what)
{
  if (!j.is_array())
    throw FormatError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number())
      throw FormatError(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::MatrixXd number_matrix(const json& j, const char* what)
{
  if (!j.is_array() || j.empty())
    throw FormatError(std::string(what) + " must be a nonempty array of rows");
  const auto rows = static_cast<Index>(j.size());
  const auto first = number_array(j[0], what);
  const auto cols = static_cast<Index>(first.size());
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto row = number_array(j[i], what);
    if (static_cast<Index>(row.size()) != cols)
      throw FormatError(std::string(what) + " rows must have equal length");
    for (Index k = 0; k < cols; ++k)
      m(i, k) = row[k];
  }
  return m;
}

json optional_index(const std::optional<Index>& v)
{
  return v ? json(*v) : json(nullptr);
}

} // namespace

MetricSpace space_from_json(const json& j, const SpaceOptions& options)
{
  if (!j.is_object())
    throw FormatError("space JSON must be an object");
  if (j.contains("distance_matrix"))
    return MetricSpace::from_distance_matrix(number_matrix(j["distance_matrix"], "distance_matrix"),
                                             options);
  if (!j.contains("points") || !j.contains("norm") || !j["norm"].is_string())
    throw FormatError("space JSON needs \"points\" and \"norm\", or \"distance_matrix\"");
  const Eigen::MatrixXd pts = number_matrix(j["points"], "points");
  if (pts.cols() < 1)
    throw FormatError("points need at least one coordinate");
  return MetricSpace::from_coordinates(PointCloud(pts), parse_norm(j["norm"].get<std::string>()),
                                       options);
}

DiscreteMeasure measure_from_json(const json& j)
{
  if (!j.is_object() || !j.contains("weights"))
    throw FormatError("measure JSON needs \"weights\"");
  const auto w = number_array(j["weights"], "weights");
  return DiscreteMeasure(Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Index>(w.size())));
}

Function function_from_json(const json& j)
{
  if (!j.is_object() || !j.contains("values"))
    throw FormatError("function JSON needs \"values\"");
  const auto v = number_array(j["values"], "values");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

json to_json(const MetricSpace& space)
{
  json j;
  if (space.has_coordinates()) {
    const auto& c = space.coordinates();
    json pts = json::array();
    for (Index i = 0; i < c.rows(); ++i) {
      json row = json::array();
      for (Index k = 0; k < c.cols(); ++k)
        row.push_back(c(i, k));
      pts.push_back(std::move(row));
    }
    j["points"] = std::move(pts);
    j["norm"] = to_string(space.norm());
    return j;
  }
  json rows = json::array();
  for (Index i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (Index k = 0; k < space.size(); ++k)
      row.push_back(space.distance(i, k));
    rows.push_back(std::move(row));
  }
  j["distance_matrix"] = std::move(rows);
  return j;
}

json to_json(const DiscreteMeasure& measure)
{
  return { { "weights", std::vector<double>(measure.weights().begin(), measure.weights().end()) } };
}

json function_to_json(const Function& f)
{
  return { { "values", std::vector<double>(f.begin(), f.end()) } };
}

json to_json(const NetStats& s)
{
  return { { "radius", s.radius },
           { "center", optional_index(s.center) },
           { "kind", to_string(s.kind) },
           { "net_points", s.net_points },
           { "cardinality", s.cardinality },
           { "exact", s.exact } };
}

json to_json(const DoublingEstimate& e)
{
  return { { "upper_bound", e.upper_bound },
           { "lower_bound", e.lower_bound },
           { "method", to_string(e.method) },
           { "lower_method", to_string(DoublingEstimate::Method::net_lower) },
           { "lower_exact", e.lower_exact },
           { "witness_center", e.witness_center },
           { "witness_radius", e.witness_radius } };
}

json to_json(const LpBoundReport& r)
{
  return { { "p", r.p },
           { "bound", r.bound },
           { "trials", r.trials },
           { "violations", r.violations },
           { "linf_violations", r.linf_violations },
           { "max_ratio", r.max_ratio },
           { "ones_ratio", r.ones_ratio } };
}

json to_json(const ComparabilityReport& r)
{
  return { { "C", r.C },
           { "witness", { { "x", r.x }, { "y", r.y }, { "r", r.r } } },
           { "max_norm", r.max_norm },
           { "max_norm_radius", r.max_norm_radius },
           { "implication_holds", r.implication_holds } };
}

json to_json(const ScanRow& row)
{
  json checks = json::array();
  for (const auto& c : row.p_checks)
    checks.push_back(to_json(c));
  return { { "radius", row.radius },
           { "ball", to_string(row.kind) },
           { "l1_norm", row.l1_norm },
           { "max_a_s", row.max_a_s },
           { "argmax_point", row.argmax },
           { "M", optional_index(row.M) },
           { "M_exact", row.M_exact },
           { "C", row.C ? json(*row.C) : json(nullptr) },
           { "p_checks", std::move(checks) } };
}

json to_json(const ConvergenceRow& row)
{
  return { { "radius", row.radius },
           { "p", row.p },
           { "error", row.error },
           { "l1_norm", row.operator_norm } };
}

json to_json(const SharpnessReport& rep)
{
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({ { "n", r.n },
                     { "value", r.value },
                     { "lower", r.lower },
                     { "margin", r.margin },
                     { "required_margin", r.required_margin },
                     { "strict", r.strict } });
  return { { "dim", rep.dim },
           { "operator_norm", rep.operator_norm },
           { "gap", rep.gap },
           { "all_strict", rep.all_strict },
           { "rows", std::move(rows) } };
}

json to_json(const VerifyReport& rep)
{
  json suites = json::array();
  for (const auto& s : rep.suites)
    suites.push_back({ { "name", s.name },
                       { "passed", s.passed },
                       { "checks", s.checks },
                       { "seconds", s.seconds },
                       { "detail", s.detail },
                       { "witness", s.witness.empty() ? json(nullptr) : json(s.witness) } });
  return { { "passed", rep.passed }, { "suites", std::move(suites) } };
}

json read_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j)
{
  std::ofstream out(path);
  if (!out)
    throw FormatError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows)
{
  os << "radius,l1_norm,max_a_s,M,C\n";
  for (const auto& r : rows) {
    os << format_double(r.radius) << ',' << format_double(r.l1_norm) << ','
       << format_double(r.max_a_s) << ',';
    if (r.M)
      os << *r.M;
    os << ',';
    if (r.C)
      os << format_double(*r.C);
    os << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows)
{
  os << "radius,p,error,l1_norm\n";
  for (const auto& r : rows)
    os << format_double(r.radius) << ',' << format_double(r.p) << ',' << format_double(r.error)
       << ',' << format_double(r.operator_norm) << '\n';
}

void write_point_csv(std::ostream& os, const DiscreteMeasure& measure, const Function& values)
{
  os << "point_id,weight,value\n";
  for (Index i = 0; i < measure.size(); ++i)
    os << i << ',' << format_double(measure.weight(i)) << ',' << format_double(values[i]) << '\n';
}

} // namespace mmslab::io
