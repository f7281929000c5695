#pragma once

#include "mmslab/averaging.hpp"
#include "mmslab/constructions.hpp"
#include "mmslab/experiments.hpp"
#include "mmslab/measure.hpp"
#include "mmslab/metric_space.hpp"
#include "mmslab/nets.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mmslab::io {

using json = nlohmann::json;

// Space JSON: {"points": [[...], ...], "norm": "l1"|"l2"|"linf"}
//          or {"distance_matrix": [[...], ...]}.
// Measure JSON: {"weights": [...]}. Function JSON: {"values": [...]}.
// Malformed documents raise FormatError.
MetricSpace space_from_json(const json& j, const SpaceOptions& options = {});
DiscreteMeasure measure_from_json(const json& j);
Function function_from_json(const json& j);

json to_json(const MetricSpace& space);
json to_json(const DiscreteMeasure& measure);
json function_to_json(const Function& f);
json to_json(const NetStats& stats);
json to_json(const DoublingEstimate& est);
json to_json(const LpBoundReport& rep);
json to_json(const ComparabilityReport& rep);
json to_json(const ScanRow& row);
json to_json(const ConvergenceRow& row);
json to_json(const SharpnessReport& rep);
json to_json(const VerifyReport& rep);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// 17 significant digits.
std::string format_double(double v);

// radius,l1_norm,max_a_s,M,C  (M and C empty when unavailable)
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);
// radius,p,error,l1_norm
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
// point_id,weight,value
void write_point_csv(std::ostream& os, const DiscreteMeasure& measure, const Function& values);

} // namespace mmslab::io
