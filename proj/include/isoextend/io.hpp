#pragma once

#include <json.hpp>
#include <string>

#include "isoextend/alignment.hpp"
#include "isoextend/certification.hpp"
#include "isoextend/clustering.hpp"
#include "isoextend/extension.hpp"

namespace isoextend {

using Json = nlohmann::ordered_json;

// Non-finite values are written as the strings "inf", "-inf", "nan".
Json number(double v);
double parse_number(const Json& j);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, int dimension);
// Row-major list of rows.
Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j, int rows, int cols);

// Point-set document: {"dimension": D, "points": [{"label", "coords"}...]}.
Json points_to_json(const PointConfig& p);
PointConfig points_from_json(const Json& j);  // throws Parse

Json motion_to_json(const EuclideanMotion& m);
Json alignment_report(const AlignmentResult& a, const DistortionReport& d);
Json partition_to_json(const PointConfig& p, const ClusterPartition& part);

// Node-tree document; load(save(map)) evaluates bit-identically.
Json map_to_json(const SmoothMap& map);
SmoothMap map_from_json(const Json& j);  // throws Parse

Json certification_to_json(const CertificationReport& r);
Json params_to_json(const ExtensionParams& p);
Json trace_to_json(const ExtensionTrace& t);
Json obstruction_to_json(const ObstructionReport& r, const PointConfig& y);

// File helpers. read_json throws Parse on unreadable or malformed files.
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);
void write_text(const std::string& path, const std::string& text);

}  // namespace isoextend
