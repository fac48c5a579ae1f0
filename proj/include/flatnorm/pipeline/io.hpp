#pragma once

#include "flatnorm/pipeline/converge.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace flatnorm {

using json = nlohmann::json;

// .plc: one segment per line, "x1 y1 x2 y2 mult"; coordinates are exact
// rationals ("3/4", "0.25"). '#' starts a comment.
void write_plc(std::ostream& os, const PLCurrent& c);
PLCurrent read_plc(std::istream& is);
void save_plc(const std::string& path, const PLCurrent& c);
PLCurrent load_plc(const std::string& path);

// .plr: one polygon per line, "mult x1 y1 x2 y2 ... xn yn".
void write_plr(std::ostream& os, const PLRegion& r);
PLRegion read_plr(std::istream& is);
void save_plr(const std::string& path, const PLRegion& r);
PLRegion load_plr(const std::string& path);

// Writes to path.tmp and renames over path.
void write_file_atomic(const std::string& path, const std::string& text);

json to_json(const FlatNormResult& r, const Complex2& K);
json to_json(const SweepResult& s);
json to_json(const ConvergenceRow& r);
json to_json(const ConvergenceReport& r);
json to_json(const SpanningReport& r);

// delta, mass_P, value, gap, integral, triangles, min_angle, theta_K, seconds
std::string convergence_csv(const ConvergenceReport& r);
// lambda, value, mass_x, mass_s, x_zero, x_is_t
std::string spanning_csv(const SpanningReport& r);
// lambda, value, mass_x, mass_s, integral
std::string sweep_csv(const SweepResult& s);

// dir/converge.json and dir/converge.csv; the directory is created.
void write_convergence(const std::string& dir, const ConvergenceReport& r);

}  // namespace flatnorm
