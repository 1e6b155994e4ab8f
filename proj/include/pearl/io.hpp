#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pearl/geom.hpp"

namespace pearl::io {

// ASCII PLY with one double-precision vertex element, 17 significant digits.
void write_ply(std::ostream& out, const std::vector<Point>& points);
std::vector<Point> read_ply(std::istream& in);

// One "x y z" line per point.
void write_xyz(std::ostream& out, const std::vector<Point>& points);

// v records followed by a single closed l record.
void write_obj_polyline(std::ostream& out, const std::vector<Point>& vertices);
// Vertices in the order the l record visits them (closing index dropped).
std::vector<Point> read_obj_polyline(std::istream& in);

// Comma separated; fields with commas, quotes or line breaks are quoted.
std::string csv_field(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> read_csv(std::istream& in);

// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace pearl::io
