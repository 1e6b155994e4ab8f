#include "pearl/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pearl::io {

namespace {

std::string fixed17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_point(std::ostream& out, const Point& p) {
    out << fixed17(p.x) << ' ' << fixed17(p.y) << ' ' << fixed17(p.z) << '\n';
}

std::runtime_error parse_error(const std::string& what) {
    return std::runtime_error("malformed input: " + what);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_ply(std::ostream& out, const std::vector<Point>& points) {
    out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
        << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    for (const Point& p : points) write_point(out, p);
}

std::vector<Point> read_ply(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "ply") throw parse_error("missing ply magic");
    std::size_t count = 0;
    int properties = 0;
    bool ascii = false;
    while (std::getline(in, line) && line != "end_header") {
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "format") {
            std::string kind;
            ls >> kind;
            ascii = kind == "ascii";
        } else if (word == "element") {
            std::string name;
            ls >> name >> count;
            if (name != "vertex") throw parse_error("unexpected element " + name);
        } else if (word == "property") {
            ++properties;
        }
    }
    if (!ascii) throw parse_error("only ascii ply is supported");
    if (properties != 3) throw parse_error("expected x y z properties");
    std::vector<Point> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Point p;
        if (!(in >> p.x >> p.y >> p.z)) throw parse_error("truncated vertex list");
        points.push_back(p);
    }
    return points;
}

void write_xyz(std::ostream& out, const std::vector<Point>& points) {
    for (const Point& p : points) write_point(out, p);
}

void write_obj_polyline(std::ostream& out, const std::vector<Point>& vertices) {
    for (const Point& p : vertices) {
        out << "v ";
        write_point(out, p);
    }
    if (vertices.empty()) return;
    out << 'l';
    for (std::size_t i = 1; i <= vertices.size(); ++i) out << ' ' << i;
    out << " 1\n";
}

std::vector<Point> read_obj_polyline(std::istream& in) {
    std::vector<Point> vs;
    std::vector<std::size_t> loop;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Point p;
            if (!(ls >> p.x >> p.y >> p.z)) throw parse_error("bad vertex record");
            vs.push_back(p);
        } else if (tag == "l") {
            std::size_t idx = 0;
            while (ls >> idx) {
                if (idx == 0 || idx > vs.size()) throw parse_error("line index out of range");
                loop.push_back(idx - 1);
            }
        }
    }
    if (loop.size() >= 2 && loop.front() == loop.back()) loop.pop_back();
    std::vector<Point> out;
    out.reserve(loop.size());
    for (std::size_t i : loop) out.push_back(vs[i]);
    return out;
}

std::string csv_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_field(fields[i]);
    }
    out << "\r\n";
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && in.peek() == '\n') in.get(c);
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (quoted) throw parse_error("unterminated quoted field");
    if (any) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace pearl::io
