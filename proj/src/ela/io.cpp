#include "ela/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ela::io {

std::string format_number(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string format_value(const FeatureValue& v) { return v ? format_number(*v) : "NA"; }

void write_csv(std::ostream& os, const Table& table, const std::string& comment) {
    if (!comment.empty()) os << "# " << comment << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << '\n';
    }
}

void write_csv(const std::string& path, const Table& table, const std::string& comment) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_csv(os, table, comment);
    if (!os) throw IoError("failed writing '" + path + "'");
}

Table sample_table(const RowMatrix& points, const Vector& objectives, const std::string& prefix) {
    Table t;
    for (Eigen::Index j = 0; j < points.cols(); ++j) t.columns.push_back(prefix + std::to_string(j + 1));
    t.columns.push_back("y");
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        std::vector<std::string> row;
        for (Eigen::Index j = 0; j < points.cols(); ++j) row.push_back(format_number(points(i, j)));
        row.push_back(format_number(objectives[i]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void read_sample_csv(const std::string& path, RowMatrix& points, Vector& objectives) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "'");
    std::string line;
    bool header = true;
    std::size_t width = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (header) {
            width = cells.size();
            if (width < 2) throw IoError(path + ": need at least one coordinate column and y");
            header = false;
            continue;
        }
        if (cells.size() != width) throw IoError(path + ": ragged row");
        std::vector<double> row;
        for (const auto& c : cells) {
            double v = 0;
            const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
            if (r.ec != std::errc() || r.ptr != c.data() + c.size()) throw IoError(path + ": bad number '" + c + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": no data rows");
    points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 1));
    objectives.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j + 1 < width; ++j) points(i, j) = rows[i][j];
        objectives[i] = rows[i].back();
    }
}

}  // namespace ela::io
