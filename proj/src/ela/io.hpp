#pragma once

#include "ela/common.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ela::io {

// shortest decimal that round-trips; "NA" for the undefined marker
std::string format_number(double v);
std::string format_value(const FeatureValue& v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// optional first line "# <comment>", then a header and the rows
void write_csv(std::ostream& os, const Table& table, const std::string& comment = {});
void write_csv(const std::string& path, const Table& table, const std::string& comment = {});

// points + objectives as columns <prefix>1..<prefix>n,y
Table sample_table(const RowMatrix& points, const Vector& objectives, const std::string& prefix);
// reads a sample CSV; lines starting with '#' are skipped, the last column is y
void read_sample_csv(const std::string& path, RowMatrix& points, Vector& objectives);

}  // namespace ela::io
