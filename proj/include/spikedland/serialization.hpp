#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikedland/extended_real.hpp"

namespace spiked {

/// Raised when an artifact cannot be written or read back.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inverse of format_double: accepts "-inf", "+inf" and decimal numbers.
double parse_double(const std::string& token);

/// JSON number, or the strings "-inf"/"+inf" for the infinities.
nlohmann::json json_number(double x);
double json_to_double(const nlohmann::json& j);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);
/// Writes to `path`; throws IoError when the file cannot be written.
void write_csv_file(const std::string& path, const CsvTable& table);
CsvTable read_csv_file(const std::string& path);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

/// UTC timestamp, ISO 8601.
std::string utc_timestamp();
/// `git describe` of the build.
std::string build_version();

}  // namespace spiked
