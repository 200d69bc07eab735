#include "spikedland/serialization.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#ifndef SPIKEDLAND_VERSION
#define SPIKEDLAND_VERSION "unknown"
#endif

namespace spiked {

double parse_double(const std::string& token) {
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
    if (token == "+inf") return std::numeric_limits<double>::infinity();
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE || std::isnan(v))
        throw std::invalid_argument("parse_double: not a number: '" + token + "'");
    return v;
}

nlohmann::json json_number(double x) {
    if (std::isinf(x)) return x < 0 ? "-inf" : "+inf";
    if (std::isnan(x)) throw std::domain_error("json_number: NaN cannot be serialized");
    return x;
}

double json_to_double(const nlohmann::json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    return j.get<double>();
}

void write_csv(std::ostream& os, const CsvTable& table) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_csv(os, table);
    os.flush();
    if (!os) throw IoError("write to '" + path + "' failed");
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << j.dump(2) << '\n';
    os.flush();
    if (!os) throw IoError("write to '" + path + "' failed");
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed JSON in '" + path + "': " + e.what());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string build_version() { return SPIKEDLAND_VERSION; }

}  // namespace spiked
