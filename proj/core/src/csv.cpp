#include "levyest/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "levyest/errors.hpp"

namespace levyest {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_lines(const std::string& file, const std::vector<std::string>& lines) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw IOError("cannot open for writing: " + file);
    for (const auto& l : lines) os << l << '\n';
    if (!os) throw IOError("write failed: " + file);
}

std::vector<std::string> read_lines(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw IOError("cannot open for reading: " + file);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_kv(const std::string& file,
              const std::vector<std::pair<std::string, std::string>>& kv) {
    std::vector<std::string> lines;
    lines.reserve(kv.size());
    for (const auto& [k, v] : kv) lines.push_back(k + "=" + v);
    write_lines(file, lines);
}

std::map<std::string, std::string> read_kv(const std::string& file) {
    std::map<std::string, std::string> out;
    for (const auto& line : read_lines(file)) {
        if (line.empty() || line[0] == '#') continue;
        const auto pos = line.find('=');
        if (pos == std::string::npos)
            throw IOError("malformed key=value line in " + file + ": " + line);
        out[line.substr(0, pos)] = line.substr(pos + 1);
    }
    return out;
}

std::vector<std::string> split_csv_row(const std::string& row) {
    std::vector<std::string> out;
    std::stringstream ss(row);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!row.empty() && row.back() == ',') out.push_back("");
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace levyest
