#include "seldkit/label_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seldkit {

namespace {

long parse_int(const std::string& field, int line) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(field, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("malformed row at line " + std::to_string(line));
    }
    if (used != field.size()) throw std::runtime_error("malformed row at line " +
                                                       std::to_string(line));
    return v;
}

[[noreturn]] void out_of_range(const char* field, int line) {
    throw std::runtime_error(std::string(field) + " out of range at line " + std::to_string(line));
}

}  // namespace

EventList read_labels(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    EventList events;
    std::string row;
    int line = 0;
    while (std::getline(is, row)) {
        ++line;
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (row.empty()) continue;
        std::stringstream ss(row);
        std::string field;
        long v[5];
        int i = 0;
        while (std::getline(ss, field, ',')) {
            if (i >= 5) throw std::runtime_error("malformed row at line " + std::to_string(line));
            v[i++] = parse_int(field, line);
        }
        if (i != 5) throw std::runtime_error("malformed row at line " + std::to_string(line));
        if (v[0] < 0) out_of_range("frame", line);
        if (v[1] < 0 || v[1] >= kNumClasses) out_of_range("class", line);
        if (v[2] < 0) out_of_range("track", line);
        if (v[3] < -180 || v[3] > 179) out_of_range("azimuth", line);
        if (v[4] < -90 || v[4] > 90) out_of_range("elevation", line);
        events.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                          {static_cast<double>(v[3]), static_cast<double>(v[4])}});
    }
    return events;
}

void write_labels(const std::string& path, const EventList& events) {
    EventList sorted = events;
    std::sort(sorted.begin(), sorted.end(), [](const EventRecord& a, const EventRecord& b) {
        return std::tie(a.frame, a.cls, a.track) < std::tie(b.frame, b.cls, b.track);
    });
    std::ofstream os(path, std::ios::binary);  // keep \n line endings everywhere
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (const auto& e : sorted) {
        long az = std::lround(e.doa.azimuth_deg);
        if (az == 180) az = -180;  // rounding can push 179.5+ out of range
        const long el = std::lround(e.doa.elevation_deg);
        os << e.frame << ',' << e.cls << ',' << e.track << ',' << az << ',' << el << '\n';
    }
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace seldkit
