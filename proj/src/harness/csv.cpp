#include "stp/harness/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "stp/errors.hpp"

namespace stp::harness {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
    out << kTrajectoryHeader << '\n';
    for (const auto& r : tr.records) {
        out << tr.run_index << ',' << tr.seed << ',' << r.t << ',' << format_double(r.f_value) << ','
            << format_double(r.grad_norm) << ',' << format_double(r.min_grad_norm) << ','
            << (r.alpha ? format_double(*r.alpha) : std::string()) << ',' << r.evals << ','
            << r.elapsed_ns << '\n';
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write trajectory file " + path.string());
    write_trajectory_csv(out, tr);
    if (!out) throw FileError("write failed for " + path.string());
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

template <class T>
T parse_int(const std::string& s, const std::string& where) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidInput(where + ": bad integer '" + s + "'");
    return v;
}

double parse_real(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw InvalidInput(where + ": bad number '" + s + "'");
    return v;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader)
        throw InvalidInput(source + ": missing or unexpected header");
    Trajectory tr;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        const auto c = split(line);
        if (c.size() != 9) throw InvalidInput(where + ": expected 9 columns");
        const auto run_index = parse_int<std::uint64_t>(c[0], where);
        const auto seed = parse_int<std::uint64_t>(c[1], where);
        if (tr.records.empty()) {
            tr.run_index = run_index;
            tr.seed = seed;
        } else if (run_index != tr.run_index || seed != tr.seed) {
            throw InvalidInput(where + ": run_index/seed changed within a file");
        }
        TrajectoryRecord r;
        r.t = parse_int<std::uint64_t>(c[2], where);
        r.f_value = parse_real(c[3], where);
        r.grad_norm = parse_real(c[4], where);
        r.min_grad_norm = parse_real(c[5], where);
        if (!c[6].empty()) r.alpha = parse_real(c[6], where);
        r.evals = parse_int<std::uint64_t>(c[7], where);
        r.elapsed_ns = parse_int<std::int64_t>(c[8], where);
        tr.records.push_back(r);
    }
    if (tr.records.empty()) throw InvalidInput(source + ": no records");
    return tr;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("trajectory file not found: " + path.string());
    return read_trajectory_csv(in, path.string());
}

std::string trajectory_file_name(std::uint64_t run_index) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "trajectory_%05llu.csv", static_cast<unsigned long long>(run_index));
    return buf;
}

}  // namespace stp::harness
