#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "blinkid/codebook.hpp"
#include "blinkid/sim.hpp"

namespace blinkid {

// Dictionary text format: '# key=value' header lines carrying the full
// generation config, then one bit string per row, position 0 first.
void write_dictionary(std::ostream& out, const Dictionary& dict);
void write_dictionary_file(const std::string& path, const Dictionary& dict);
Dictionary read_dictionary(std::istream& in);
Dictionary read_dictionary_file(const std::string& path);

// Sample trace: '# key=value' headers, then one {0,1} character per sample
// (line wrapping carries no meaning).
struct Trace {
    std::map<std::string, std::string> meta;
    std::vector<uint8_t> bits;
};
void write_trace(std::ostream& out, const Trace& trace);
void write_trace_file(const std::string& path, const Trace& trace);
Trace read_trace(std::istream& in);
Trace read_trace_file(const std::string& path);

// key=value config with '#' comments; later keys override earlier ones.
// Lines without '=' are collected verbatim into `rows` (grid inputs).
struct KvConfig {
    std::map<std::string, std::string> values;
    std::vector<std::string> rows;

    bool has(const std::string& k) const { return values.count(k) != 0; }
    std::string get(const std::string& k, const std::string& fallback) const;
    double get_num(const std::string& k, double fallback) const;
    int64_t get_int(const std::string& k, int64_t fallback) const;
};
KvConfig parse_kv(std::istream& in);
KvConfig parse_kv_file(const std::string& path);

// CSV writers; every file starts with '# key=value' lines echoing the run
// configuration so outputs are self-describing.
void write_sim_reports_csv(std::ostream& out,
                           const std::map<std::string, std::string>& config,
                           const std::vector<SimReport>& reports);
void write_capacity_csv(std::ostream& out, const CapacityCurve& curve);

// Fixed-format float: shortest representation that round-trips.
std::string format_double(double v);

} // namespace blinkid
