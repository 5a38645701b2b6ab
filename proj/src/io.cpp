#include "blinkid/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace blinkid {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

// '# key=value' header line -> (key, value); false when not a header
bool parse_header(const std::string& line, std::string& key,
                  std::string& value) {
    if (line.empty() || line[0] != '#') return false;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) return false;
    key = trim(line.substr(1, eq - 1));
    value = trim(line.substr(eq + 1));
    return !key.empty();
}

int64_t to_int(const std::string& v, const std::string& what) {
    try {
        size_t pos = 0;
        const int64_t r = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::runtime_error("bad integer for " + what + ": " + v);
    }
}

double to_num(const std::string& v, const std::string& what) {
    try {
        size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::runtime_error("bad number for " + what + ": " + v);
    }
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_dictionary(std::ostream& out, const Dictionary& dict) {
    const GenerationParams& p = dict.params;
    out << "# coding=" << coding_name(p.coding) << "\n";
    out << "# L=" << p.L << "\n";
    out << "# duty=" << format_double(p.duty) << "\n";
    out << "# n1=" << p.max_run_ones << "\n";
    out << "# n0=" << p.max_run_zeros << "\n";
    out << "# hm=" << p.min_hamming << "\n";
    out << "# restarts=" << p.restarts << "\n";
    out << "# seed=" << p.seed << "\n";
    out << "# rows=" << dict.rows.size() << "\n";
    for (const BitSeq& r : dict.rows) out << r.str() << "\n";
}

void write_dictionary_file(const std::string& path, const Dictionary& dict) {
    auto out = open_out(path);
    write_dictionary(out, dict);
}

Dictionary read_dictionary(std::istream& in) {
    Dictionary dict;
    GenerationParams& p = dict.params;
    int64_t expect_rows = -1;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::string key, value;
        if (parse_header(line, key, value)) {
            if (key == "coding") p.coding = coding_from_name(value);
            else if (key == "L") p.L = int(to_int(value, key));
            else if (key == "duty") p.duty = to_num(value, key);
            else if (key == "n1") p.max_run_ones = int(to_int(value, key));
            else if (key == "n0") p.max_run_zeros = int(to_int(value, key));
            else if (key == "hm") p.min_hamming = int(to_int(value, key));
            else if (key == "restarts") p.restarts = int(to_int(value, key));
            else if (key == "seed") p.seed = uint64_t(to_int(value, key));
            else if (key == "rows") expect_rows = to_int(value, key);
            continue;
        }
        if (line[0] == '#') continue;
        dict.rows.push_back(BitSeq::from_string(line));
    }
    if (expect_rows >= 0 && expect_rows != int64_t(dict.rows.size()))
        throw std::runtime_error("dictionary: row count mismatch");
    dict.stages.hamming = dict.rows.size();
    dict.validate();
    return dict;
}

Dictionary read_dictionary_file(const std::string& path) {
    auto in = open_in(path);
    return read_dictionary(in);
}

void write_trace(std::ostream& out, const Trace& trace) {
    for (const auto& [key, value] : trace.meta)
        out << "# " << key << "=" << value << "\n";
    out << "# samples=" << trace.bits.size() << "\n";
    for (size_t i = 0; i < trace.bits.size(); ++i) {
        out << (trace.bits[i] ? '1' : '0');
        if (i % 64 == 63) out << "\n";
    }
    if (trace.bits.size() % 64 != 0) out << "\n";
}

void write_trace_file(const std::string& path, const Trace& trace) {
    auto out = open_out(path);
    write_trace(out, trace);
}

Trace read_trace(std::istream& in) {
    Trace trace;
    int64_t expect = -1;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::string key, value;
        if (parse_header(line, key, value)) {
            if (key == "samples") expect = to_int(value, key);
            else trace.meta[key] = value;
            continue;
        }
        if (line[0] == '#') continue;
        for (char c : line) {
            if (c == '0' || c == '1') trace.bits.push_back(uint8_t(c - '0'));
            else if (c != ' ' && c != '\t')
                throw std::runtime_error("trace: invalid sample character");
        }
    }
    if (expect >= 0 && expect != int64_t(trace.bits.size()))
        throw std::runtime_error("trace: sample count mismatch");
    return trace;
}

Trace read_trace_file(const std::string& path) {
    auto in = open_in(path);
    return read_trace(in);
}

std::string KvConfig::get(const std::string& k,
                          const std::string& fallback) const {
    auto it = values.find(k);
    return it == values.end() ? fallback : it->second;
}

double KvConfig::get_num(const std::string& k, double fallback) const {
    auto it = values.find(k);
    return it == values.end() ? fallback : to_num(it->second, k);
}

int64_t KvConfig::get_int(const std::string& k, int64_t fallback) const {
    auto it = values.find(k);
    return it == values.end() ? fallback : to_int(it->second, k);
}

KvConfig parse_kv(std::istream& in) {
    KvConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            cfg.rows.push_back(line);
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw std::runtime_error("config: empty key");
        cfg.values[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

KvConfig parse_kv_file(const std::string& path) {
    auto in = open_in(path);
    return parse_kv(in);
}

void write_sim_reports_csv(std::ostream& out,
                           const std::map<std::string, std::string>& config,
                           const std::vector<SimReport>& reports) {
    for (const auto& [key, value] : config)
        out << "# " << key << "=" << value << "\n";
    out << "L,hm,p_b,delta,trials,E_Td,se_Td,p_ce,se_pce,seed\n";
    for (const SimReport& r : reports) {
        out << r.L << ',' << r.min_hamming << ',' << format_double(r.pb)
            << ',' << format_double(r.delta) << ',' << r.trials << ','
            << format_double(r.e_td) << ',' << format_double(r.se_td) << ','
            << format_double(r.p_ce) << ',' << format_double(r.se_pce) << ','
            << r.seed << "\n";
    }
}

void write_capacity_csv(std::ostream& out, const CapacityCurve& curve) {
    const CapacityParams& p = curve.params;
    out << "# p_g=" << format_double(p.p_g) << "\n";
    out << "# t_over_sigma=" << format_double(p.t_over_sigma) << "\n";
    out << "# seqs_per_uav=" << p.seqs_per_uav << "\n";
    out << "# duty=" << format_double(p.duty) << "\n";
    out << "# n1=" << p.n1 << "\n";
    out << "# n0=" << p.n0 << "\n";
    out << "# restarts=" << p.restarts << "\n";
    out << "# seed=" << p.seed << "\n";
    out << "# l_cap=" << p.l_cap << "\n";
    out << "# crossing_h1=" << curve.crossing_h1 << "\n";
    out << "# crossing_h3=" << curve.crossing_h3 << "\n";
    out << "J,L_max,L_min_h1,L_min_h3\n";
    for (const CapacityRow& r : curve.rows)
        out << r.j << ',' << format_double(r.l_max) << ',' << r.l_min_h1
            << ',' << r.l_min_h3 << "\n";
}

} // namespace blinkid
