// blinkid command-line front door: codebook generation, cardinality tables,
// trace simulation/classification, identification experiments, capacity
// curves. Plain-text formats only; every CSV embeds its run config.
//
// Exit codes: 0 success, 1 usage error, 2 runtime/validation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blinkid/channel.hpp"
#include "blinkid/classifier.hpp"
#include "blinkid/codebook.hpp"
#include "blinkid/io.hpp"
#include "blinkid/sim.hpp"

using namespace blinkid;

namespace {

// BLINKID_SEED overrides the default master seed; explicit --seed or a
// config-file seed key still wins.
uint64_t default_seed() {
    const char* env = std::getenv("BLINKID_SEED");
    if (env == nullptr || *env == '\0') return 1;
    std::string s(env);
    size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size())
        throw std::runtime_error("BLINKID_SEED: not an integer: " + s);
    return v;
}

// Run `fn` against the named file, or stdout when path is empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    fn(out);
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        double v = std::stod(item, &used);
        while (used < item.size() && std::isspace(uint8_t(item[used]))) ++used;
        if (used != item.size())
            throw std::runtime_error(key + ": not a number: " + item);
        values.push_back(v);
    }
    if (values.empty()) throw std::runtime_error(key + ": empty list");
    return values;
}

PhysicalParams physical_from_config(const KvConfig& cfg) {
    PhysicalParams p;
    p.power = cfg.get_num("power", p.power);
    p.gain = cfg.get_num("gain", p.gain);
    p.exposure = cfg.get_num("exposure", p.exposure);
    p.period = cfg.get_num("period", p.period);
    p.ambient = cfg.get_num("ambient", p.ambient);
    p.th1 = cfg.get_num("th1", p.th1);
    p.th2 = cfg.get_num("th2", p.th2);
    p.shot = cfg.get_num("shot", p.shot);
    p.threshold = cfg.get_num("threshold", p.threshold);
    return p;
}

int cmd_gen(const GenerationParams& gp, const std::string& out_path) {
    const Dictionary dict = gp.coding == Coding::manchester
                                ? generate_manchester(gp.L, gp.min_hamming,
                                                      gp.restarts, gp.seed,
                                                      gp.threads)
                                : generate_nrz(gp);
    std::ostringstream counts;
    counts << "candidates=" << dict.stages.candidates
           << " power=" << dict.stages.power
           << " circular=" << dict.stages.circular
           << " ones=" << dict.stages.ones << " zeros=" << dict.stages.zeros
           << " hamming=" << dict.stages.hamming << " rows=" << dict.size()
           << "\n";
    if (out_path.empty()) {
        // dictionary on stdout; keep the counts out of the data stream
        std::cerr << counts.str();
        write_dictionary(std::cout, dict);
    } else {
        write_dictionary_file(out_path, dict);
        std::cout << counts.str();
    }
    return 0;
}

int cmd_table(const std::string& config_path, const std::string& out_path) {
    const KvConfig cfg = parse_kv_file(config_path);
    const int hm = int(cfg.get_int("hm", 3));
    const int restarts = int(cfg.get_int("restarts", 10000));
    const uint64_t seed = uint64_t(cfg.get_int("seed", int64_t(default_seed())));
    const int threads = int(cfg.get_int("threads", 1));

    struct Row {
        int L, n1, n0;
        double duty;
        int64_t d_exact, d_est, x_exact, x_est;
    };
    std::vector<Row> rows;
    for (const std::string& grid_line : cfg.rows) {
        std::istringstream ss(grid_line);
        Row r{};
        if (!(ss >> r.L >> r.duty >> r.n1 >> r.n0))
            throw std::runtime_error("table: bad grid row: " + grid_line);
        std::string rest;
        if (ss >> rest)
            throw std::runtime_error("table: trailing tokens: " + grid_line);
        GenerationParams gp;
        gp.L = r.L;
        gp.duty = r.duty;
        gp.max_run_ones = r.n1;
        gp.max_run_zeros = r.n0;
        gp.min_hamming = hm;
        gp.restarts = restarts;
        gp.seed = seed;
        gp.threads = threads;
        const Dictionary dict = generate_nrz(gp);
        r.d_exact = int64_t(dict.stages.zeros);
        r.d_est = estimate_cardinality(r.L, r.duty, r.n1, r.n0).estimated_total();
        r.x_exact = int64_t(dict.size());
        r.x_est = estimate_cardinality_hm3(r.d_exact, r.L);
        rows.push_back(r);
    }

    with_output(out_path, [&](std::ostream& out) {
        out << "# cmd=table\n";
        out << "# hm=" << hm << "\n";
        out << "# restarts=" << restarts << "\n";
        out << "# seed=" << seed << "\n";
        out << "L,duty,n1,n0,d_exact,d_est,x_exact,x_est\n";
        for (const Row& r : rows)
            out << r.L << ',' << format_double(r.duty) << ',' << r.n1 << ','
                << r.n0 << ',' << r.d_exact << ',' << r.d_est << ','
                << r.x_exact << ',' << r.x_est << "\n";
    });
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    const KvConfig cfg = parse_kv_file(config_path);
    const std::string dict_path = cfg.get("dict", "");
    if (dict_path.empty()) throw std::runtime_error("simulate: dict= required");
    const Dictionary dict = read_dictionary_file(dict_path);

    ChannelParams channel;
    const std::string mode = cfg.get("mode", "bsc");
    if (mode == "physical") {
        channel.mode = ChannelParams::Mode::physical;
        channel.phys = physical_from_config(cfg);
    } else if (mode != "bsc") {
        throw std::runtime_error("simulate: unknown mode: " + mode);
    }

    const std::vector<double> deltas = parse_list(cfg.get("delta", "0"), "delta");
    const std::vector<double> pbs = channel.mode == ChannelParams::Mode::bsc
                                        ? parse_list(cfg.get("pb", "0"), "pb")
                                        : std::vector<double>{0.0};
    const int64_t trials = cfg.get_int("trials", 100000);
    const uint64_t seed = uint64_t(cfg.get_int("seed", int64_t(default_seed())));
    const double eta_d = cfg.get_num("eta_d", -1.0);
    const int threads = int(cfg.get_int("threads", 1));
    const int64_t max_samples = cfg.get_int("max_samples", 0);

    std::vector<SimReport> reports;
    for (double pb : pbs) {
        channel.pb = pb;
        for (double delta : deltas)
            reports.push_back(run_id_experiment(dict, channel, delta, trials,
                                                seed, eta_d, threads,
                                                max_samples));
    }

    std::map<std::string, std::string> echo = cfg.values;
    echo["cmd"] = "simulate";
    echo["seed"] = std::to_string(seed);
    echo["trials"] = std::to_string(trials);
    with_output(out_path, [&](std::ostream& out) {
        write_sim_reports_csv(out, echo, reports);
    });
    return 0;
}

int cmd_capacity(const std::string& config_path, const std::string& out_path) {
    const KvConfig cfg = parse_kv_file(config_path);
    CapacityParams p;
    p.j_min = int(cfg.get_int("j_min", p.j_min));
    p.j_max = int(cfg.get_int("j_max", p.j_max));
    p.p_g = cfg.get_num("p_g", p.p_g);
    p.t_over_sigma = cfg.get_num("t_over_sigma", p.t_over_sigma);
    p.seqs_per_uav = int(cfg.get_int("seqs_per_uav", p.seqs_per_uav));
    p.duty = cfg.get_num("duty", p.duty);
    p.n1 = int(cfg.get_int("n1", p.n1));
    p.n0 = int(cfg.get_int("n0", p.n0));
    p.restarts = int(cfg.get_int("restarts", p.restarts));
    p.seed = uint64_t(cfg.get_int("seed", int64_t(default_seed())));
    p.l_cap = int(cfg.get_int("l_cap", p.l_cap));
    p.threads = int(cfg.get_int("threads", p.threads));
    const CapacityCurve curve = capacity_curve(p);
    with_output(out_path, [&](std::ostream& out) {
        write_capacity_csv(out, curve);
    });
    return 0;
}

int cmd_classify(const std::string& dict_path, const std::string& trace_path,
                 double eta, const std::string& out_path) {
    const Dictionary dict = read_dictionary_file(dict_path);
    const Trace trace = read_trace_file(trace_path);
    if (eta < 0)
        eta = default_threshold(dict.params.L, dict.params.min_hamming);
    Classifier clf(dict.rows, eta);
    with_output(out_path, [&](std::ostream& out) {
        out << "# cmd=classify\n";
        out << "# dict=" << dict_path << "\n";
        out << "# trace=" << trace_path << "\n";
        out << "# eta=" << format_double(eta) << "\n";
        for (size_t k = 0; k < trace.bits.size(); ++k) {
            const Decision d = clf.push(trace.bits[k]);
            out << k << ' ' << d.id << ' ' << format_double(d.score) << "\n";
        }
    });
    return 0;
}

struct TransmitArgs {
    std::string dict_path;
    std::string out_path;
    int row = 0;
    int phase = 0;
    int64_t samples = 0;
    std::string mode = "bsc";
    double pb = 0.0;
    double delta = 0.0;
    double offset = 0.0;
    uint64_t seed = 1;
    PhysicalParams phys;
};

int cmd_transmit(const TransmitArgs& a) {
    const Dictionary dict = read_dictionary_file(a.dict_path);
    if (a.row < 0 || size_t(a.row) >= dict.size())
        throw std::runtime_error("transmit: row index out of range");
    ChannelParams channel;
    if (a.mode == "physical") {
        channel.mode = ChannelParams::Mode::physical;
        channel.phys = a.phys;
    } else if (a.mode == "bsc") {
        channel.pb = a.pb;
    } else {
        throw std::runtime_error("transmit: unknown mode: " + a.mode);
    }
    const int64_t n = a.samples > 0 ? a.samples : 10 * dict.params.L;
    ClockModel tx;  // unit period, no drift
    ClockModel rx;
    rx.period = 1.0 + a.delta;
    rx.start = a.offset;
    const TransmitResult res =
        transmit(dict.rows[size_t(a.row)], n, channel, tx, rx, a.phase, a.seed);

    Trace trace;
    trace.bits = res.bits;
    trace.meta["cmd"] = "transmit";
    trace.meta["dict"] = a.dict_path;
    trace.meta["L"] = std::to_string(dict.params.L);
    trace.meta["row"] = std::to_string(a.row);
    trace.meta["phase"] = std::to_string(a.phase);
    trace.meta["mode"] = a.mode;
    if (a.mode == "bsc") trace.meta["pb"] = format_double(a.pb);
    trace.meta["delta"] = format_double(a.delta);
    trace.meta["offset"] = format_double(a.offset);
    trace.meta["seed"] = std::to_string(a.seed);
    trace.meta["pre_birth"] = std::to_string(res.pre_birth);
    trace.meta["slips"] = std::to_string(res.drift.slips.size());
    if (a.out_path.empty()) {
        write_trace(std::cout, trace);
    } else {
        write_trace_file(a.out_path, trace);
        std::cout << "samples=" << trace.bits.size()
                  << " slips=" << res.drift.slips.size()
                  << " pre_birth=" << res.pre_birth << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        CLI::App app{"blinking-sequence codebooks and identification pipeline"};
        app.require_subcommand(1);
        const uint64_t seed0 = default_seed();

        // gen
        GenerationParams gp;
        gp.seed = seed0;
        std::string gen_coding = "nrz";
        std::string gen_out;
        CLI::App* gen = app.add_subcommand("gen", "generate a dictionary");
        gen->add_option("--coding", gen_coding, "nrz or manchester")
            ->check(CLI::IsMember({"nrz", "manchester"}));
        gen->add_option("-L,--length", gp.L, "sequence length")->required();
        gen->add_option("--bbar", gp.duty, "minimum average power");
        gen->add_option("--n1", gp.max_run_ones, "max run of ones");
        gen->add_option("--n0", gp.max_run_zeros, "max run of zeros");
        gen->add_option("--hm", gp.min_hamming, "circular distance floor");
        gen->add_option("--restarts", gp.restarts, "random-search restarts");
        gen->add_option("--seed", gp.seed, "master seed");
        gen->add_option("--threads", gp.threads, "worker threads");
        gen->add_option("-o,--output", gen_out, "dictionary file (default stdout)");

        // table
        std::string table_cfg, table_out;
        CLI::App* table = app.add_subcommand(
            "table", "exact and estimated cardinalities over a parameter grid");
        table->add_option("config", table_cfg,
                          "key=value config with 'L duty n1 n0' grid rows")
            ->required();
        table->add_option("-o,--output", table_out, "CSV file (default stdout)");

        // simulate
        std::string sim_cfg, sim_out;
        CLI::App* simulate = app.add_subcommand(
            "simulate", "identification-time experiments over (pb, delta) cells");
        simulate->add_option("config", sim_cfg, "key=value config")->required();
        simulate->add_option("-o,--output", sim_out, "CSV file (default stdout)");

        // capacity
        std::string cap_cfg, cap_out;
        CLI::App* capacity = app.add_subcommand(
            "capacity", "clock-limited capacity curves over group size");
        capacity->add_option("config", cap_cfg, "key=value config")->required();
        capacity->add_option("-o,--output", cap_out, "CSV file (default stdout)");

        // classify
        std::string cls_dict, cls_trace, cls_out;
        double cls_eta = -1.0;
        CLI::App* classify = app.add_subcommand(
            "classify", "run the correlation classifier over a sample trace");
        classify->add_option("--dict", cls_dict, "dictionary file")->required();
        classify->add_option("--trace", cls_trace, "sample trace file")->required();
        classify->add_option("--eta", cls_eta,
                             "decision threshold (default from dictionary)");
        classify->add_option("-o,--output", cls_out, "log file (default stdout)");

        // transmit
        TransmitArgs ta;
        ta.seed = seed0;
        CLI::App* transmit = app.add_subcommand(
            "transmit", "stream one row through the clock/noise channel");
        transmit->add_option("--dict", ta.dict_path, "dictionary file")->required();
        transmit->add_option("--row", ta.row, "row index");
        transmit->add_option("--phase", ta.phase, "initial rotation");
        transmit->add_option("-n,--samples", ta.samples,
                             "receiver samples (default 10 L)");
        transmit->add_option("--mode", ta.mode, "bsc or physical")
            ->check(CLI::IsMember({"bsc", "physical"}));
        transmit->add_option("--pb", ta.pb, "bsc flip probability");
        transmit->add_option("--delta", ta.delta, "receiver period offset");
        transmit->add_option("--offset", ta.offset, "receiver start time");
        transmit->add_option("--seed", ta.seed, "master seed");
        transmit->add_option("--power", ta.phys.power, "emitter power");
        transmit->add_option("--gain", ta.phys.gain, "channel DC gain");
        transmit->add_option("--exposure", ta.phys.exposure, "exposure time");
        transmit->add_option("--period", ta.phys.period, "sampling period");
        transmit->add_option("--ambient", ta.phys.ambient, "background level");
        transmit->add_option("--th1", ta.phys.th1, "thermal noise (exposure)");
        transmit->add_option("--th2", ta.phys.th2, "thermal noise (constant)");
        transmit->add_option("--shot", ta.phys.shot, "shot-noise factor");
        transmit->add_option("--threshold", ta.phys.threshold, "pixel threshold");
        transmit->add_option("-o,--output", ta.out_path,
                             "trace file (default stdout)");

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 1;
        }

        if (gen->parsed()) {
            gp.coding = coding_from_name(gen_coding);
            return cmd_gen(gp, gen_out);
        }
        if (table->parsed()) return cmd_table(table_cfg, table_out);
        if (simulate->parsed()) return cmd_simulate(sim_cfg, sim_out);
        if (capacity->parsed()) return cmd_capacity(cap_cfg, cap_out);
        if (classify->parsed())
            return cmd_classify(cls_dict, cls_trace, cls_eta, cls_out);
        if (transmit->parsed()) return cmd_transmit(ta);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
