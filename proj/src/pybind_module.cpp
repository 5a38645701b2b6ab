// Python bindings for the main operations: dictionary generation and
// estimation, correlation classification, channel models, identification
// experiments, and the capacity curve. Sequences cross the boundary as bit
// strings.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "blinkid/channel.hpp"
#include "blinkid/classifier.hpp"
#include "blinkid/codebook.hpp"
#include "blinkid/io.hpp"
#include "blinkid/seq.hpp"
#include "blinkid/sim.hpp"

namespace py = pybind11;
using namespace blinkid;

namespace {

std::vector<std::string> rows_to_strings(const std::vector<BitSeq>& rows) {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const BitSeq& r : rows) out.push_back(r.str());
    return out;
}

std::vector<BitSeq> strings_to_rows(const std::vector<std::string>& rows) {
    std::vector<BitSeq> out;
    out.reserve(rows.size());
    for (const std::string& r : rows) out.push_back(BitSeq::from_string(r));
    return out;
}

GenerationParams nrz_params(int L, double duty, int n1, int n0, int hm,
                            int restarts, uint64_t seed, int threads) {
    GenerationParams gp;
    gp.coding = Coding::nrz;
    gp.L = L;
    gp.duty = duty;
    gp.max_run_ones = n1;
    gp.max_run_zeros = n0;
    gp.min_hamming = hm;
    gp.restarts = restarts;
    gp.seed = seed;
    gp.threads = threads;
    return gp;
}

} // namespace

PYBIND11_MODULE(blinkid, m) {
    m.doc() = "cyclic blinking-sequence codebooks and the sampled-channel "
              "identification pipeline";

    py::class_<StageCounts>(m, "StageCounts")
        .def_readonly("candidates", &StageCounts::candidates)
        .def_readonly("power", &StageCounts::power)
        .def_readonly("circular", &StageCounts::circular)
        .def_readonly("ones", &StageCounts::ones)
        .def_readonly("zeros", &StageCounts::zeros)
        .def_readonly("hamming", &StageCounts::hamming)
        .def("__repr__", [](const StageCounts& s) {
            return "StageCounts(candidates=" + std::to_string(s.candidates) +
                   ", power=" + std::to_string(s.power) +
                   ", circular=" + std::to_string(s.circular) +
                   ", ones=" + std::to_string(s.ones) +
                   ", zeros=" + std::to_string(s.zeros) +
                   ", hamming=" + std::to_string(s.hamming) + ")";
        });

    py::class_<Dictionary>(m, "Dictionary")
        .def_property_readonly(
            "rows", [](const Dictionary& d) { return rows_to_strings(d.rows); })
        .def_property_readonly("length", &Dictionary::length)
        .def_property_readonly(
            "coding",
            [](const Dictionary& d) { return coding_name(d.params.coding); })
        .def_property_readonly(
            "min_hamming",
            [](const Dictionary& d) { return d.params.min_hamming; })
        .def_readonly("stages", &Dictionary::stages)
        .def("normalized_duration", &Dictionary::normalized_duration)
        .def("validate", &Dictionary::validate)
        .def("__len__", [](const Dictionary& d) { return d.rows.size(); })
        .def("__repr__", [](const Dictionary& d) {
            return "Dictionary(coding=" + coding_name(d.params.coding) +
                   ", L=" + std::to_string(d.params.L) +
                   ", rows=" + std::to_string(d.rows.size()) + ")";
        });

    m.def("generate_nrz",
          [](int L, double duty, int n1, int n0, int hm, int restarts,
             uint64_t seed, int threads) {
              return generate_nrz(
                  nrz_params(L, duty, n1, n0, hm, restarts, seed, threads));
          },
          py::arg("L"), py::arg("duty"), py::arg("n1"), py::arg("n0"),
          py::arg("hm") = 1, py::arg("restarts") = 10000, py::arg("seed") = 1,
          py::arg("threads") = 1);

    m.def("generate_manchester", &generate_manchester, py::arg("L"),
          py::arg("hm") = 1, py::arg("restarts") = 10000, py::arg("seed") = 1,
          py::arg("threads") = 1);

    py::class_<PartitionProfile>(m, "PartitionProfile")
        .def_readonly("L", &PartitionProfile::L)
        .def_readonly("wmin", &PartitionProfile::wmin)
        .def_readonly("est_d", &PartitionProfile::est_d)
        .def("estimated_total", &PartitionProfile::estimated_total);

    m.def("estimate_cardinality", &estimate_cardinality, py::arg("L"),
          py::arg("duty"), py::arg("n1"), py::arg("n0"));
    m.def("estimate_cardinality_hm3", &estimate_cardinality_hm3,
          py::arg("exact_d"), py::arg("L"));

    m.def("hamming_filter_random",
          [](const std::vector<std::string>& rows, int hm, int restarts,
             uint64_t seed, int threads) {
              return rows_to_strings(hamming_filter_random(
                  strings_to_rows(rows), hm, restarts, seed, threads));
          },
          py::arg("rows"), py::arg("min_hamming"), py::arg("restarts"),
          py::arg("seed"), py::arg("threads") = 1);

    m.def("circular_hamming",
          [](const std::string& a, const std::string& b) {
              return circular_hamming(BitSeq::from_string(a),
                                      BitSeq::from_string(b));
          },
          py::arg("a"), py::arg("b"));
    m.def("canonical",
          [](const std::string& s) {
              return BitSeq::from_string(s).canonical().str();
          },
          py::arg("s"));

    m.def("default_threshold", &default_threshold, py::arg("L"),
          py::arg("min_hamming"));
    m.def("correlate",
          [](const std::string& window, const std::string& row) {
              const Correlation c = correlate(BitSeq::from_string(window),
                                              BitSeq::from_string(row));
              return py::make_tuple(c.score, c.shift);
          },
          py::arg("window"), py::arg("row"));

    py::class_<Decision>(m, "Decision")
        .def_readonly("id", &Decision::id)
        .def_readonly("arg", &Decision::arg)
        .def_readonly("score", &Decision::score)
        .def_readonly("shift", &Decision::shift)
        .def("__repr__", [](const Decision& d) {
            return "Decision(id=" + std::to_string(d.id) +
                   ", arg=" + std::to_string(d.arg) +
                   ", score=" + std::to_string(d.score) +
                   ", shift=" + std::to_string(d.shift) + ")";
        });

    py::class_<Classifier>(m, "Classifier")
        .def(py::init([](const std::vector<std::string>& rows, double eta) {
                 return Classifier(strings_to_rows(rows), eta);
             }),
             py::arg("rows"), py::arg("eta_d"))
        .def("push", &Classifier::push, py::arg("bit"))
        .def("reset", &Classifier::reset)
        .def_property_readonly("length", &Classifier::length)
        .def_property_readonly("threshold", &Classifier::threshold);

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<>())
        .def_readwrite("power", &PhysicalParams::power)
        .def_readwrite("gain", &PhysicalParams::gain)
        .def_readwrite("exposure", &PhysicalParams::exposure)
        .def_readwrite("period", &PhysicalParams::period)
        .def_readwrite("ambient", &PhysicalParams::ambient)
        .def_readwrite("th1", &PhysicalParams::th1)
        .def_readwrite("th2", &PhysicalParams::th2)
        .def_readwrite("shot", &PhysicalParams::shot)
        .def_readwrite("threshold", &PhysicalParams::threshold);

    py::class_<ChannelParams>(m, "ChannelParams");
    m.def("bsc",
          [](double pb) {
              ChannelParams ch;
              ch.mode = ChannelParams::Mode::bsc;
              ch.pb = pb;
              return ch;
          },
          py::arg("pb"));
    m.def("physical",
          [](const PhysicalParams& p) {
              ChannelParams ch;
              ch.mode = ChannelParams::Mode::physical;
              ch.phys = p;
              return ch;
          },
          py::arg("params"));

    m.def("lambertian_gain", &lambertian_gain, py::arg("k"), py::arg("d"),
          py::arg("phi"), py::arg("phi_half"));
    m.def("bit_error_probability",
          [](const PhysicalParams& p, const std::vector<std::string>& rows) {
              return bit_error_probability(p, strings_to_rows(rows));
          },
          py::arg("params"), py::arg("rows"));

    m.def("transmit",
          [](const std::string& row, int64_t n, const ChannelParams& channel,
             double delta, double offset, int phase, uint64_t seed) {
              const ClockModel tx{1.0, 0.0, Jitter::none, 0.0, 0.0};
              const ClockModel rx{1.0 + delta, 0.0, Jitter::none, 0.0,
                                  offset};
              const TransmitResult res = transmit(BitSeq::from_string(row), n,
                                                  channel, tx, rx, phase,
                                                  seed);
              py::dict out;
              out["bits"] = res.bits;
              out["delta"] = res.drift.delta;
              out["slips"] = res.drift.slips.size();
              out["pre_birth"] = res.pre_birth;
              return out;
          },
          py::arg("row"), py::arg("n"), py::arg("channel"),
          py::arg("delta") = 0.0, py::arg("offset") = 0.0,
          py::arg("phase") = 0, py::arg("seed") = 1);

    py::class_<IdTimeDistribution>(m, "IdTimeDistribution")
        .def_readonly("L", &IdTimeDistribution::L)
        .def_readonly("pb", &IdTimeDistribution::pb)
        .def_readonly("p", &IdTimeDistribution::p)
        .def_readonly("tail_analytic", &IdTimeDistribution::tail_analytic)
        .def_readonly("expected", &IdTimeDistribution::expected)
        .def_readonly("residual", &IdTimeDistribution::residual);

    m.def("id_time_analytic", &id_time_analytic, py::arg("L"), py::arg("pb"),
          py::arg("min_hamming"), py::arg("n_max") = 0);
    m.def("id_time_mc", &id_time_mc, py::arg("L"), py::arg("pb"),
          py::arg("min_hamming"), py::arg("trials"), py::arg("seed"),
          py::arg("n_max") = 0, py::arg("threads") = 1);

    py::class_<SimReport>(m, "SimReport")
        .def_readonly("L", &SimReport::L)
        .def_readonly("min_hamming", &SimReport::min_hamming)
        .def_readonly("pb", &SimReport::pb)
        .def_readonly("delta", &SimReport::delta)
        .def_readonly("trials", &SimReport::trials)
        .def_readonly("seed", &SimReport::seed)
        .def_readonly("eta_d", &SimReport::eta_d)
        .def_readonly("e_td", &SimReport::e_td)
        .def_readonly("se_td", &SimReport::se_td)
        .def_readonly("p_ce", &SimReport::p_ce)
        .def_readonly("se_pce", &SimReport::se_pce)
        .def_readonly("decided", &SimReport::decided)
        .def_readonly("undecided", &SimReport::undecided)
        .def_readonly("td_hist", &SimReport::td_hist)
        .def("__repr__", [](const SimReport& r) {
            return "SimReport(pb=" + std::to_string(r.pb) +
                   ", delta=" + std::to_string(r.delta) +
                   ", e_td=" + std::to_string(r.e_td) +
                   ", p_ce=" + std::to_string(r.p_ce) + ")";
        });

    m.def("run_id_experiment", &run_id_experiment, py::arg("dict"),
          py::arg("channel"), py::arg("delta"), py::arg("trials"),
          py::arg("seed"), py::arg("eta_d") = -1.0, py::arg("threads") = 1,
          py::arg("max_samples") = 0);

    m.def("capacity_l_max", &capacity_l_max, py::arg("j"), py::arg("p_g"),
          py::arg("t_over_sigma"));

    py::class_<CapacityRow>(m, "CapacityRow")
        .def_readonly("j", &CapacityRow::j)
        .def_readonly("l_max", &CapacityRow::l_max)
        .def_readonly("l_min_h1", &CapacityRow::l_min_h1)
        .def_readonly("l_min_h3", &CapacityRow::l_min_h3);

    py::class_<CapacityCurve>(m, "CapacityCurve")
        .def_readonly("rows", &CapacityCurve::rows)
        .def_readonly("crossing_h1", &CapacityCurve::crossing_h1)
        .def_readonly("crossing_h3", &CapacityCurve::crossing_h3);

    m.def("capacity_curve",
          [](int j_min, int j_max, double p_g, double t_over_sigma,
             int seqs_per_uav, double duty, int n1, int n0, int restarts,
             uint64_t seed, int l_cap, int threads) {
              CapacityParams cp;
              cp.j_min = j_min;
              cp.j_max = j_max;
              cp.p_g = p_g;
              cp.t_over_sigma = t_over_sigma;
              cp.seqs_per_uav = seqs_per_uav;
              cp.duty = duty;
              cp.n1 = n1;
              cp.n0 = n0;
              cp.restarts = restarts;
              cp.seed = seed;
              cp.l_cap = l_cap;
              cp.threads = threads;
              return capacity_curve(cp);
          },
          py::arg("j_min") = 2, py::arg("j_max") = 60,
          py::arg("p_g") = 0.999, py::arg("t_over_sigma") = 1e4,
          py::arg("seqs_per_uav") = 1, py::arg("duty") = 0.3,
          py::arg("n1") = 6, py::arg("n0") = 6, py::arg("restarts") = 10000,
          py::arg("seed") = 1, py::arg("l_cap") = 18, py::arg("threads") = 1);

    m.def("read_dictionary", &read_dictionary_file, py::arg("path"));
    m.def("write_dictionary",
          [](const std::string& path, const Dictionary& d) {
              write_dictionary_file(path, d);
          },
          py::arg("path"), py::arg("dictionary"));
}
