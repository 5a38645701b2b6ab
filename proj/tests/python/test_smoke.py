import math

import blinkid as bk


def test_generation_counts_and_invariants():
    d = bk.generate_nrz(8, 0.4, 7, 7, hm=1)
    assert len(d) == 22
    assert d.length == 8
    assert d.stages.zeros == 22
    d.validate()
    assert all(len(r) == 8 for r in d.rows)
    assert all(r == bk.canonical(r) for r in d.rows)

    m = bk.generate_manchester(5, hm=1)
    assert len(m) == 6
    assert m.normalized_duration() == 10


def test_estimates():
    assert bk.estimate_cardinality(10, 0.5, 7, 2).estimated_total() == 41
    assert bk.estimate_cardinality_hm3(42, 10) == 4


def test_distance_filter():
    d = bk.generate_nrz(13, 0.4, 7, 7, hm=3, restarts=10000, seed=1)
    assert len(d) == 22
    rows = d.rows
    assert all(
        bk.circular_hamming(a, b) >= 3
        for i, a in enumerate(rows)
        for b in rows[i + 1:]
    )
    again = bk.hamming_filter_random(
        bk.generate_nrz(13, 0.4, 7, 7, hm=1).rows, 3, 10000, 1, threads=3
    )
    assert sorted(again) == rows


def test_classifier_roundtrip():
    d = bk.generate_nrz(8, 0.4, 7, 7, hm=1)
    clf = bk.Classifier(d.rows, bk.default_threshold(8, 1))
    stream = (d.rows[3] * 3)[2:]
    dec = None
    for b in stream[:10]:
        dec = clf.push(int(b))
    assert dec.id == 3
    assert math.isclose(dec.score, 1.0)
    score, shift = bk.correlate(d.rows[3], d.rows[3])
    assert math.isclose(score, 1.0) and shift == 0


def test_channel_and_transmit():
    res = bk.transmit("00110101", 64, bk.bsc(0.0), delta=0.01, seed=5)
    assert len(res["bits"]) == 64
    assert math.isclose(res["delta"], 0.01)

    p = bk.PhysicalParams()
    p.th2 = 1e-12
    p.threshold = 0.5 * p.gain * p.power * p.exposure
    assert bk.bit_error_probability(p, ["11111111"]) < 1e-9


def test_experiment_and_analytics():
    d = bk.generate_nrz(8, 0.4, 7, 7, hm=1)
    rep = bk.run_id_experiment(d, bk.bsc(0.001), 0.0, 4000, seed=3, threads=2)
    assert rep.undecided == 0
    assert abs(rep.e_td - 8.03) < 0.3
    assert rep.p_ce < 0.05

    an = bk.id_time_analytic(8, 0.001, 1)
    assert abs(an.expected - 8.03) < 0.05
    hist = bk.id_time_mc(8, 0.1, 1, 20000, seed=4, threads=2)
    assert sum(hist) == 20000


def test_capacity():
    assert abs(bk.capacity_l_max(2, 0.999, 1e4) - 158.1337) < 1e-3
    curve = bk.capacity_curve(j_max=32, l_cap=10, restarts=100, threads=2)
    assert curve.crossing_h1 == 29


def test_io_roundtrip(tmp_path):
    d = bk.generate_nrz(8, 0.4, 7, 7, hm=1)
    path = str(tmp_path / "a.dict")
    bk.write_dictionary(path, d)
    d2 = bk.read_dictionary(path)
    assert d2.rows == d.rows
    assert d2.length == d.length
