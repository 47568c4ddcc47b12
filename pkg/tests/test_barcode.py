from gmpy2 import mpq

from harmonic_barcode.barcode import (END, PAIRED, Bar, Barcode, barcode_from_json,
                                      barcode_to_json)
from harmonic_barcode.engine import compute_harmonic_barcode


def test_json_round_trip(triangle):
    bc, _ = compute_harmonic_barcode(triangle)
    text = barcode_to_json(bc, triangle.timestamp_map())
    back = barcode_from_json(text)
    assert back == bc
    assert barcode_to_json(back, triangle.timestamp_map()) == text


def test_json_schema(triangle):
    import json
    bc, _ = compute_harmonic_barcode(triangle)
    doc = json.loads(barcode_to_json(bc, triangle.timestamp_map()))
    assert doc["m"] == 7
    bar = doc["bars"][2]
    assert set(bar) == {"degree", "birth_index", "death_index", "birth_time", "death_time",
                        "death_kind", "representative"}
    assert bar["death_index"] == 7 and bar["death_time"] is None
    assert bar["representative"] == {"0": "1", "1": "1", "2": "1"}


def test_degree_filter_in_json(triangle):
    bc, _ = compute_harmonic_barcode(triangle)
    back = barcode_from_json(barcode_to_json(bc, triangle.timestamp_map(), degrees=[1]))
    assert [b.interval for b in back] == [(6, 6)]


def test_counters_ignore_end_bars_for_deaths():
    bc = Barcode(3, [Bar(0, 1, 3, {}, END), Bar(0, 2, 2, {}, PAIRED)])
    assert bc.births(0) == {1: 1, 2: 1}
    assert bc.deaths(0) == {2: 1}
    assert Bar(0, 2, 4).contains(4) and not Bar(0, 2, 4).contains(5)
    assert bc.intervals(0) == [(1, 3), (2, 2)]


def test_fractional_representative_survives_json():
    bc = Barcode(2, [Bar(0, 1, 2, {0: mpq(1, 3), 1: mpq(-2, 7)}, END)])
    assert barcode_from_json(barcode_to_json(bc)).bars[0].representative == {0: mpq(1, 3), 1: mpq(-2, 7)}
