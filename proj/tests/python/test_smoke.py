import json
import pathlib

import pytest

import nkconf

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


def test_construct_d4_verifies():
    c = nkconf.construct("(D4 5)")
    assert len(c) == 50 and c.k == 5
    assert nkconf.verify(c)["passed"]


def test_json_round_trip():
    c = nkconf.construct("(Nprime9)", seed=2)
    back = nkconf.from_json(c.to_json())
    assert back.to_json() == c.to_json()
    doc = json.loads(c.to_json())
    assert len(doc["points"]) == 54


def test_fixture_ops_match_symbols():
    c = nkconf.load(str(DATA / "celestial_21_4.json"))
    assert nkconf.pencils(c) == (3, 0)
    ps = nkconf.construct(f'(PS (fixture "{DATA / "celestial_21_4.json"}"))')
    assert len(ps) == 84
    assert nkconf.pencils(ps)[0] == 12
    assert nkconf.evaluate("(PS (ground 21))", 4).n == 84


def test_search_k5():
    r = nkconf.search(5)
    assert r.bound == 166
    assert len(r.missing) == 64 and r.missing[0] == 49
    assert r.has(154) and not r.has(165)
    checked, failures = r.audit()
    assert checked == 576 - 166 + 1 and failures == []


def test_errors_carry_kind():
    with pytest.raises(nkconf.NkError) as e:
        nkconf.construct("(D4 4)")
    assert e.value.kind == "ParameterOutOfRange"
    with pytest.raises(nkconf.NkError):
        nkconf.search(7)


def test_cross_ratio_harmonic():
    assert nkconf.cross_ratio((0, 0, 1), (2, 0, 1), (1, 0, 1), (1, 0, 0)) == pytest.approx(-1.0)
