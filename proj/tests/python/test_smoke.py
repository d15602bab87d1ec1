"""Binding smoke tests: every exported operation on small exact inputs."""

import os
from fractions import Fraction

import pytest

import cbdkit

DATA = os.environ.get("CBD_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))

SPECKER_DOC = """\
system "specker"
contents q1 q2 q3
context c1 measures q1 q2 { ++: 1/2, --: 1/2 }
context c2 measures q2 q3 { ++: 1/2, --: 1/2 }
context c3 measures q1 q3 { +-: 1/2, -+: 1/2 }
"""


@pytest.fixture(scope="module")
def specker():
    return cbdkit.parse(SPECKER_DOC)


def test_load_matches_parse(specker):
    loaded = cbdkit.load(os.path.join(DATA, "specker.cbd"))
    assert loaded == specker


def test_system_properties(specker):
    assert specker.name == "specker"
    assert specker.contents == ["q1", "q2", "q3"]
    assert specker.contexts == [
        ("c1", ["q1", "q2"]),
        ("c2", ["q2", "q3"]),
        ("c3", ["q1", "q3"]),
    ]
    assert specker.pmf("c3") == {"+-": Fraction(1, 2), "-+": Fraction(1, 2)}
    assert "specker" in repr(specker)
    assert cbdkit.validate(specker) == []


def test_serialize_round_trip(specker):
    text = cbdkit.serialize(specker)
    assert cbdkit.parse(text) == specker
    assert cbdkit.serialize(cbdkit.parse(text)) == text


def test_decide_contextuality(specker):
    verdict = cbdkit.decide_contextuality(specker)
    assert verdict["contextual"] is True
    assert verdict["delta"] == Fraction(1)
    assert verdict["max_total"] == Fraction(3)
    assert verdict["attained_total"] == Fraction(2)
    assert verdict["witness"] is None


def test_analyze_report_shape(specker):
    report = cbdkit.analyze(specker)
    assert report["schema"] == "cbd.report/1"
    assert report["system"]["name"] == "specker"
    assert report["validation"]["valid"] is True
    assert report["consistent_connectedness"]["consistent"] is True
    assert report["cyclic"]["rank"] == 3
    assert report["cyclic"]["correlations"] == ["1", "1", "-1"]
    assert report["cyclic"]["s_odd"] == "3"
    assert report["cyclic"]["bound"] == "1"
    assert report["cyclic"]["verdict"] == "contextual"
    assert report["analysis"]["contextual"] is True
    assert report["analysis"]["delta"] == "1"
    assert report["analysis"]["attained_total"] == "2"
    assert report["perfect_coupling"]["feasible"] is False
    assert report["perfect_coupling"]["certificate"]["rows"]
    assert set(report["timings_ms"]) == {"analyze", "perfect", "total"}


def test_perfect_coupling_certificate(specker):
    result = cbdkit.check_perfect_coupling(specker)
    assert result["feasible"] is False
    assert result["witness"] is None
    assert result["certificate"]
    for row, coefficient in result["certificate"]:
        assert isinstance(row, str)
        assert isinstance(coefficient, Fraction)


def test_detect_cyclic(specker):
    profile = cbdkit.detect_cyclic(specker)
    assert profile["rank"] == 3
    assert profile["cycle"] == ["q1", "c1", "q2", "c2", "q3", "c3"]
    assert profile["correlations"] == [Fraction(1), Fraction(1), Fraction(-1)]
    assert profile["s_odd"] == Fraction(3)
    assert profile["verdict"] == "contextual"

    lonely = cbdkit.parse("contents a\ncontext c measures a { +: 1 }")
    assert cbdkit.detect_cyclic(lonely) is None


def test_s_odd_accepts_mixed_exact_inputs():
    assert cbdkit.s_odd([1, 1, -1]) == Fraction(3)
    assert cbdkit.s_odd(["1/2", Fraction(1, 3)]) == Fraction(1, 6)
    with pytest.raises(ValueError):
        cbdkit.s_odd(["0.1234567890"])


def test_reconstruct_lambda_and_factorization(specker):
    model = cbdkit.reconstruct_lambda(specker, "c1")
    assert model["contents"] == ["q1", "q2"]
    assert model["atoms"] == [("++", Fraction(1, 2)), ("--", Fraction(1, 2))]
    assert model["responses"]["q1"] == {"++": 1, "--": -1}

    identity = cbdkit.verify_factorization(model, model)
    assert identity == {"++": "++", "--": "--"}

    refined = {
        "contents": ["q1", "q2"],
        "atoms": [("a", "1/4"), ("b", "1/4"), ("c", "1/2")],
        "responses": {
            "q1": {"a": 1, "b": 1, "c": -1},
            "q2": {"a": 1, "b": 1, "c": -1},
        },
    }
    h = cbdkit.verify_factorization(model, refined)
    assert h == {"a": "++", "b": "++", "c": "--"}

    skewed = dict(refined, atoms=[("a", "1/2"), ("b", "1/4"), ("c", "1/4")])
    assert cbdkit.verify_factorization(model, skewed) is None


def test_build_system_and_reduction():
    uniform = {"++": "1/4", "+-": "1/4", "-+": "1/4", "--": "1/4"}
    system = cbdkit.build_system(
        "independent",
        ["a", "b", "c"],
        [("c1", ["a", "b"]), ("c2", ["b", "c"]), ("c3", ["a", "c"])],
        {"c1": uniform, "c2": uniform, "c3": uniform},
    )
    verdict = cbdkit.decide_contextuality(system)
    assert verdict["contextual"] is False
    assert verdict["delta"] == Fraction(0)
    witness = verdict["witness"]
    assert witness is not None
    assert sum(witness.values()) == Fraction(1)

    reduced = cbdkit.reduce_coupling(system, witness)
    assert reduced["contents"] == ["a", "b", "c"]
    assert sum(reduced["pmf"].values()) == Fraction(1)

    perfect = cbdkit.check_perfect_coupling(system)
    assert perfect["feasible"] is True
    assert perfect["certificate"] is None


def test_reduce_rejects_imperfect_coupling(specker):
    with pytest.raises(cbdkit.CbdError):
        cbdkit.reduce_coupling(specker, {"++|++|++": 1})


def test_marginal_helpers(specker):
    assert cbdkit.marginal(specker, "c1", ["q1"]) == {"+": Fraction(1, 2), "-": Fraction(1, 2)}
    assert cbdkit.success_probability(specker, "q1", "c1") == Fraction(1, 2)
    assert cbdkit.correlation(specker, "c3", "q1", "q3") == Fraction(-1)
    assert cbdkit.is_consistently_connected(specker) is True
    assert cbdkit.connection_max_equality("1/2", Fraction(3, 4)) == Fraction(3, 4)
    assert cbdkit.connection_max_equality(1, 0) == Fraction(0)


def test_ingest_trials():
    format_text = "contents x y\ncontext u measures x y\ncontext v measures y\n"
    csv_text = "context,x,y\nu,+1,+1\nu,+1,-1\nu,+1,+1\nv,,-1\n"
    system = cbdkit.ingest_trials(csv_text, format_text)
    assert system.pmf("u") == {"++": Fraction(2, 3), "+-": Fraction(1, 3)}
    assert system.pmf("v") == {"-": Fraction(1)}


def test_errors_are_value_errors():
    assert issubclass(cbdkit.CbdError, ValueError)
    with pytest.raises(cbdkit.CbdError) as err:
        cbdkit.parse("contents a\ncontext c measures a { +: 3/4 }")
    assert "sums to 3/4" in str(err.value)
    with pytest.raises(cbdkit.CbdError):
        cbdkit.reconstruct_lambda(cbdkit.parse(SPECKER_DOC), "nope")
    with pytest.raises(ValueError):
        cbdkit.connection_max_equality("x", 1)
