import json
import math

import numpy as np
import pytest

from thetawitness import (Graph, HeuristicConfig, InconsistentRealization, InvalidParameter,
                          Realization, behaviour_from_realization, generate_mermin, generate_qite,
                          generate_standard, qite_or, realization_cost, verify_or, witness_report)
from thetawitness.witness import (OrthonormalRepresentation, format_report, load_vectors,
                                  recognize_qite, umbrella_c5)

FAST = HeuristicConfig(d=2, restarts=3, iters=30)


def test_qite_or_k3_golden():
    o = qite_or(3)
    s2, s3 = math.sqrt(2), math.sqrt(3)
    expected = [
        [1, 0, 0], [0, 1, 0], [0, 0, 1],
        [0, 1 / s2, -1 / s2], [1 / s2, 0, -1 / s2], [1 / s2, -1 / s2, 0],
        [1 / s3, 1 / s3, 1 / s3],
    ]
    assert np.allclose(np.array(o.vectors), expected, atol=1e-15)


def test_qite_or_k4_special_vertex():
    o = qite_or(4)
    assert np.allclose(o.vectors[4], np.array([0, 1, 1, -2]) / math.sqrt(6))


@pytest.mark.parametrize("k", range(3, 13))
def test_qite_or_valid(k):
    g = generate_qite(k)
    o = qite_or(k)
    assert o.d == k
    assert verify_or(g, o, tol=1e-10).passed
    assert realization_cost(o) <= k + 1e-9


def test_qite_or_invalid():
    with pytest.raises(InvalidParameter):
        qite_or(2)


def test_verify_or_detects_perturbation():
    g = generate_qite(5)
    o = qite_or(5)
    vecs = [v.copy() for v in o.vectors]
    # vertex 5 is the spoke of clique vertex 0; push it along e_0
    vecs[5][0] += 0.01
    rep = verify_or(g, OrthonormalRepresentation(5, vecs), tol=1e-9)
    assert not rep.passed
    assert ((0, 5), pytest.approx(0.01)) in [(e, v) for e, v in rep.edge_violations]
    assert any(v == 5 for v, _ in rep.norm_violations)


def test_verify_or_mixed_dimensions():
    g = generate_standard("complete", 2)
    with pytest.raises(InvalidParameter):
        verify_or(g, OrthonormalRepresentation(2, [np.array([1.0, 0.0]), np.array([0.0, 1.0, 0.0])]))


def test_verify_or_complex():
    g = generate_standard("complete", 2)
    v = np.array([1, 1j]) / math.sqrt(2)
    w = np.array([1, -1j]) / math.sqrt(2)
    assert verify_or(g, OrthonormalRepresentation(2, [v, w])).passed


def test_behaviour_deterministic():
    g = generate_standard("cycle", 5)
    vecs = [np.eye(2)[0] if i in (0, 2) else np.eye(2)[1] for i in range(5)]
    p = behaviour_from_realization(Realization(2, np.eye(2)[0], vecs))
    assert np.allclose(p, [1, 0, 1, 0, 0])


def test_behaviour_umbrella():
    p = behaviour_from_realization(umbrella_c5(), generate_standard("cycle", 5))
    assert np.allclose(p, 1 / math.sqrt(5), atol=1e-12)


def test_behaviour_orthogonal_state():
    u = umbrella_c5()
    r = Realization(3, np.array([1.0, 0, 0]), [np.array([0, 1.0, 0])] * 5)
    assert np.allclose(behaviour_from_realization(r), 0)


def test_behaviour_inconsistent():
    g = generate_standard("complete", 2)
    v = np.array([1.0, 0.0])
    with pytest.raises(InconsistentRealization):
        behaviour_from_realization(Realization(2, v, [v, v]), g)


def test_load_vectors_formats():
    text = json.dumps({"d": 2, "vectors": [[[1, 0], [0, 0]], [0, 1]], "state": [[1, 0], [0, 0]]})
    o, state = load_vectors(text)
    assert o.d == 2 and np.allclose(o.vectors[1], [0, 1])
    assert np.allclose(state, [1, 0])
    o2, _ = load_vectors(json.dumps(qite_or(3).to_dict()))
    assert np.allclose(np.array(o2.vectors), np.array(qite_or(3).vectors))


@pytest.mark.parametrize("k", range(2, 9))
def test_recognize_qite(k):
    g = generate_qite(k)
    assert recognize_qite(g) == k
    perm = list(reversed(range(g.n)))
    assert recognize_qite(g.relabel(perm)) == k


def test_recognize_qite_negative():
    assert recognize_qite(generate_standard("cycle", 7)) is None
    assert recognize_qite(generate_mermin()) is None


def test_report_qite3():
    rep = witness_report(generate_qite(3), [3], FAST)
    assert rep["schema"] == 1
    assert rep["alpha"]["value"] == 3
    assert rep["theta"] == pytest.approx(3.06418, abs=1e-5)
    assert rep["orthogonal_rank"]["value"] == 3
    entry = rep["dimensions"][0]
    assert entry["label"] == "lower bound (heuristic)"
    assert entry["proven_upper_bound"]["value"] == 3
    assert [(w["bound"], w["min_dimension"]) for w in rep["witnesses"]] == [(3, 4)]


def test_report_c5_two_dims():
    rep = witness_report(generate_standard("cycle", 5), [2], FAST)
    assert [(w["bound"], w["min_dimension"]) for w in rep["witnesses"]] == [(2, 3)]
    assert "dimension >= 3" in rep["witnesses"][0]["statement"]


def test_report_k4_no_witness():
    rep = witness_report(generate_standard("complete", 4), [2], FAST)
    assert rep["witnesses"] == []


def test_report_witnesses_cite_proven_bounds_only():
    g = generate_qite(4)
    rep = witness_report(g, [2, 3, 4, 5, 6], FAST)
    heuristic_values = {e["heuristic_lower_bound"] for e in rep["dimensions"]}
    for w in rep["witnesses"]:
        assert w["source"]
        assert w["bound"] in (3, 4, 4.0) or w["bound"] not in heuristic_values
    assert rep["alpha"]["value"] <= rep["theta"] + 1e-6
    assert all(e["label"] == "lower bound (heuristic)" for e in rep["dimensions"])
    assert {w["min_dimension"] for w in rep["witnesses"]} == {3, 5}


def test_report_barvinok_entry_has_theta_bound():
    g = generate_standard("cycle", 5)
    rep = witness_report(g, [4], FAST)
    ub = rep["dimensions"][0]["proven_upper_bound"]
    assert ub["value"] == pytest.approx(math.sqrt(5), abs=1e-5)
    assert rep["witnesses"] == []


def test_report_json_and_pretty():
    rep = witness_report(generate_qite(3), [2, 3], FAST)
    json.dumps(rep)
    text = format_report(rep)
    assert "witnesses:" in text and "3.06418" in text


def test_report_weighted():
    g = generate_qite(3).with_weights([1, 1, 1, 1, 1, 1, 2])
    rep = witness_report(g, [3], FAST)
    assert rep["graph"]["weighted"]
    assert rep["theta"] - 3 > 0.26


def test_report_invalid_dims():
    with pytest.raises(InvalidParameter):
        witness_report(generate_qite(3), [], FAST)
