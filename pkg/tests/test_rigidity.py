"""Rigidity certificates, the proof chain, and the counterexample gallery."""

import math

import numpy as np
import pytest

from schwarz_lab import BadParams, BoundaryPoint, HypothesisFailed, gallery, identity_map
from schwarz_lab.rigidity import (
    RigidityConfig,
    RigidityInstance,
    check_proof_chain,
    check_rigidity,
    counterexample_polydisk_eigen,
    equality_case_1d,
    halton_ball_grid,
)

FAST = RigidityConfig(selfmap_samples=400, grid_points=1500)


def basis_anchors(n, p):
    out = []
    for k in range(n):
        v = np.zeros(n, dtype=complex)
        v[k] = 1.0
        out.append(BoundaryPoint(v, p))
    return out


def dft_anchors(n):
    # rows of the DFT matrix are torus points and linearly independent
    F = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    return [BoundaryPoint(F[k], "inf", tolerance=1e-9) for k in range(n)]


def test_identity_certified_all_variants():
    n = 3
    cases = [
        ("p2", 2, basis_anchors(n, 2)),
        ("schwarz_v", 4, basis_anchors(n, 4)),
        ("schwarz_v", "inf", dft_anchors(n)),
        ("rigidity_v", 3, basis_anchors(n, 3)),
        ("polydisk", "inf", dft_anchors(n)),
    ]
    for variant, p, anchors in cases:
        inst = RigidityInstance(identity_map(n), anchors, p, variant)
        rep = check_rigidity(inst, FAST)
        assert rep.verdict == "certified", (variant, p, rep.reason)
        target = float(n) if variant == "polydisk" else 1.0
        assert all(abs(v - target) <= 1e-9 for v in rep.equation_values)
        assert rep.rank == n
        assert rep.identity_residual <= 1e-12


def test_insufficient_anchors_withholds_certificate():
    n = 3
    f = gallery("first_times_last", {"n": n})
    anchors = basis_anchors(n, 3)[1:]  # e2, e3 only; all fixed by f
    inst = RigidityInstance(f, anchors, 3, "schwarz_v")
    rep = check_rigidity(inst, FAST)
    assert rep.verdict == "hypotheses_fail"
    assert rep.reason == "insufficient anchors"
    assert all(abs(v - 1.0) <= 1e-9 for v in rep.equation_values)
    assert rep.rank == n - 1
    assert rep.identity_residual >= 0.1


def test_negated_anchors_fail_equations():
    n = 2
    anchors = [BoundaryPoint(-np.eye(n, dtype=complex)[k], 2) for k in range(n)]
    inst = RigidityInstance(identity_map(n), anchors, 2, "rigidity_v")
    rep = check_rigidity(inst, FAST)
    assert rep.verdict == "equations_fail"
    assert all(abs(v + 1.0) <= 1e-9 for v in rep.equation_values)


def test_hypotheses_fail_short_circuits():
    n = 2
    f = gallery("scaled_identity", {"n": n, "t": 0.5})
    inst = RigidityInstance(f, basis_anchors(n, 2), 2, "p2")
    rep = check_rigidity(inst, FAST)
    assert rep.verdict == "hypotheses_fail"
    assert rep.reason == "anchor is not a fixed point"
    assert rep.equation_values == ()
    f2 = gallery("moebius_fix1", {"a": 0.3})
    inst2 = RigidityInstance(f2, basis_anchors(1, 2), 2, "p2")
    rep2 = check_rigidity(inst2, FAST)
    assert rep2.verdict == "hypotheses_fail"
    assert rep2.reason == "map does not fix the origin"


def test_holder_chain_when_equations_pass():
    n = 2
    inst = RigidityInstance(identity_map(n), basis_anchors(n, 3), 3, "rigidity_v")
    rep = check_rigidity(inst, FAST)
    assert rep.verdict == "certified"
    assert 1.0 - 1e-7 <= rep.quantities["holder_norm_min"]
    assert rep.quantities["holder_norm_max"] <= 1.0 + 1e-7


def test_instance_validation():
    n = 2
    with pytest.raises(BadParams):
        RigidityInstance(identity_map(n), basis_anchors(n, 2), 2, "frobnicate")
    with pytest.raises(BadParams):
        RigidityInstance(identity_map(n), basis_anchors(n, 3), 3, "p2")
    with pytest.raises(BadParams):  # duplicate anchors
        a = basis_anchors(n, 2)
        RigidityInstance(identity_map(n), [a[0], a[0]], 2, "p2")
    with pytest.raises(BadParams):  # basis vectors are not torus points
        RigidityInstance(identity_map(n), basis_anchors(n, "inf"), "inf", "polydisk")
    with pytest.raises(BadParams):  # rigidity_v needs finite p
        RigidityInstance(identity_map(n), dft_anchors(n), "inf", "rigidity_v")


def test_proof_chain_identity_all_links():
    n = 2
    inst = RigidityInstance(identity_map(n), basis_anchors(n, 2), 2, "p2")
    v = check_proof_chain(inst, FAST)
    assert v.passed
    assert all(h.ok for h in v.hypotheses)
    assert v.quantities["jf0_identity_residual"] <= 1e-10


def test_proof_chain_rank_deficiency_detected():
    n = 3
    f = gallery("first_times_last", {"n": n})
    inst = RigidityInstance(f, basis_anchors(n, 3)[1:], 3, "schwarz_v")
    v = check_proof_chain(inst, FAST)
    assert not v.passed
    by_name = {h.name: h for h in v.hypotheses}
    assert by_name["slice_into_disk"].ok
    assert by_name["slice_boundary_data"].ok
    assert by_name["slice_is_identity"].ok
    assert by_name["origin_jacobian_fixes_anchors"].ok
    assert not by_name["origin_jacobian_is_identity"].ok
    assert v.quantities["rank"] == n - 1


def test_proof_chain_rejects_failing_equations():
    n = 2
    anchors = [BoundaryPoint(-np.eye(n, dtype=complex)[k], 2) for k in range(n)]
    inst = RigidityInstance(identity_map(n), anchors, 2, "rigidity_v")
    with pytest.raises(HypothesisFailed):
        check_proof_chain(inst, FAST)


def test_equality_case_identity_and_square():
    v = equality_case_1d(identity_map(1), FAST)
    assert v.passed
    assert v.quantities["equality_detected"] == 1.0
    assert v.quantities["identity_residual"] <= 1e-12
    v2 = equality_case_1d(gallery("zhu_extremal", {"a": 0.0, "d": 0.0}), FAST)
    assert v2.passed
    assert v2.quantities["equality_detected"] == 0.0
    assert v2.quantities["fprime1"] == pytest.approx(2.0, abs=1e-9)


def test_equality_case_extremal_derivative():
    v = equality_case_1d(gallery("zhu_extremal", {"a": 0.0, "d": 0.5}), FAST)
    assert v.quantities["fprime1"] == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert v.quantities["equality_detected"] == 0.0


def test_counterexample_frozen_values():
    v3 = counterexample_polydisk_eigen(3)
    assert v3.passed
    assert v3.quantities["residual"] == pytest.approx(math.sqrt(6.0) / 3.0, abs=1e-9)
    assert v3.quantities["lambda_star"] == pytest.approx(4.0 / 3.0, abs=1e-10)
    v2 = counterexample_polydisk_eigen(2)
    assert v2.quantities["residual"] == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-9)


def test_halton_grid_deterministic_and_interior():
    g1 = halton_ball_grid(3, 2, 500)
    g2 = halton_ball_grid(3, 2, 500)
    assert np.array_equal(g1, g2)
    norms = (np.abs(g1) ** 3).sum(axis=1) ** (1 / 3)
    assert norms.max() < 1.0


def test_gallery_completeness_no_false_certificates():
    # every non-identity origin-fixing gallery self-map must fail something
    n = 2
    anchors = basis_anchors(n, 2)
    for name, params in [
        ("scaled_identity", {"n": n, "t": 0.5}),
        ("first_times_last", {"n": n}),
        ("square_first", {"n": n}),
    ]:
        f = gallery(name, params)
        rep = check_rigidity(RigidityInstance(f, anchors, 2, "p2"), FAST)
        assert rep.verdict != "certified", name
