import pytest

from arccurve.classify import (INCONCLUSIVE, TypeLabel, classify_combinatorial,
                               classify_topological, separating)
from arccurve.complex import build_ball
from arccurve.coords import ArcClass, CurveClass, enumerate_curves
from arccurve.intersect import IntersectionEngine
from arccurve.registry import flip_ball
from arccurve.surface import Surface
from arccurve.triangulation import base_triangulation


@pytest.fixture(scope="module")
def s04():
    return build_ball(Surface(0, 4), "AC", 5, 14)


@pytest.fixture(scope="module")
def s12():
    return build_ball(Surface(1, 2), "AC", 4, 14)


def test_sphere_curves_separate():
    reg = flip_ball(base_triangulation(Surface(0, 4)), 1)
    assert all(separating(c, reg) for c in enumerate_curves(reg.base, 10))


def test_torus_curves_do_not_separate():
    reg = flip_ball(base_triangulation(Surface(1, 1)), 1)
    assert not any(separating(c, reg) for c in enumerate_curves(reg.base, 10))


def test_label_invariants(s12):
    for v in s12.vertices:
        lab = classify_topological(v, s12.registry)
        if isinstance(v, CurveClass):
            assert lab in (TypeLabel.SEP_CURVE, TypeLabel.NONSEP_CURVE)
        elif v.is_loop:
            assert lab in (TypeLabel.SEP_LOOP_ARC, TypeLabel.NONSEP_LOOP_ARC)
        else:
            assert lab is TypeLabel.INTER_PUNCTURE_ARC


def test_nonseparating_loop_on_s12(s12):
    labels = {classify_topological(v, s12.registry) for v in s12.vertices if isinstance(v, ArcClass)}
    assert TypeLabel.NONSEP_LOOP_ARC in labels and TypeLabel.SEP_LOOP_ARC in labels


def _agreement(b):
    seen = {}
    for i, v in enumerate(b.vertices):
        vd = classify_combinatorial(b, i)
        if vd.conclusive:
            assert vd.label == classify_topological(v, b.registry), (i, vd.evidence)
            seen[vd.label] = seen.get(vd.label, 0) + 1
        elif not b.complete[i]:
            assert vd.evidence["reason"] == "vertex is not complete"
    return seen


def test_agreement_s04(s04):
    seen = _agreement(s04)
    assert seen.get(TypeLabel.SEP_CURVE) and seen.get(TypeLabel.INTER_PUNCTURE_ARC)


def test_sep_curve_evidence(s04):
    i = next(i for i, v in enumerate(s04.vertices) if isinstance(v, CurveClass) and s04.complete[i])
    vd = classify_combinatorial(s04, i)
    assert vd.label is TypeLabel.SEP_CURVE
    assert vd.evidence["dual_link_disconnected"] and vd.evidence["max_dim"] == 4


def test_inter_puncture_witness(s04):
    eng = IntersectionEngine(s04.registry)
    hits = 0
    for i, v in enumerate(s04.vertices):
        vd = classify_combinatorial(s04, i)
        if vd.label is TypeLabel.INTER_PUNCTURE_ARC:
            z = s04.vertices[vd.evidence["witness"]]
            assert isinstance(z, CurveClass) and eng.disjoint(v, z)
            assert separating(z, s04.registry)
            assert s04.adj[vd.evidence["witness"]] <= s04.adj[i] | {i}
            hits += 1
    assert hits


def test_agreement_s12(s12):
    seen = _agreement(s12)
    assert seen.get(TypeLabel.NONSEP_LOOP_ARC) and seen.get(TypeLabel.NONSEP_CURVE)


def test_nonsep_loop_has_curve_meeting_once(s12):
    """Some curve in the ball crosses a non-separating loop arc exactly once."""
    eng = IntersectionEngine(s12.registry)
    curves = [v for v in s12.vertices if isinstance(v, CurveClass)]
    for i, v in enumerate(s12.vertices):
        if classify_combinatorial(s12, i).label is TypeLabel.NONSEP_LOOP_ARC:
            assert any(eng.intersection_number(v, y) == 1 for y in curves)
            break
    else:
        pytest.fail("no conclusive non-separating loop arc")


def test_exceptional_surfaces_inconclusive():
    b = build_ball(Surface(0, 3), "AC", 3, 4)
    assert all(classify_combinatorial(b, i).label == INCONCLUSIVE for i in range(len(b)))
    t = build_ball(Surface(1, 1), "AC", 2, 4)
    assert all(classify_combinatorial(t, i).label == INCONCLUSIVE for i in range(len(t)))


@pytest.mark.slow
def test_inter_puncture_on_s05():
    b = build_ball(Surface(0, 5), "AC", 6, 24)
    seen = _agreement(b)
    assert seen.get(TypeLabel.INTER_PUNCTURE_ARC) and seen.get(TypeLabel.SEP_CURVE)
