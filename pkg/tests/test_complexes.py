import json
from fractions import Fraction

import pytest

from filtcoh.complexes import (
    ComplexFormatError,
    FilteredComplex,
    associated_graded,
    build_complex,
    parse_complex,
    serialize_complex,
    shift_complex,
    validate,
    warnings,
)
from filtcoh.morse import TorusSpec, torus_complex
from conftest import random_complex


def _doc(**overrides):
    doc = {
        "sigma_maslov": 3,
        "lambda": "1/3",
        "r": "0",
        "generators": [
            {"id": "x", "action": "3/4", "maslov": 0},
            {"id": "y", "action": "1/2", "maslov": 1},
        ],
        "edges": [["x", "y"]],
    }
    doc.update(overrides)
    return doc


def test_parse_roundtrip():
    text = json.dumps(_doc())
    c = parse_complex(text)
    assert parse_complex(serialize_complex(c)) == c
    assert c.sigma_action == Fraction(1)


def test_parse_empty_complex():
    c = parse_complex(json.dumps(_doc(generators=[], edges=[])))
    assert c.generators == ()
    assert not validate(c)


def test_parse_single_generator():
    c = parse_complex(json.dumps(_doc(generators=[{"id": "x", "action": "1/2", "maslov": 0}], edges=[])))
    assert len(c.generators) == 1
    assert not validate(c)


def test_parse_malformed_json():
    with pytest.raises(ComplexFormatError, match="line"):
        parse_complex("{nope")


def test_parse_float_action_rejected():
    doc = _doc()
    doc["generators"][0]["action"] = 0.75
    with pytest.raises(ComplexFormatError, match="rational"):
        parse_complex(json.dumps(doc))


def test_parse_duplicate_id():
    doc = _doc(generators=[
        {"id": "x", "action": "3/4", "maslov": 0},
        {"id": "x", "action": "1/2", "maslov": 1},
    ])
    with pytest.raises(ComplexFormatError, match="duplicate"):
        parse_complex(json.dumps(doc))


def test_parse_unknown_edge_id():
    with pytest.raises(ComplexFormatError, match="unknown id"):
        parse_complex(json.dumps(_doc(edges=[["x", "zz"]])))


def test_parse_nonintegral_shift():
    # grade jump 2 with Sigma = 4: (2 - 1)/4 is not an integer
    doc = _doc(sigma_maslov=4, **{"lambda": "1/4"})
    doc["generators"][1]["maslov"] = 2
    with pytest.raises(ComplexFormatError, match="shift"):
        parse_complex(json.dumps(doc))


def test_parse_negative_shift():
    doc = _doc(sigma_maslov=3)
    doc["generators"][1]["maslov"] = -2
    with pytest.raises(ComplexFormatError, match="negative"):
        parse_complex(json.dumps(doc))


def test_validate_torus_fixture_clean():
    assert validate(torus_complex(TorusSpec(m=2))) == []


def test_validate_action_monotonicity():
    c = build_complex(3, "1/3", 0, [("x", "1/4", 0), ("y", "1/2", 1)], [("x", "y")])
    rules = [v.rule for v in validate(c)]
    assert rules == ["action-monotone"]
    assert validate(c)[0].ids == ("x", "y")


def test_validate_delta_squared_parity():
    # chain x -> y -> z: one two-step path, odd parity
    c = build_complex(
        3,
        "1/3",
        0,
        [("x", "3/4", 0), ("y", "1/2", 1), ("z", "1/4", 2)],
        [("x", "y"), ("y", "z")],
    )
    bad = [v for v in validate(c) if v.rule == "delta-squared"]
    assert len(bad) == 1
    assert bad[0].ids[0] == "x" and "z" in bad[0].ids


def test_validate_window_membership():
    c = build_complex(3, "1/3", 0, [("x", "2", 0)], [])
    assert [v.rule for v in validate(c)] == ["action-window"]


def test_validate_action_at_cut_value():
    # action congruent to r would sit on the window boundary
    c = build_complex(3, "1/3", 0, [("x", "0", 0)], [])
    assert [v.rule for v in validate(c)] == ["action-window"]


def test_sigma_low_warning():
    assert warnings(torus_complex(TorusSpec(m=1))) != []
    assert warnings(build_complex(3, "1/3", 0, [], [])) == []


def test_associated_graded_torus_m2():
    c = torus_complex(TorusSpec(m=2))
    pieces = associated_graded(c)
    assert [(n, len(p.generators)) for n, p, _ in pieces] == [(-2, 1), (-1, 2), (0, 1)]
    assert all(mat.is_zero() for _, _, mat in pieces)


def test_associated_graded_keeps_shift0_drops_higher():
    c = build_complex(
        2,
        "1/2",
        0,
        [("a", "7/8", 0), ("b", "5/8", 1), ("c", "3/8", 3)],
        [("a", "b"), ("a", "c")],
    )
    assert not validate(c)
    pieces = {n: mat for n, _, mat in associated_graded(c)}
    assert pieces[0].rank() == 1  # a -> b survives
    assert pieces[1].is_zero() and pieces[3].is_zero()  # a -> c has shift 1


def test_total_coboundary_raises_grade_by_one_plus_multiples(rng):
    for _ in range(25):
        c = random_complex(rng, max_gens=20)
        for a, b in c.edges:
            jump = c.grade(b) - c.grade(a)
            assert jump >= 1 and (jump - 1) % c.sigma_maslov == 0


def test_window_invariant_under_safe_r_perturbation(rng):
    for _ in range(25):
        c = random_complex(rng, max_gens=20)
        if not c.generators:
            continue
        sigma = c.sigma_action
        # distance from r to the nearest action, modulo sigma, both directions
        gaps = []
        for g in c.generators:
            frac = (g.action - c.r) / sigma
            frac -= frac.numerator // frac.denominator  # now in [0, 1)
            gaps.append(frac)
        down = min(gaps) * sigma
        up = (1 - max(gaps)) * sigma
        eps = min(down, up) / 2
        assert eps > 0
        for direction in (1, -1):
            moved = FilteredComplex(
                c.sigma_maslov, c.lam, c.r + direction * eps, c.generators, c.edges
            )
            assert validate(moved) == []


def test_shift_complex_relabels_cleanly(rng):
    for _ in range(10):
        c = random_complex(rng, max_gens=16)
        s = shift_complex(c)
        assert validate(s) == []
        assert s.r == c.r + c.sigma_action
        assert [g.maslov for g in s.generators] == [
            g.maslov + c.sigma_maslov for g in c.generators
        ]


def test_serialize_integer_rationals_as_plain_strings():
    c = build_complex(2, "1/2", "-1/2", [("x", "0", 0)], [])
    data = json.loads(serialize_complex(c))
    assert data["generators"][0]["action"] == "0"
    assert data["r"] == "-1/2"


def test_roundtrip_random(rng):
    for _ in range(20):
        c = random_complex(rng, max_gens=16)
        assert parse_complex(serialize_complex(c)) == c
