import math
import random
from fractions import Fraction

import pytest

from filtcoh.complexes import ComplexFormatError
from filtcoh.maslov import (
    DiskClassData,
    FrameError,
    LagrangianPath,
    MonotoneConstants,
    NotMonotone,
    compatibility_check,
    kunneth_index,
    maslov_loop_index,
    monotone_constants,
    product_path,
    unitary_subgroup_loop,
    window_lift,
)


def line_loop(turns: float, samples: int = 64):
    """m = 1 frames (cos pi t w, sin pi t w): det^2 winds w times per unit."""
    frames = []
    for k in range(samples):
        t = k / samples
        frames.append([[math.cos(math.pi * t * turns)], [math.sin(math.pi * t * turns)]])
    return LagrangianPath.from_samples(1, frames, closed=True)


def test_constant_loop_is_zero():
    frames = [[[1.0], [0.0]]] * 8
    assert maslov_loop_index(LagrangianPath.from_samples(1, frames, closed=True)) == 0


def test_half_turn_line_is_one():
    assert maslov_loop_index(line_loop(1)) == 1


def test_double_traversal_doubles():
    assert maslov_loop_index(line_loop(2)) == 2
    assert maslov_loop_index(line_loop(4, samples=128)) == 4


def test_refinement_stability():
    for samples in (32, 64, 128, 256):
        assert maslov_loop_index(line_loop(3, samples=samples)) == 3


def test_open_path_rejected():
    theta = math.pi / 12
    frames = [[[1.0], [0.0]], [[math.cos(theta)], [math.sin(theta)]]]
    path = LagrangianPath.from_samples(1, frames, closed=False)
    with pytest.raises(FrameError, match="closed"):
        maslov_loop_index(path)


def test_inadequate_sampling_rejected():
    # quarter turn per step subtends exactly pi/4; the check demands strictly less
    frames = []
    for k in range(4):
        t = k / 4
        frames.append([[math.cos(math.pi * t)], [math.sin(math.pi * t)]])
    path = LagrangianPath.from_samples(1, frames, closed=True)
    with pytest.raises(FrameError, match="principal angle"):
        maslov_loop_index(path)


def test_nonorthonormal_frame_rejected():
    with pytest.raises(FrameError, match="orthonormal"):
        LagrangianPath.from_samples(1, [[[2.0], [0.0]]] * 4, closed=True)


def test_nonlagrangian_frame_rejected():
    # 2m = 4, m = 2: columns e1 and J e1 span a symplectic, not Lagrangian, plane
    frame = [
        [1.0, 0.0],
        [0.0, 0.0],
        [0.0, 1.0],
        [0.0, 0.0],
    ]
    with pytest.raises(FrameError, match="Lagrangian"):
        LagrangianPath.from_samples(2, [frame] * 4, closed=True)


def test_concatenation_additivity():
    # one loop of 2 turns then one of 4, glued at the common basepoint
    a = line_loop(2, samples=96)
    b = line_loop(4, samples=96)
    glued = LagrangianPath.from_samples(1, list(a.samples) + list(b.samples), closed=True)
    assert maslov_loop_index(glued) == maslov_loop_index(a) + maslov_loop_index(b)


def test_kunneth_trivial_cases():
    const = LagrangianPath.from_samples(1, [[[1.0], [0.0]]] * 8, closed=True)
    half = line_loop(1)
    assert kunneth_index(const, const) == 0
    assert kunneth_index(half, const) == 1
    assert kunneth_index(half, half) == 2


def test_kunneth_additivity_randomized():
    rng = random.Random(17)
    for _ in range(40):
        m1, m2 = rng.randint(1, 2), rng.randint(1, 2)
        t1 = [rng.randint(-2, 2) for _ in range(m1)]
        t2 = [rng.randint(-2, 2) for _ in range(m2)]
        p1 = unitary_subgroup_loop(m1, t1)
        p2 = unitary_subgroup_loop(m2, t2)
        left = maslov_loop_index(p1)
        right = maslov_loop_index(p2)
        assert left == 2 * sum(t1) and right == 2 * sum(t2)
        assert kunneth_index(p1, p2) == left + right


def test_oriented_frame_loops_have_even_index():
    rng = random.Random(23)
    for _ in range(20):
        m = rng.randint(1, 3)
        turns = [rng.randint(-2, 2) for _ in range(m)]
        idx = maslov_loop_index(unitary_subgroup_loop(m, turns))
        assert idx % 2 == 0


def test_product_path_handles_unequal_sampling():
    p1 = unitary_subgroup_loop(1, [1], samples=40)
    p2 = unitary_subgroup_loop(1, [1], samples=72)
    assert maslov_loop_index(product_path(p1, p2)) == 4


def test_monotone_single_class():
    result = monotone_constants(DiskClassData.from_pairs([("1", 2)]))
    assert isinstance(result, MonotoneConstants)
    assert result.sigma == 1 and result.sigma_maslov == 2 and result.lam == Fraction(1, 2)


def test_monotone_proportional_pairs():
    result = monotone_constants(DiskClassData.from_pairs([("1", 2), ("3", 6)]))
    assert isinstance(result, MonotoneConstants)
    assert result.lam == Fraction(1, 2) and result.sigma_maslov == 2 and result.sigma == 1


def test_not_monotone_witness():
    result = monotone_constants(DiskClassData.from_pairs([("1", 2), ("1", 4)]))
    assert isinstance(result, NotMonotone)
    assert result.witness == ((Fraction(1), 2), (Fraction(1), 4))


def test_monotone_needs_nonzero_mu():
    with pytest.raises(ComplexFormatError, match="undefined"):
        monotone_constants(DiskClassData.from_pairs([("1", 0)]))


def test_disk_class_rejects_double_zero():
    with pytest.raises(ComplexFormatError):
        DiskClassData.from_pairs([("0", 0)])


def test_window_lift_examples():
    assert window_lift(Fraction(1, 2), Fraction(0), Fraction(2)) == (Fraction(1, 2), 0)
    assert window_lift(Fraction(1, 2), Fraction(3, 4), Fraction(2)) == (Fraction(5, 2), 1)
    with pytest.raises(ComplexFormatError, match="regular"):
        window_lift(Fraction(0), Fraction(0), Fraction(2))


def test_window_lift_lands_in_window():
    rng = random.Random(31)
    for _ in range(100):
        sigma = Fraction(rng.randint(1, 9), rng.randint(1, 4))
        a = Fraction(rng.randint(0, 40), 41) * sigma
        r = Fraction(rng.randint(-20, 20), 7)
        if ((r - a) / sigma).denominator == 1:
            continue
        lifted, shift = window_lift(a, r, sigma)
        assert r < lifted < r + sigma
        assert lifted == a + shift * sigma


def test_compatibility_examples():
    data = DiskClassData.from_pairs([("1", 2)])  # sigma = 1, Sigma = 2
    assert compatibility_check(data, 6, Fraction(3)) is True
    assert compatibility_check(data, 4, Fraction(3)) is False
    assert compatibility_check(data, 0, Fraction(0)) is True
