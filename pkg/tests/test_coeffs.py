"""Descriptor construction, evaluation, reflection, and packing."""

import math

import numpy as np
import pytest

from indefsl.coeffs import Coefficient, Segment, KIND_POLY


def test_constant_and_fill():
    c = Coefficient.characteristic(-5.0, 0.0, 1.0)
    assert c(0.5) == -5.0
    assert c(2.0) == 0.0
    assert c(0.0) == -5.0


def test_power_rejects_bad_alpha():
    with pytest.raises(ValueError):
        Coefficient.power(1.0, -1.0)


def test_pieces_overlap_rejected():
    with pytest.raises(ValueError):
        Coefficient.pieces([(0.0, 2.0, "const", (1.0,)),
                            (1.0, 3.0, "const", (2.0,))])


def test_shifted_power_value():
    # 2 (1 + x - pi/4)^{-2}
    a = math.pi / 4
    c = Coefficient.pieces([(a, math.inf, "shifted_power", (2.0, 1.0 - a, 1.0, -2.0))])
    x = 3.0
    assert c(x) == pytest.approx(2.0 / (1.0 + x - a) ** 2, rel=1e-14)


def test_cosine_with_offset():
    c = Coefficient.pieces([(0.0, math.inf, "cosine", (2.0, 2.0, 0.0, 0.25))])
    xs = np.linspace(0, 5, 50)
    assert np.allclose(c(xs), 2.0 * np.cos(2.0 * xs) + 0.25)


def test_reflection_pointwise():
    a = math.pi / 4
    c = Coefficient.pieces([
        (0.0, a, "const", (-1.0,)),
        (a, 9.0, "shifted_power", (2.0, 1.0 - a, 1.0, -2.0)),
        (9.0, 11.0, "poly", (1.0, 0.5, -0.25, 0.0, 0.0, 9.0)),
        (11.0, math.inf, "cosine", (0.3, 2.0, 0.7, 0.1)),
    ])
    r = c.reflected()
    xs = np.linspace(0.01, 20.0, 400)
    assert np.allclose(r(-xs), c(xs), rtol=1e-13, atol=1e-13)


def test_double_reflection_roundtrip():
    c = Coefficient.pieces([(0.0, 2.0, "poly", (1.0, -2.0, 3.0, 0.5, 0.0, 1.0))],
                           domain=(0.0, 4.0))
    rr = c.reflected().reflected()
    xs = np.linspace(0.0, 4.0, 100)
    assert np.allclose(rr(xs), c(xs))


def test_pack_cells_cover_range():
    c = Coefficient.characteristic(-1.0, 0.0, 1.0)
    edges, kinds, params = c.pack(0.0, 3.0)
    assert edges[0] == 0.0 and edges[-1] == 3.0
    assert 1.0 in edges
    assert kinds[0] == 0 and params[0][0] == -1.0
    assert params[-1][0] == 0.0


def test_from_callable_cubic_accuracy():
    f = lambda x: math.sin(1.3 * x) + 0.2 * x
    c = Coefficient.from_callable(f, (0.0, 6.0), n=128)
    xs = np.linspace(0.0, 6.0, 777)
    want = np.array([f(x) for x in xs])
    assert np.max(np.abs(c(xs) - want)) < 1e-6
    assert all(s.kind == KIND_POLY for s in c.segments)


def test_segment_requires_order():
    with pytest.raises(ValueError):
        Segment(1.0, 1.0, 0, (0.0,))


def test_abs_first_moment():
    c = Coefficient.characteristic(-2.0, 0.0, 1.0)
    # int_0^1 (1+x) * 2 dx = 3
    assert c.abs_first_moment(0.0, 2.0) == pytest.approx(3.0, rel=1e-3)
