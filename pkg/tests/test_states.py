import math

import numpy as np
import pytest

from berryphase import (DimensionError, EvaluationError, inner_product,
                        is_normalized, norm, state_vector)
from berryphase.families import SU2_CHART, su2_spin_half_state


def test_inner_product_orthogonal_kets():
    assert inner_product([1, 0], [0, 1]) == 0


def test_inner_product_normalized_real_vector():
    v = [1 / math.sqrt(2), 1 / math.sqrt(2)]
    assert inner_product(v, v) == pytest.approx(1.0, abs=1e-15)


def test_inner_product_conjugates_left_slot():
    assert inner_product([1j, 0], [1, 0]) == pytest.approx(-1j, abs=1e-15)


def test_inner_product_dimension_mismatch():
    with pytest.raises(DimensionError):
        inner_product([1, 0], [1, 0, 0])


def test_norm_examples():
    assert norm([1, 0]) == 1.0
    assert norm([3 / 5, 4j / 5]) == pytest.approx(1.0, abs=1e-15)
    assert norm([2, 0, 0]) == pytest.approx(2.0, abs=1e-15)


def test_is_normalized_examples():
    assert is_normalized([1, 0], 1e-12)
    assert not is_normalized([1.1, 0], 1e-12)
    state = su2_spin_half_state(SU2_CHART.point(theta=0.7, phi=1.3))
    assert is_normalized(state, 1e-12)


def test_is_normalized_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        is_normalized([1, 0], 0.0)


def test_state_vector_rejects_nonfinite_and_empty():
    with pytest.raises(EvaluationError):
        state_vector([np.nan, 0.0])
    with pytest.raises(EvaluationError):
        state_vector([np.inf * 1j, 0.0])
    with pytest.raises(DimensionError):
        state_vector([])


def test_state_vector_is_immutable():
    vec = state_vector([1.0, 1j])
    with pytest.raises(ValueError):
        vec[0] = 0.0


def test_conjugate_symmetry_property():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-12)


def test_scaling_property():
    rng = np.random.default_rng(8)
    for _ in range(50):
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        c = complex(rng.normal(), rng.normal())
        assert norm(c * a) == pytest.approx(abs(c) * norm(a), abs=1e-12)


def test_triangle_inequality_property():
    rng = np.random.default_rng(9)
    for _ in range(50):
        a = rng.normal(size=5) + 1j * rng.normal(size=5)
        b = rng.normal(size=5) + 1j * rng.normal(size=5)
        assert norm(a + b) <= norm(a) + norm(b) + 1e-12
