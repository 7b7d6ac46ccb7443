import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_ising
from reference import naive_ising_energy, naive_qubo_energy
from ssqa.model import (
    IsingModel,
    QuboModel,
    bits_to_spins,
    flip_delta,
    ising_energy,
    local_fields,
    qubo_energy,
    qubo_to_ising,
    spins_to_bits,
)


def _random_qubo(rng, n, offset=0.0):
    return QuboModel(np.triu(rng.normal(size=(n, n))), offset)


class TestQuboEnergy:
    def test_single_term(self):
        assert qubo_energy(QuboModel(np.array([[1.0]])), [1]) == 1.0
        assert qubo_energy(QuboModel(np.array([[1.0]])), [0]) == 0.0

    def test_cross_term(self):
        q = QuboModel(np.array([[0.0, 3.0], [0.0, 0.0]]))
        assert qubo_energy(q, [1, 1]) == 3.0

    def test_matches_naive(self, rng):
        q = _random_qubo(rng, 7, offset=0.5)
        for _ in range(20):
            x = rng.integers(0, 2, 7)
            assert qubo_energy(q, x) == pytest.approx(naive_qubo_energy(q.Q, x, 0.5), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            qubo_energy(QuboModel(np.eye(2)), [1, 0, 1])

    def test_rejects_lower_triangle(self):
        with pytest.raises(ValueError):
            QuboModel(np.array([[0.0, 0.0], [1.0, 0.0]]))

    def test_immutable(self):
        q = QuboModel(np.eye(2))
        with pytest.raises(ValueError):
            q.Q[0, 0] = 5.0


class TestIsingEnergy:
    def test_null_model(self):
        m = IsingModel(np.zeros(3), np.zeros((3, 3)), 0.0)
        assert ising_energy(m, [1, -1, 1]) == 0.0

    def test_single_bias(self):
        m = IsingModel(np.array([1.0]), np.zeros((1, 1)), 0.0)
        assert ising_energy(m, [1]) == -1.0

    def test_matches_naive(self, rng):
        m = random_ising(rng, 6)
        for _ in range(20):
            s = rng.choice([-1, 1], 6)
            assert ising_energy(m, s) == pytest.approx(
                naive_ising_energy(m.h, m.J, s, m.offset), abs=1e-12
            )

    def test_bad_spin(self):
        m = IsingModel(np.zeros(2), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            ising_energy(m, [1, 0])

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            IsingModel(np.zeros(2), np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_diagonal_rejected(self):
        with pytest.raises(ValueError):
            IsingModel(np.zeros(2), np.eye(2))


class TestConversion:
    def test_single_variable(self):
        m = qubo_to_ising(QuboModel(np.array([[1.0]])))
        assert m.h.tolist() == [-0.5]
        assert m.J.tolist() == [[0.0]]
        assert m.offset == 0.5

    def test_zero_model(self):
        m = qubo_to_ising(QuboModel(np.zeros((3, 3))))
        assert not m.h.any() and not m.J.any() and m.offset == 0.0

    @pytest.mark.parametrize("n", [1, 2, 5, 10, 12])
    def test_exhaustive_energy_equivalence(self, rng, n):
        q = _random_qubo(rng, n, offset=rng.normal())
        m = qubo_to_ising(q)
        for x in itertools.product((0, 1), repeat=n):
            x = np.array(x)
            assert ising_energy(m, 2 * x - 1) == pytest.approx(qubo_energy(q, x), abs=1e-9)

    def test_symmetric_zero_diagonal(self, rng):
        m = qubo_to_ising(_random_qubo(rng, 9))
        assert np.array_equal(m.J, m.J.T)
        assert not np.diag(m.J).any()

    @settings(max_examples=60, deadline=None)
    @given(arrays(np.float64, (5, 5), elements=st.floats(-10, 10)), st.integers(0, 31))
    def test_equivalence_property(self, a, z):
        q = QuboModel(np.triu(a))
        x = (z >> np.arange(5)) & 1
        m = qubo_to_ising(q)
        assert ising_energy(m, 2 * x - 1) == pytest.approx(qubo_energy(q, x), abs=1e-9)


class TestBitsSpins:
    def test_examples(self):
        assert bits_to_spins([0, 1]).tolist() == [-1, 1]
        assert spins_to_bits([1, 1]).tolist() == [1, 1]

    @given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=40))
    def test_round_trip(self, s):
        assert bits_to_spins(spins_to_bits(s)).tolist() == s

    def test_invalid(self):
        with pytest.raises(ValueError):
            bits_to_spins([0, 2])
        with pytest.raises(ValueError):
            spins_to_bits([1, 0])


class TestFlipDelta:
    def test_matches_reevaluation(self, rng):
        m = random_ising(rng, 12)
        s = rng.choice([-1, 1], 12)
        for i in range(12):
            t = s.copy()
            t[i] = -t[i]
            assert flip_delta(m, s, i) == pytest.approx(ising_energy(m, t) - ising_energy(m, s))

    def test_local_field_identity(self, rng):
        m = random_ising(rng, 8)
        s = rng.choice([-1, 1], 8)
        L = local_fields(m, s)
        for i in range(8):
            assert flip_delta(m, s, i) == pytest.approx(2 * s[i] * L[i])
