import math

import numpy as np
import pytest

from freqherald.errors import (
    HeraldImpossibleError,
    InvalidArgumentsError,
    InvalidDimensionError,
    NonUnitaryInputError,
)
from freqherald.fock_oracle import (
    FockTensor,
    apply_circuit_fock,
    herald_fock,
    oracle_heralded_state,
    product_input_state,
    reck_decompose,
    squeezed_vacuum_fock,
)
from freqherald.gaussian import SqueezingVector

from test_gaussian import random_unitary


class TestSqueezedVacuum:
    def test_even_support_and_normalization(self):
        v = squeezed_vacuum_fock(0.4, 30)
        assert np.all(v[1::2] == 0)
        assert np.sum(v**2) == pytest.approx(1.0, abs=1e-12)

    def test_two_photon_amplitude(self):
        r = 0.6
        v = squeezed_vacuum_fock(r, 4)
        assert v[2] == pytest.approx(math.tanh(r) / math.sqrt(2 * math.cosh(r)), abs=1e-14)

    def test_zero_squeezing_is_vacuum(self):
        v = squeezed_vacuum_fock(0.0, 6)
        assert v[0] == 1.0 and np.all(v[1:] == 0)

    def test_rejects_negative(self):
        with pytest.raises(InvalidArgumentsError):
            squeezed_vacuum_fock(-0.1, 4)


class TestProductInput:
    def test_shape_and_norm(self):
        state = product_input_state(SqueezingVector([0.2, 0.3]), 10)
        assert state.amplitudes.shape == (11, 11)
        expected = np.sum(squeezed_vacuum_fock(0.2, 10) ** 2) * np.sum(
            squeezed_vacuum_fock(0.3, 10) ** 2
        )
        assert np.sum(np.abs(state.amplitudes) ** 2) == pytest.approx(expected, abs=1e-14)

    def test_size_guard(self):
        with pytest.raises(InvalidDimensionError):
            product_input_state(SqueezingVector(np.full(6, 0.2)), 12)

    def test_tail_guard(self):
        with pytest.raises(InvalidArgumentsError):
            product_input_state(SqueezingVector([1.4]), 4)


class TestReck:
    def test_recompose_random_unitaries(self):
        rng = np.random.default_rng(0)
        for n in (2, 3, 5):
            u = random_unitary(rng, n)
            f = reck_decompose(u)
            assert np.allclose(f.recompose(), u, atol=1e-10)

    def test_diagonal_needs_no_rotations(self):
        d = np.diag(np.exp(1j * np.array([0.1, 0.2, 0.3])))
        f = reck_decompose(d)
        assert len(f.rotations) == 0
        assert np.allclose(f.phases, np.diag(d))

    def test_rejects_nonunitary(self):
        with pytest.raises(NonUnitaryInputError):
            reck_decompose(np.diag([1.0, 0.5]))


class TestCircuitApplication:
    def test_identity_circuit(self):
        state = product_input_state(SqueezingVector([0.3, 0.2]), 8)
        out = apply_circuit_fock(state, reck_decompose(np.eye(2, dtype=complex)))
        assert np.allclose(out.amplitudes, state.amplitudes, atol=1e-14)

    def test_hong_ou_mandel(self):
        # |1,1> through a 50/50 splitter: the coincidence amplitude vanishes
        amps = np.zeros((3, 3), dtype=complex)
        amps[1, 1] = 1.0
        bs = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        out = apply_circuit_fock(FockTensor(amps), reck_decompose(bs.astype(complex)))
        assert abs(out.amplitudes[1, 1]) < 1e-12
        assert abs(out.amplitudes[2, 0]) ** 2 == pytest.approx(0.5, abs=1e-12)
        assert abs(out.amplitudes[0, 2]) ** 2 == pytest.approx(0.5, abs=1e-12)

    def test_norm_preserved_per_sector(self):
        # sectors with total photons <= cutoff evolve exactly; sectors above
        # the per-mode cutoff may clip, so compare sector by sector
        rng = np.random.default_rng(1)
        cutoff = 8
        state = product_input_state(SqueezingVector([0.3, 0.2, 0.4]), cutoff)
        out = apply_circuit_fock(state, reck_decompose(random_unitary(rng, 3)))
        idx = np.indices(state.amplitudes.shape).sum(axis=0)
        for total in range(cutoff + 1):
            mask = idx == total
            n_in = np.sum(np.abs(state.amplitudes[mask]) ** 2)
            n_out = np.sum(np.abs(out.amplitudes[mask]) ** 2)
            assert n_out == pytest.approx(n_in, abs=1e-12)

    def test_photon_number_sectors_closed(self):
        # a passive circuit never moves amplitude between total-photon sectors
        rng = np.random.default_rng(2)
        amps = np.zeros((5, 5), dtype=complex)
        amps[2, 0] = 1 / math.sqrt(2)
        amps[0, 2] = 1 / math.sqrt(2)
        out = apply_circuit_fock(FockTensor(amps), reck_decompose(random_unitary(rng, 2)))
        n1, n2 = np.meshgrid(np.arange(5), np.arange(5), indexing="ij")
        off_sector = np.abs(out.amplitudes[n1 + n2 != 2])
        assert np.max(off_sector) < 1e-12


class TestHerald:
    def test_slice_and_probability(self):
        amps = np.zeros((3, 3), dtype=complex)
        amps[0, 0] = math.sqrt(0.5)
        amps[2, 1] = math.sqrt(0.5)
        coeffs, p = herald_fock(FockTensor(amps), [1], undetected_index=0)
        assert p == pytest.approx(0.5)
        assert abs(coeffs[2]) == pytest.approx(1.0)

    def test_impossible_pattern(self):
        amps = np.zeros((3, 3), dtype=complex)
        amps[0, 0] = 1.0
        with pytest.raises(HeraldImpossibleError):
            herald_fock(FockTensor(amps), [2], undetected_index=0)

    def test_pattern_length_check(self):
        amps = np.zeros((2, 2, 2), dtype=complex)
        amps[0, 0, 0] = 1.0
        with pytest.raises(InvalidArgumentsError):
            herald_fock(FockTensor(amps), [0, 0, 0], undetected_index=1)


def test_oracle_single_mode_matches_squeezed_vacuum():
    r = SqueezingVector([0.5])
    coeffs, p = oracle_heralded_state(np.eye(1, dtype=complex), r, 1, 1, 0, 20, 10)
    direct = squeezed_vacuum_fock(0.5, 10)
    assert p == pytest.approx(float(np.sum(direct**2)), abs=1e-10)
    assert np.allclose(np.abs(coeffs), direct / math.sqrt(np.sum(direct**2)), atol=1e-10)
