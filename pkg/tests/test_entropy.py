import math

import numpy as np
import pytest

import entrates as er
from entrates.errors import CapacityError, StateValidationError


W_MARGINAL_ENTROPY = math.log2(3) - 2.0 / 3.0  # -2/3 log2(2/3) - 1/3 log2(1/3)


class TestVonNeumannEntropy:
    def test_maximally_mixed_qubit(self):
        assert er.von_neumann_entropy(np.diag([0.5, 0.5])) == 1.0

    def test_pure_projector(self):
        assert er.von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0

    def test_w_marginal(self):
        assert abs(er.von_neumann_entropy(np.diag([2 / 3, 1 / 3])) - W_MARGINAL_ENTROPY) < 1e-12

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            er.von_neumann_entropy(np.array([[0.5, 0.3], [0.0, 0.5]]))

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(StateValidationError):
            er.von_neumann_entropy(np.diag([1.5, -0.5]))

    def test_tiny_negative_noise_clipped(self):
        s = er.von_neumann_entropy(np.diag([1.0 + 5e-11, -5e-11]))
        assert s == 0.0


class TestBinaryEntropy:
    @pytest.mark.parametrize("x,expected", [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)])
    def test_exact_points(self, x, expected):
        assert er.binary_entropy(x) == expected

    def test_reference_value(self):
        # -0.11 log2 0.11 - 0.89 log2 0.89
        assert abs(er.binary_entropy(0.11) - 0.499915958164528) < 1e-12

    @pytest.mark.parametrize("x", [0.11, 0.3, 0.42])
    def test_symmetry(self, x):
        assert abs(er.binary_entropy(x) - er.binary_entropy(1 - x)) < 1e-15

    @pytest.mark.parametrize("x", [-0.1, 1.1])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            er.binary_entropy(x)


class TestEntropyProfile:
    def test_ghz_profile_all_ones(self):
        prof = er.entropy_profile(er.ghz_state(3))
        for subset in prof.layout.proper_subsets():
            assert abs(prof.s(subset) - 1.0) < 1e-12

    def test_bell_with_spectator(self):
        state = er.tensor_product(
            er.bell_state(("A", "B")),
            er.basis_state(er.SubsystemLayout(("C",), (2,)), (0,)),
        )
        prof = er.entropy_profile(state)
        assert abs(prof.s("A") - 1.0) < 1e-12
        assert abs(prof.s("B") - 1.0) < 1e-12
        assert prof.s("C") < 1e-12
        assert prof.s("AB") < 1e-12
        assert abs(prof.s("AC") - 1.0) < 1e-12
        assert abs(prof.s("BC") - 1.0) < 1e-12

    def test_complement_symmetry_random_states(self):
        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(25):
            prof = er.entropy_profile(er.random_pure_state(lay, seed))
            for subset in lay.proper_subsets():
                diff = abs(prof.s(subset) - prof.s(lay.complement(subset)))
                assert diff < 1e-8

    def test_strong_subadditivity_spot_check(self):
        lay = er.layout("ABCD", [2, 2, 2, 2])
        for seed in range(10):
            rho = er.random_mixed_state(lay, seed)
            s = lambda t: er.von_neumann_entropy(er.partial_trace(rho, t))
            assert s("AB") + s("BC") + 1e-8 >= s("B") + er.von_neumann_entropy(
                er.partial_trace(rho, "ABC")
            )

    def test_party_cap(self):
        lay = er.layout("ABCDEFGHI"[:9], [2] * 9)
        psi = er.basis_state(lay, (0,) * 9)
        with pytest.raises(CapacityError):
            er.entropy_profile(psi)

    def test_unknown_subset_rejected(self):
        prof = er.entropy_profile(er.ghz_state(3))
        with pytest.raises(ValueError):
            prof.s("AQ")

    def test_profile_from_entries_requires_all_subsets(self):
        lay = er.layout("ABC", [2, 2, 2])
        with pytest.raises(ValueError):
            er.profile_from_entries(lay, {"A": 1.0, "B": 1.0, "C": 1.0})
