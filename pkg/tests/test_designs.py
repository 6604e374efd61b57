import json

import numpy as np
import pytest
from conftest import cached_mubs

from entguess import (
    MeasurementFamily,
    ParameterError,
    Setting,
    UnsupportedDimensionError,
    UnsupportedFamilyError,
    clifford_orbit_family,
    design_defect,
    mub_family,
    sic_povm,
    swap_operator,
    unbiasedness_defect,
)


def moment_oracle(vectors):
    """Uniform second tensor moment of a column-vector set, written out."""
    d, n = vectors.shape
    acc = np.zeros((d * d, d * d), dtype=complex)
    for k in range(n):
        proj = np.outer(vectors[:, k], vectors[:, k].conj())
        acc += np.kron(proj, proj)
    return acc / n


def same_up_to_phase(u, v, tol=1e-9):
    inner = np.trace(u.conj().T @ v)
    return abs(abs(inner) - 2.0) < tol  # |Tr(U^dag V)| = d iff V = phase * U


class TestMubFamily:
    def test_qubit_pauli_bases(self):
        fam = mub_family(2)
        assert fam.n_settings == 3
        z, x, y = (s.vectors for s in fam.settings)
        assert np.abs(z - np.eye(2)).max() < 1e-15
        s = 1 / np.sqrt(2)
        assert np.abs(np.abs(x) - s).max() < 1e-15
        assert np.abs(np.abs(y) - s).max() < 1e-15
        # every cross-basis overlap squared is exactly 1/2
        assert unbiasedness_defect(fam) < 1e-15

    def test_d5_complete_design(self):
        fam = cached_mubs(5)
        assert fam.n_settings == 6
        assert design_defect(fam) < 1e-11

    @pytest.mark.parametrize("d", [1, 4, 6, 9])
    def test_rejects_non_prime(self, d):
        with pytest.raises(UnsupportedDimensionError):
            mub_family(d)

    def test_unbiasedness_d7(self):
        assert unbiasedness_defect(cached_mubs(7)) < 1e-12

    @pytest.mark.parametrize("d", [2, 3, 5, 7, 11])
    def test_pooled_two_design(self, d):
        assert design_defect(cached_mubs(d)) < 1e-11

    def test_equality_constant(self):
        assert cached_mubs(3).equality_constant == 4.0


class TestSicPovm:
    def test_qubit_tetrahedron(self):
        fam = sic_povm(2)
        (setting,) = fam.settings
        assert setting.n_outcomes == 4
        v = setting.vectors
        for j in range(4):
            for k in range(j + 1, 4):
                assert abs(abs(np.vdot(v[:, j], v[:, k])) ** 2 - 1 / 3) < 1e-10

    def test_qubit_completeness(self):
        (setting,) = sic_povm(2).settings
        total = (setting.vectors * setting.scales) @ setting.vectors.conj().T
        assert np.abs(total - np.eye(2)).max() < 1e-11

    def test_qutrit_overlaps(self):
        (setting,) = sic_povm(3).settings
        v = setting.vectors
        for j in range(9):
            for k in range(j + 1, 9):
                assert abs(abs(np.vdot(v[:, j], v[:, k])) ** 2 - 1 / 4) < 1e-10

    def test_qutrit_two_design_identity(self):
        d = 3
        (setting,) = sic_povm(d).settings
        moment = moment_oracle(setting.vectors)
        target = (np.eye(d * d) + swap_operator(d)) / (d * (d + 1))
        assert np.abs(moment - target).max() < 1e-10

    def test_rejects_unsupported(self):
        with pytest.raises(UnsupportedDimensionError):
            sic_povm(5)

    def test_equality_constant(self):
        assert sic_povm(3).equality_constant == 12.0


class TestCliffordOrbit:
    def test_group_size(self):
        fam = clifford_orbit_family()
        assert fam.n_settings == 24

    def test_group_closure(self):
        from entguess.designs import single_qubit_cliffords

        group = single_qubit_cliffords()
        for u in group:
            for v in group:
                w = u @ v
                assert any(same_up_to_phase(w, g) for g in group)

    def test_orbit_of_zero_is_octahedron(self):
        fam = clifford_orbit_family()
        zero_images = [s.vectors[:, 0] for s in fam.settings]
        # dedupe up to phase via the rank-1 projectors
        buckets = []
        for v in zero_images:
            proj = np.outer(v, v.conj())
            for rep, count in buckets:
                if np.abs(proj - rep).max() < 1e-9:
                    count[0] += 1
                    break
            else:
                buckets.append((proj, [1]))
        assert len(buckets) == 6
        assert all(count[0] == 4 for _, count in buckets)

    def test_two_design(self):
        assert design_defect(clifford_orbit_family()) < 1e-11


class TestDesignDefect:
    def test_mub3(self):
        assert design_defect(cached_mubs(3)) < 1e-11

    def test_single_basis_defect_value(self):
        fam = MeasurementFamily(
            d=2,
            kind="Custom",
            settings=(Setting(vectors=np.eye(2, dtype=complex), scales=np.ones(2)),),
        )
        # exact distance of one basis's moment from the 2-design target
        assert abs(design_defect(fam) - np.sqrt(1 / 6)) < 1e-12

    def test_sic2(self):
        assert design_defect(sic_povm(2)) < 1e-11

    def test_matches_moment_oracle(self):
        fam = cached_mubs(3)
        pooled = fam.pooled_vectors()
        target = (np.eye(9) + swap_operator(3)) / 12
        assert abs(design_defect(fam) - np.linalg.norm(moment_oracle(pooled) - target)) < 1e-14


class TestUnbiasednessDefect:
    def test_duplicate_basis_worst_case(self):
        eye = Setting(vectors=np.eye(3, dtype=complex), scales=np.ones(3))
        fam = MeasurementFamily(d=3, kind="Custom", settings=(eye, eye))
        assert abs(unbiasedness_defect(fam) - (1 - 1 / 3)) < 1e-12

    def test_rejects_sic(self):
        with pytest.raises(UnsupportedFamilyError):
            unbiasedness_defect(sic_povm(2))


class TestFamilyStructure:
    def test_constant_enforced_at_construction(self):
        with pytest.raises(ParameterError):
            MeasurementFamily(
                d=2,
                kind="MUB-complete",
                settings=mub_family(2).settings,
                equality_constant=7.0,
            )

    def test_incomplete_setting_rejected(self):
        half = Setting(vectors=np.eye(2, dtype=complex)[:, :1], scales=np.ones(1))
        with pytest.raises(ParameterError):
            MeasurementFamily(d=2, kind="Custom", settings=(half,))

    def test_subset_has_no_constant(self):
        sub = cached_mubs(3).subset(2)
        assert sub.n_settings == 2
        assert sub.equality_constant is None

    def test_json_roundtrip(self):
        for fam in (cached_mubs(3), sic_povm(2), clifford_orbit_family()):
            doc = json.loads(json.dumps(fam.to_json_dict()))
            back = MeasurementFamily.from_json_dict(doc)
            assert back.kind == fam.kind
            assert back.d == fam.d
            assert back.equality_constant == fam.equality_constant
            for s0, s1 in zip(fam.settings, back.settings):
                assert np.abs(s0.vectors - s1.vectors).max() < 1e-15
                assert np.abs(s0.scales - s1.scales).max() < 1e-15
