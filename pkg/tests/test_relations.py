import numpy as np
import pytest
from conftest import cached_mubs, max_entangled_state, random_bipartite

from entguess import (
    DesignDefectError,
    EPR,
    FormatError,
    HEISENBERG,
    ParameterError,
    SeedSpec,
    achiever_state,
    clifford_orbit_family,
    equality_report,
    family_guess_prob,
    guessing_bounds,
    h2nu,
    haar_unitary,
    joint_from_state,
    max_entangled,
    monogamy_report,
    nbasis_bounds,
    pg_recovery_fidelity,
    random_pure,
    random_separable,
    sic_povm,
    two_to_full_bound,
    witness,
)
from entguess.entropies import JointDistribution


class TestEqualityReport:
    def test_random_state_mub(self):
        rep = equality_report(random_bipartite(3, 2, 5, seed=60), cached_mubs(3), 0.0)
        assert rep.defect < 1e-9
        assert rep.holds

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_max_entangled_zero_uncertainty(self, d):
        rep = equality_report(max_entangled_state(d), cached_mubs(d), 0.0)
        assert abs(rep.lhs) < 1e-9
        assert abs(rep.rhs) < 1e-9

    def test_sic_constant(self):
        rho = random_bipartite(2, 2, 3, seed=61)
        rep = equality_report(rho, sic_povm(2), 0.0)
        expected_rhs = np.log2(6) - np.log2(2.0 ** (-h2nu(rho, 0.0)) + 1)
        assert abs(rep.lhs - expected_rhs) < 1e-9
        assert rep.defect < 1e-9

    def test_clifford_orbit(self):
        rep = equality_report(random_bipartite(2, 3, 4, seed=62), clifford_orbit_family(), 0.5)
        assert rep.defect < 1e-9

    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.0])
    def test_nu_family(self, nu):
        rep = equality_report(random_bipartite(5, 2, 7, seed=63), cached_mubs(5), nu)
        assert rep.defect < 1e-9

    def test_trivial_side_information(self):
        # d_B = 1 reduces to the unconditional collision identity
        rep = equality_report(random_bipartite(3, 1, 2, seed=64), cached_mubs(3), 0.0)
        assert rep.defect < 1e-9

    def test_uncertified_family_rejected(self):
        with pytest.raises(DesignDefectError):
            equality_report(random_bipartite(3, 2, 5, seed=65), cached_mubs(3).subset(2), 0.0)


class TestNbasisBounds:
    def test_max_entangled_forces_one(self):
        lo, up = nbasis_bounds(max_entangled_state(5), cached_mubs(5), 2)
        assert abs(lo.lhs - 1.0) < 1e-9  # lower bound value
        assert abs(up.rhs - 1.0) < 1e-9  # upper bound value
        assert abs(up.lhs - 1.0) < 1e-9  # measured P(2)
        assert lo.holds and up.holds

    def test_complete_set_bounds_coincide(self):
        rho = random_bipartite(5, 3, 6, seed=66)
        lo, up = nbasis_bounds(rho, cached_mubs(5), 6)
        f = pg_recovery_fidelity(rho)
        pinned = (5 * f + 1) / 6
        assert abs(lo.lhs - pinned) < 1e-12
        assert abs(up.rhs - pinned) < 1e-12
        assert lo.holds and up.holds

    def test_containment_sweep(self):
        mubs = cached_mubs(5)
        for i in range(40):
            rank = (i % 25) + 1
            rho = random_bipartite(5, 5, rank, seed=67, stream=i)
            for n in range(1, 7):
                lo, up = nbasis_bounds(rho, mubs, n)
                assert lo.holds, (n, lo)
                assert up.holds, (n, up)

    def test_rejects_bad_n(self):
        with pytest.raises(ParameterError):
            nbasis_bounds(max_entangled_state(3), cached_mubs(3), 5)

    def test_rejects_partial_family(self):
        with pytest.raises(ParameterError):
            nbasis_bounds(max_entangled_state(3), cached_mubs(3).subset(2), 1)


def tune_mix_to_fidelity(d, regime, which, mubs, n, target):
    """Bisection on mix so the achiever hits a requested F^pg."""
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2
        f = pg_recovery_fidelity(achiever_state(d, regime, which, mubs, n, mid))
        if f < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class TestAchieverStates:
    def test_epr_upper_at_half_fidelity(self):
        d, n = 5, 2
        mubs = cached_mubs(d)
        mix = tune_mix_to_fidelity(d, EPR, "upper", mubs, n, 0.5)
        rho = achiever_state(d, EPR, "upper", mubs, n, mix)
        per, _ = family_guess_prob(rho, mubs)
        f = pg_recovery_fidelity(rho)
        assert abs(f - 0.5) < 1e-9
        assert abs(np.mean(per[:n]) - 0.75) < 1e-9

    def test_heisenberg_upper_pure_marginal(self):
        d = 5
        mubs = cached_mubs(d)
        rho = achiever_state(d, HEISENBERG, "upper", mubs, 1, mix=1.0)
        f = pg_recovery_fidelity(rho)
        per, _ = family_guess_prob(rho, mubs)
        assert abs(f - 1 / d) < 1e-9
        assert abs(per[0] - 1.0) < 1e-9

    def test_epr_lower_excluded_basis(self):
        d, n = 5, 5
        mubs = cached_mubs(d)
        rho = achiever_state(d, EPR, "lower", mubs, n, mix=0.6)
        f = pg_recovery_fidelity(rho)
        per, _ = family_guess_prob(rho, mubs)
        assert abs(np.mean(per[:n]) - f) < 1e-9

    @pytest.mark.parametrize("regime,which", [
        (EPR, "upper"), (EPR, "lower"), (HEISENBERG, "upper"), (HEISENBERG, "lower"),
    ])
    def test_saturation(self, regime, which):
        d = 5
        mubs = cached_mubs(d)
        n = 3
        for mix in np.linspace(0.1, 1.0, 5):
            rho = achiever_state(d, regime, which, mubs, n, float(mix))
            f = pg_recovery_fidelity(rho)
            per, _ = family_guess_prob(rho, mubs)
            p_n = float(np.mean(per[:n]))
            lower, upper = guessing_bounds(f, d, n)
            target = upper if which == "upper" else lower
            assert abs(p_n - target) < 1e-9, (regime, which, mix, p_n, target)

    def test_lower_needs_excluded_basis(self):
        with pytest.raises(ParameterError):
            achiever_state(5, EPR, "lower", cached_mubs(5), 6, 0.5)

    def test_rejects_bad_mix(self):
        with pytest.raises(ParameterError):
            achiever_state(5, EPR, "upper", cached_mubs(5), 2, 1.5)


class TestTwoToFullBound:
    def test_perfect_two_bases(self):
        for d in (2, 3, 5):
            assert abs(two_to_full_bound(1.0, d) - 1.0) < 1e-12

    def test_qubit_half(self):
        assert abs(two_to_full_bound(0.5, 2) - 1 / 3) < 1e-12

    def test_monotone(self):
        grid = np.linspace(0.2, 1.0, 30)
        vals = [two_to_full_bound(float(p), 5) for p in grid]
        assert np.all(np.diff(vals) >= 0)

    def test_rejects_out_of_range(self):
        with pytest.raises(ParameterError):
            two_to_full_bound(0.1, 5)

    def test_holds_on_random_states(self):
        mubs = cached_mubs(3)
        for i in range(20):
            rho = random_bipartite(3, 3, rank=(i % 9) + 1, seed=68, stream=i)
            per, avg = family_guess_prob(rho, mubs)
            p2 = float(np.mean(per[:2]))
            assert avg >= two_to_full_bound(p2, 3) - 1e-9


def ideal_max_entangled_joints(d, n):
    fam = cached_mubs(d)
    rho = max_entangled_state(d)
    thetas = list(range(n))
    bob = [fam.settings[t].vectors.conj() for t in thetas]
    return joint_from_state(rho, fam, thetas, bob)


class TestWitness:
    def test_fires_on_ideal_statistics(self):
        rep = witness(ideal_max_entangled_joints(2, 2), 2)
        assert abs(rep.lhs - 2.0) < 1e-12
        assert abs(rep.rhs - 1.5) < 1e-12
        assert rep.metadata["entangled"]

    def test_uniform_tables_inconclusive(self):
        d = 3
        table = np.full((d, d), 1 / d**2)
        joints = JointDistribution(d_a=d, d_b=d, settings=tuple((t, table) for t in range(3)))
        rep = witness(joints, d)
        assert abs(rep.lhs - 3 / d) < 1e-12
        assert not rep.metadata["entangled"]

    @pytest.mark.parametrize("d", [2, 3])
    def test_sound_on_separable_states(self, d):
        fam = cached_mubs(d)
        fired = 0
        for i in range(40):
            rho = random_separable(d, d, terms=3, seed=SeedSpec(69, stream=i))
            n = 2 + (i % d)  # both partial and full sets
            thetas = list(range(n))
            bob = [haar_unitary(d, SeedSpec(70, stream=100 * i + t)) for t in thetas]
            rep = witness(joint_from_state(rho, fam, thetas, bob), d)
            fired += rep.metadata["entangled"]
        assert fired == 0

    def test_rejects_duplicate_labels(self):
        table = np.full((2, 2), 0.25)
        joints = JointDistribution(d_a=2, d_b=2, settings=((0, table), (0, table)))
        with pytest.raises(FormatError):
            witness(joints, 2)

    def test_rejects_label_out_of_range(self):
        table = np.full((2, 2), 0.25)
        joints = JointDistribution(d_a=2, d_b=2, settings=((0, table), (5, table)))
        with pytest.raises(FormatError):
            witness(joints, 2)


class TestMonogamy:
    def test_product_of_max_entangled_with_eve(self):
        # Phi_AB (x) |e>: Bob guesses perfectly and Eve decouples
        d = 3
        phi = max_entangled(d)
        e = np.zeros(2, dtype=complex)
        e[0] = 1.0
        psi = np.kron(phi, e)
        rep = monogamy_report(psi, (d, d, 2), cached_mubs(d))
        assert abs(rep.lhs) < 1e-10
        assert abs(rep.rhs) < 1e-10

    def test_pure_alice_with_entangled_bob_eve(self):
        # |a> (x) Phi_BE: Alice is uncorrelated with both
        d_a, d = 3, 4
        a = random_pure(d_a, SeedSpec(71))
        psi = np.kron(a, max_entangled(d))
        rep = monogamy_report(psi, (d_a, d, d), cached_mubs(d_a))
        assert abs(rep.lhs - np.log2(d_a)) < 1e-10
        assert abs(rep.rhs - np.log2(d_a)) < 1e-10

    @pytest.mark.parametrize("dims", [(2, 2, 2), (3, 3, 3), (2, 3, 4)])
    def test_random_tripartite(self, dims):
        mubs = cached_mubs(dims[0])
        for i in range(20):
            psi = random_pure(int(np.prod(dims)), SeedSpec(72, stream=i))
            rep = monogamy_report(psi, dims, mubs)
            assert rep.defect < 1e-8, (dims, i, rep.defect)

    def test_report_serializes(self):
        psi = random_pure(8, SeedSpec(73))
        rep = monogamy_report(psi, (2, 2, 2), cached_mubs(2))
        doc = rep.to_dict()
        assert set(doc) == {"lhs", "rhs", "defect", "tolerance", "verdict", "metadata"}
        assert isinstance(doc["metadata"]["rank_tol_sensitive"], bool)

    def test_flags_eigenvalues_near_rank_cutoff(self):
        # Schmidt weight three decades below rank_tol * lambda_max sits inside
        # the sensitivity window and must be flagged
        lam2 = 3e-10
        psi = np.zeros(8, dtype=complex)
        psi[0] = np.sqrt(1 - lam2)
        psi[7] = np.sqrt(lam2)
        rep = monogamy_report(psi, (2, 2, 2), cached_mubs(2))
        assert rep.metadata["rank_tol_sensitive"]

    def test_clean_spectrum_not_flagged(self):
        psi = random_pure(8, SeedSpec(74))
        rep = monogamy_report(psi, (2, 2, 2), cached_mubs(2))
        assert not rep.metadata["rank_tol_sensitive"]
