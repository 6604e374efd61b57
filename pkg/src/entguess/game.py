"""Monte Carlo simulation of the basis-guessing game.

Each trial: a setting is drawn uniformly from the family, Alice's outcome
is drawn by the Born rule, and Bob's guess is drawn from the pretty good
measurement's outcome distribution conditioned on Alice's outcome.  Bob
really samples his guess, so the analytic win probability is exactly
the PGM guessing probability the rest of the package computes.
"""

from dataclasses import dataclass

import numpy as np

from .designs import MeasurementFamily
from .entropies import measure_family, pgm_guess_prob
from .errors import ParameterError
from .linops import RANK_TOL, func_on_support
from .states import DensityMatrix, SeedSpec


@dataclass(frozen=True)
class GameResult:
    """Empirical vs analytic win rate of a simulated guessing game."""

    trials: int
    wins: int
    empirical_rate: float
    analytic_rate: float
    std_error: float
    per_setting: tuple  # one dict per setting

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "wins": self.wins,
            "empirical_rate": self.empirical_rate,
            "analytic_rate": self.analytic_rate,
            "std_error": self.std_error,
            "per_setting": list(self.per_setting),
        }


def _game_tables(rho: DensityMatrix, family: MeasurementFamily, rank_tol: float):
    """Per setting: outcome probabilities and Bob's conditional guess matrix."""
    ensemble = measure_family(rho, family)
    outcome_probs, bob_conds, analytic = [], [], []
    for conds in ensemble.conditionals:
        rho_b = sum(conds)
        inv_sqrt = func_on_support(rho_b, -0.5, rank_tol)
        pgm_ops = [inv_sqrt @ c @ inv_sqrt for c in conds]
        p = np.array([max(float(np.trace(c).real), 0.0) for c in conds])
        cond = np.zeros((len(conds), len(conds)))
        for k, c in enumerate(conds):
            if p[k] <= 0.0:
                continue
            row = np.array([float(np.real(np.trace(op @ c))) for op in pgm_ops])
            cond[k] = np.maximum(row, 0.0) / p[k]
        analytic.append(pgm_guess_prob(conds, rank_tol))
        outcome_probs.append(p / p.sum())
        # rows of cond sum to Tr[Pi_supp rho_B^k]/p_k = 1 up to rounding
        cond /= np.maximum(cond.sum(axis=1, keepdims=True), 1e-300)
        bob_conds.append(cond)
    return outcome_probs, bob_conds, analytic


def _categorical(cdf_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse-CDF draw: row i of cdf_rows sampled at u[i]."""
    # searchsorted per row via the summed-comparison trick
    return (u[:, None] >= cdf_rows).sum(axis=1)


def simulate_game(
    rho: DensityMatrix,
    family: MeasurementFamily,
    trials: int,
    seed: SeedSpec,
    rank_tol: float = RANK_TOL,
) -> GameResult:
    """Play `trials` rounds of the guessing game, deterministically in `seed`.

    All three uniforms per trial (setting, Alice outcome, Bob guess) are
    drawn up front from the seed's Philox stream, so the result is
    bit-reproducible and independent of any internal batching.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if not family.is_basis_family():
        raise ParameterError("the game is defined for basis-type families")
    outcome_probs, bob_conds, analytic = _game_tables(rho, family, rank_tol)
    n_settings = family.n_settings
    d = family.d

    gen = seed.generator()
    u_setting = gen.random(trials)
    u_alice = gen.random(trials)
    u_bob = gen.random(trials)
    thetas = np.minimum((u_setting * n_settings).astype(int), n_settings - 1)

    alice_cdf = np.cumsum(np.stack(outcome_probs), axis=1)
    bob_cdf = np.cumsum(np.stack(bob_conds), axis=2)
    ks = np.minimum(_categorical(alice_cdf[thetas], u_alice), d - 1)
    js = np.minimum(_categorical(bob_cdf[thetas, ks], u_bob), d - 1)
    win_mask = ks == js

    wins = int(win_mask.sum())
    per_setting = []
    for th in range(n_settings):
        sel = thetas == th
        t = int(sel.sum())
        w = int(win_mask[sel].sum())
        p = analytic[th]
        per_setting.append(
            {
                "setting": th,
                "trials": t,
                "wins": w,
                "empirical_rate": w / t if t else float("nan"),
                "analytic_rate": p,
                "std_error": _binomial_sigma(p, t) if t else float("nan"),
            }
        )
    p_avg = float(np.mean(analytic))
    return GameResult(
        trials=trials,
        wins=wins,
        empirical_rate=wins / trials,
        analytic_rate=p_avg,
        std_error=_binomial_sigma(p_avg, trials),
        per_setting=tuple(per_setting),
    )


def _binomial_sigma(p: float, n: int) -> float:
    # p can overshoot 1 by float noise on perfect-guessing states
    return float(np.sqrt(max(p * (1.0 - p), 0.0) / n))
