"""Estimators that consume sampled register outcomes.

A sampling round draws M0 outcomes, wraps them to signed residues, and
keeps the basket of samples within 2K bins of the leftmost residue seen.
The basket mean (or a higher moment of the basket) is the round's
estimate; rounds are averaged by an outer Hoeffding layer. The leftmost
anchor rule is what makes the round robust to excited-state mass: any
contaminant sits at least a working gap to the right of the ground bin,
so a basket anchored on the left edge never reaches it.

The rectangular-window majority-vote baseline lives here too, sized by
``planner.plan_qpe_baseline``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gaussian
from .planner import (
    GseePlan,
    PlanInputs,
    PlanParams,
    QpeBaseline,
    plan_gsee,
    plan_qpe_baseline,
)
from .simulator import (
    OutcomeDistribution,
    SampleStream,
    SpectrumSpec,
    distribution_from_window,
    mixed_distribution,
    rectangular_window,
)

__all__ = [
    "Basket",
    "MomentSample",
    "EnergyEstimate",
    "QpeEstimate",
    "hoeffding_sample_count",
    "basket_from_outcomes",
    "run_sampling_round",
    "moment_from_basket",
    "run_gsee",
    "run_qpe_baseline",
]

_OVERLAP_ONE_TOL = 1e-12
# Draws per vectorized batch; keeps peak memory near 8 MB of int64.
_BATCH_DRAWS = 1 << 20


def hoeffding_sample_count(b: float, epsilon: float, c: float, delta: float) -> int:
    """Samples needed so a mean of values with support width ``b`` lands
    within (1 - c) * epsilon of its expectation except with probability
    ``delta``: ceil(b**2 / (2 * ((1-c) * epsilon)**2) * ln(2/delta))."""
    if not (b > 0.0 and epsilon > 0.0 and 0.0 <= c < 1.0 and 0.0 < delta < 1.0):
        raise ValueError(
            f"need b > 0, epsilon > 0, c in [0, 1), delta in (0, 1); "
            f"got b={b!r}, epsilon={epsilon!r}, c={c!r}, delta={delta!r}"
        )
    accuracy = (1.0 - c) * epsilon
    return math.ceil(b**2 / (2.0 * accuracy**2) * math.log(2.0 / delta))


@dataclass(frozen=True, eq=False)
class Basket:
    """One round's windowed samples, in signed bin residues."""

    anchor: int
    members: np.ndarray
    round_samples: int
    n_dark: int

    @property
    def size(self) -> int:
        return int(self.members.size)


@dataclass(frozen=True)
class MomentSample:
    """Basket moment in raw bin units and in relative (turns**m) units."""

    m: int
    value_bins: float
    value_rel: float


@dataclass(frozen=True, eq=False)
class EnergyEstimate:
    """Mean of per-round basket means, reported in turns."""

    mu_hat: float
    per_round_means: np.ndarray
    M_used: int
    q: int
    n_dark: int
    n_left: int
    diagnostics: dict[str, float]


@dataclass(frozen=True)
class QpeEstimate:
    """Majority-vote result of the rectangular baseline, in turns."""

    theta_hat: float
    mode_residue: int
    q: int
    n_samples: int


def basket_from_outcomes(outcomes: np.ndarray, plan: PlanParams) -> Basket:
    """Wrap raw register outcomes and anchor the window on the leftmost
    residue. The dark count tallies samples in the ``dark_bins``-wide
    segment just right of the window, a diagnostic for mass that a
    correctly sized plan keeps empty."""
    outcomes = np.asarray(outcomes)
    if outcomes.ndim != 1 or outcomes.size == 0:
        raise ValueError("outcomes must be a nonempty 1-d array")
    residues = gaussian.wrap_mod(outcomes.astype(np.float64), 0.0, plan.q)
    residues = residues.astype(np.int64)
    anchor = int(residues.min())
    edge = anchor + plan.two_K
    members = residues[residues <= edge]
    n_dark = int(np.count_nonzero((residues > edge) & (residues <= edge + plan.dark_bins)))
    return Basket(
        anchor=anchor,
        members=members,
        round_samples=int(residues.size),
        n_dark=n_dark,
    )


def run_sampling_round(stream: SampleStream, plan: PlanParams) -> Basket:
    """Draw one round of M0 outcomes and window them."""
    return basket_from_outcomes(stream.draw(plan.M0), plan)


def moment_from_basket(
    basket: Basket, plan: PlanParams, m: int | None = None
) -> MomentSample:
    """Basket moment of order ``m`` (default: the plan's order)."""
    if m is None:
        m = plan.m
    if not (isinstance(m, int) and 1 <= m <= 4):
        raise ValueError(f"m must be an integer in [1, 4], got {m!r}")
    values = basket.members.astype(np.float64)
    value_bins = float(np.mean(values**m))
    return MomentSample(
        m=m,
        value_bins=value_bins,
        value_rel=value_bins / float(plan.n_bins) ** m,
    )


def run_gsee(
    spec: SpectrumSpec,
    inputs: PlanInputs | None,
    seed: int | np.random.SeedSequence,
    plan: GseePlan | None = None,
    dist: OutcomeDistribution | None = None,
) -> EnergyEstimate:
    """Run the full pipeline: M rounds of M0 draws, basket mean each
    round, grand mean over rounds.

    Rounds are consecutive M0-sized blocks of a single sample stream, so
    results are bit-identical however the draws are batched internally.
    ``n_left`` counts rounds whose anchor fell more than K bins left of
    the median anchor, the signature of a left-outlier round.
    """
    if plan is None:
        if inputs is None:
            raise ValueError("either inputs or a precomputed plan is required")
        plan = plan_gsee(inputs)
    round_plan = plan.round_plan
    if dist is None:
        dist = mixed_distribution(spec, plan)
    stream = SampleStream(dist, seed)

    M, M0 = plan.M, round_plan.M0
    two_K, dark_bins, q = round_plan.two_K, round_plan.dark_bins, round_plan.q
    rows_per_batch = max(1, _BATCH_DRAWS // M0)
    means = np.empty(M, dtype=np.float64)
    anchors = np.empty(M, dtype=np.int64)
    n_dark = 0
    basket_total = 0
    done = 0
    while done < M:
        rows = min(rows_per_batch, M - done)
        outcomes = stream.draw(rows * M0).astype(np.float64)
        residues = gaussian.wrap_mod(outcomes, 0.0, q).astype(np.int64)
        residues = residues.reshape(rows, M0)
        batch_anchor = residues.min(axis=1)
        edge = batch_anchor + two_K
        mask = residues <= edge[:, np.newaxis]
        counts = mask.sum(axis=1)
        sums = np.where(mask, residues, 0).sum(axis=1)
        means[done : done + rows] = sums / counts
        anchors[done : done + rows] = batch_anchor
        dark = (residues > edge[:, np.newaxis]) & (
            residues <= (edge + dark_bins)[:, np.newaxis]
        )
        n_dark += int(np.count_nonzero(dark))
        basket_total += int(counts.sum())
        done += rows

    median_anchor = float(np.median(anchors))
    n_left = int(np.count_nonzero(anchors < median_anchor - round_plan.K))
    total_draws = M * M0
    mu_hat = float(np.mean(means)) / float(round_plan.n_bins)
    means.flags.writeable = False
    return EnergyEstimate(
        mu_hat=mu_hat,
        per_round_means=means,
        M_used=M,
        q=q,
        n_dark=n_dark,
        n_left=n_left,
        diagnostics={
            "median_anchor": median_anchor,
            "basket_fraction": basket_total / total_draws,
            "dark_fraction": n_dark / total_draws,
        },
    )


def run_qpe_baseline(
    spec: SpectrumSpec,
    epsilon: float,
    delta: float,
    seed: int | np.random.SeedSequence,
    baseline: QpeBaseline | None = None,
) -> QpeEstimate:
    """Majority vote over repeated rectangular-window estimates.

    Only supports an initial state that is the ground eigenstate; the
    vote has no defense against excited-state contamination.
    """
    if spec.ground_overlap_sq < 1.0 - _OVERLAP_ONE_TOL:
        raise ValueError(
            "baseline requires the initial state to be the ground eigenstate; "
            f"got squared overlap {spec.ground_overlap_sq!r}"
        )
    if baseline is None:
        baseline = plan_qpe_baseline(epsilon, delta)
    window = rectangular_window(baseline.q)
    probs = distribution_from_window(window, spec.ground_phase)
    stream = SampleStream(probs, seed)
    outcomes = stream.draw(baseline.n_samples).astype(np.float64)
    residues = gaussian.wrap_mod(outcomes, 0.0, baseline.q).astype(np.int64)
    values, counts = np.unique(residues, return_counts=True)
    # np.unique sorts ascending and argmax takes the first maximum, so
    # vote ties resolve toward the lower residue.
    mode = int(values[np.argmax(counts)])
    return QpeEstimate(
        theta_hat=mode / float(1 << baseline.q),
        mode_residue=mode,
        q=baseline.q,
        n_samples=baseline.n_samples,
    )
