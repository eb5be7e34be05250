"""Shared test helpers: seeded spec samplers and frozen parameter grids.

The samplers draw family parameters as small rationals inside each
validity window so the exact Fraction arithmetic downstream stays fast.
A draw that lands outside the window is rejected and retried.

The no-transfer sweep grids are frozen here: for each family and size,
twenty approximately log-spaced rational points per parameter axis,
spanning the validity window with the other parameters held at fixed
interior values.  Points are rounded to denominators below 10**6 so the
exact phase arithmetic stays cheap.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterator, List, Sequence, Tuple

from qchain import closedform, families
from qchain.families import Family, FamilySpec
from qchain.qseries import RationalQ

Q_LARGE = (RationalQ(3, 1), RationalQ(5, 3), RationalQ(9, 5))
Q_SMALL = (RationalQ(1, 3), RationalQ(3, 5), RationalQ(5, 9))
Q_POOL = Q_LARGE + Q_SMALL

SERIES_FAMILIES = (
    Family.Q_KRAWTCHOUK,
    Family.AFFINE_Q_KRAWTCHOUK,
    Family.QUANTUM_Q_KRAWTCHOUK,
    Family.DUAL_Q_KRAWTCHOUK,
    Family.Q_RACAH,
)

SWEEP_FAMILIES = (
    Family.AFFINE_Q_KRAWTCHOUK,
    Family.QUANTUM_Q_KRAWTCHOUK,
    Family.DUAL_Q_KRAWTCHOUK,
    Family.Q_HAHN,
    Family.DUAL_Q_HAHN,
    Family.Q_RACAH,
)


def rational_between(rng: random.Random, lo, hi, steps: int = 24) -> Fraction:
    """Random Fraction strictly inside (lo, hi) on a coarse grid."""
    lo = Fraction(lo)
    hi = Fraction(hi)
    return lo + (hi - lo) * Fraction(rng.randrange(1, steps), steps)


def sample_spec(rng: random.Random, family: Family, N: int, q: RationalQ = None) -> FamilySpec:
    """One unvalidated draw from the family's parameter window."""
    if q is None:
        # the q-Racah windows below assume q < 1
        q = rng.choice(Q_SMALL if family is Family.Q_RACAH else Q_POOL)
    x = q.as_fraction
    if family is Family.Q_KRAWTCHOUK:
        return families.q_krawtchouk(N, q, rational_between(rng, x ** -N / 50, 3 * x ** -N))
    if family is Family.AFFINE_Q_KRAWTCHOUK:
        hi = x ** -1 if x < 1 else x ** -N
        return families.affine_q_krawtchouk(N, q, rational_between(rng, 0, hi))
    if family is Family.QUANTUM_Q_KRAWTCHOUK:
        lo = x ** -N if x < 1 else x ** -1
        return families.quantum_q_krawtchouk(N, q, rational_between(rng, lo, 5 * lo))
    if family is Family.DUAL_Q_KRAWTCHOUK:
        return families.dual_q_krawtchouk(N, q, -rational_between(rng, Fraction(1, 50), 40))
    if family is Family.Q_HAHN:
        lo, hi = (0, x ** -1) if x < 1 else (x ** -1, 9 * x ** -1)
        return families.q_hahn(N, q, rational_between(rng, lo, hi), rational_between(rng, lo, hi))
    if family is Family.DUAL_Q_HAHN:
        if x < 1:
            lo, hi = ((0, x ** -1), (x ** -N, 5 * x ** -N))[rng.randrange(2)]
        else:
            lo, hi = 0, x ** -N
        return families.dual_q_hahn(N, q, rational_between(rng, lo, hi), rational_between(rng, lo, hi))
    gamma = rational_between(rng, x ** -N, 4 * x ** -N)
    if rng.randrange(2):
        # alpha, beta below 1/q
        alpha = rational_between(rng, 0, x ** -1)
        beta = rational_between(rng, 0, x ** -1)
    else:
        # alpha * beta just above q**-2N
        u = rational_between(rng, Fraction(1, 2), 2)
        v = rational_between(rng, 1 / u, x ** -1 / u)
        alpha, beta = u * x ** -N, v * x ** -N
    return families.q_racah(N, q, alpha, beta, gamma)


def draw_valid_spec(
    rng: random.Random,
    family: Family,
    N: int,
    q: RationalQ = None,
    phase: bool = False,
    tries: int = 500,
) -> FamilySpec:
    """Sample until a spec validates (and has a matched time when asked)."""
    for _ in range(tries):
        spec = sample_spec(rng, family, N, q=q)
        if not families.validate(spec).valid:
            continue
        if phase:
            try:
                closedform.matched_transfer_time(spec)
            except closedform.PhaseConditionUnmetError:
                continue
        return spec
    raise AssertionError(f"no valid draw for {family.value} at N = {N}")


def log_grid(lo, hi, count: int = 20) -> Tuple[Fraction, ...]:
    """Approximately log-spaced rationals spanning (lo, hi) inclusive."""
    ratio = (float(hi) / float(lo)) ** (1.0 / (count - 1))
    return tuple(
        Fraction(float(lo) * ratio ** k).limit_denominator(10 ** 6) for k in range(count)
    )


SweepAxis = Tuple[str, List[FamilySpec]]


def sweep_axes(family: Family, N: int) -> Iterator[SweepAxis]:
    """Frozen parameter axes for the no-transfer sweeps at size N.

    Families with a q > 1 validity window use q = 3, the others q = 1/3.
    Multi-parameter families are swept one axis at a time with the
    remaining parameters held at 5/4 (or at 2 * q**-N for the q-Racah
    third parameter, the middle of its window).
    """
    q3 = RationalQ(3, 1)
    q13 = RationalQ(1, 3)
    mid = Fraction(5, 4)
    unit_window = log_grid(Fraction(3, 100), Fraction(297, 100))
    if family is Family.AFFINE_Q_KRAWTCHOUK:
        top = Fraction(3) ** -N
        grid = log_grid(top / 100, top * Fraction(99, 100))
        yield "p", [families.affine_q_krawtchouk(N, q3, v) for v in grid]
    elif family is Family.QUANTUM_Q_KRAWTCHOUK:
        grid = log_grid(Fraction(7, 20), Fraction(33, 20))
        yield "p", [families.quantum_q_krawtchouk(N, q3, v) for v in grid]
    elif family is Family.DUAL_Q_KRAWTCHOUK:
        grid = log_grid(Fraction(1, 50), Fraction(40))
        yield "c", [families.dual_q_krawtchouk(N, q13, -v) for v in grid]
    elif family is Family.Q_HAHN:
        yield "alpha", [families.q_hahn(N, q13, v, mid) for v in unit_window]
        yield "beta", [families.q_hahn(N, q13, mid, v) for v in unit_window]
    elif family is Family.DUAL_Q_HAHN:
        yield "gamma", [families.dual_q_hahn(N, q13, v, mid) for v in unit_window]
        yield "delta", [families.dual_q_hahn(N, q13, mid, v) for v in unit_window]
    elif family is Family.Q_RACAH:
        anchor = 2 * Fraction(3) ** N
        yield "alpha", [families.q_racah(N, q13, v, mid, anchor) for v in unit_window]
        yield "beta", [families.q_racah(N, q13, mid, v, anchor) for v in unit_window]
        gamma_grid = log_grid(Fraction(3) ** N * Fraction(21, 20), Fraction(3) ** N * Fraction(39, 10))
        yield "gamma", [families.q_racah(N, q13, mid, mid, v) for v in gamma_grid]
    else:
        raise ValueError(f"no sweep axes for {family.value}")


ACCEPTANCE_LINES: List[str] = []


def record_criterion(index: int, passed: bool, detail: str) -> None:
    """Register one acceptance line, then assert."""
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {index:2d} {status}  {detail}")
    assert passed, f"criterion {index}: {detail}"


def pytest_terminal_summary(terminalreporter) -> None:
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
