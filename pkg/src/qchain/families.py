"""Seven finite q-orthogonal polynomial families and their chain data.

Each family lives on the grid x = 0..N and is defined by a terminating
basic hypergeometric representation.  What the rest of the package
needs from a family is:

* point values P_n(x) of the degree-n polynomial at grid node x,
* the orthogonality weight w(x) and squared norms d_n, so that the
  matrix U[n, x] = sqrt(w(x)/d_n) P_n(x) has orthonormal rows and
  columns,
* the Jacobi (three-term recurrence) coefficients read in orthonormal
  form, which become chain couplings J_n > 0 and on-site energies h_n,
* the eigenvalue map k -> eps_k of the resulting hopping matrix, exact
  as a Fraction whenever q and the parameters are rational.

Weights and norms are held as LogSign pairs because they span many
orders of magnitude.  Families whose textbook weight carries a uniform
sign (the quantum q-Krawtchouk weight has sign (-1)**N for 0 < q < 1)
are normalised here to strictly positive data; the applied flip is
recorded so closed-form amplitude formulas can stay consistent with the
actual spectral sum.

The q-Hahn and dual q-Hahn data are the gamma -> 0 and alpha -> 0
limits of the q-Racah data (with delta tied as 1/(beta q**(N+1))); the
limit expressions were worked out by hand and are cross-checked against
q-Racah at gamma, alpha = 1e-8 in the test suite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .chain import SpinChain
from .qseries import (
    DenominatorZeroError,
    LogSign,
    RationalQ,
    basic_hypergeometric,
    basic_hypergeometric_exact,
    q_number,
    q_pochhammer,
)

__all__ = [
    "Family",
    "FamilySpec",
    "OrthogonalityData",
    "ValidationReport",
    "InvalidSpecError",
    "q_krawtchouk",
    "affine_q_krawtchouk",
    "quantum_q_krawtchouk",
    "dual_q_krawtchouk",
    "q_hahn",
    "dual_q_hahn",
    "q_racah",
    "pst_spec",
    "validate",
    "require_valid",
    "evaluate",
    "orthogonality_data",
    "orthonormal_value",
    "orthonormal_matrix",
    "site_signs",
    "recurrence_coefficients",
    "eigenvalue",
    "eigenvalues",
    "pst_chain_closed_form",
    "qracah_delta",
]

Scalar = Union[int, float, Fraction]


class InvalidSpecError(ValueError):
    """A family spec failed validation but was used anyway."""


class Family(enum.Enum):
    Q_KRAWTCHOUK = "q-krawtchouk"
    AFFINE_Q_KRAWTCHOUK = "affine-q-krawtchouk"
    QUANTUM_Q_KRAWTCHOUK = "quantum-q-krawtchouk"
    DUAL_Q_KRAWTCHOUK = "dual-q-krawtchouk"
    Q_HAHN = "q-hahn"
    DUAL_Q_HAHN = "dual-q-hahn"
    Q_RACAH = "q-racah"


PARAM_NAMES: Dict[Family, Tuple[str, ...]] = {
    Family.Q_KRAWTCHOUK: ("p",),
    Family.AFFINE_Q_KRAWTCHOUK: ("p",),
    Family.QUANTUM_Q_KRAWTCHOUK: ("p",),
    Family.DUAL_Q_KRAWTCHOUK: ("c",),
    Family.Q_HAHN: ("alpha", "beta"),
    Family.DUAL_Q_HAHN: ("gamma", "delta"),
    Family.Q_RACAH: ("alpha", "beta", "gamma"),
}


@dataclass(frozen=True)
class FamilySpec:
    """A family tag, chain length parameter N, base q, and parameters.

    ``q`` is a RationalQ for exact work or a plain positive float for
    parameter scans.  Parameter values keep their exactness: ints and
    Fractions stay exact, floats stay floats.
    """

    family: Family
    N: int
    q: Union[RationalQ, float]
    params: Tuple[Tuple[str, Scalar], ...]

    def __post_init__(self) -> None:
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        expected = PARAM_NAMES[self.family]
        got = tuple(name for name, _ in self.params)
        if got != expected:
            raise ValueError(
                f"{self.family.value} takes parameters {expected}, got {got}"
            )
        if not isinstance(self.q, RationalQ):
            qf = float(self.q)
            if qf <= 0.0 or qf == 1.0:
                raise ValueError("q must be positive and != 1")
            object.__setattr__(self, "q", qf)

    def param(self, name: str) -> Scalar:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    @property
    def qf(self) -> float:
        return float(self.q)

    @property
    def qx(self) -> Optional[Fraction]:
        """Exact q, or None when q is a float."""
        return self.q.as_fraction if isinstance(self.q, RationalQ) else None

    @property
    def is_exact(self) -> bool:
        if self.qx is None:
            return False
        return all(isinstance(v, (int, Fraction)) for _, v in self.params)

    def describe(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.family.value}(N={self.N}, q={self.q}, {parts})"


def _make_spec(family: Family, N: int, q, **params: Scalar) -> FamilySpec:
    if not isinstance(q, (RationalQ, float, int, Fraction)):
        raise TypeError("q must be RationalQ or a number")
    if isinstance(q, (int, Fraction)) and not isinstance(q, RationalQ):
        q = RationalQ.from_fraction(Fraction(q))
    ordered = tuple((name, params[name]) for name in PARAM_NAMES[family])
    return FamilySpec(family, N, q, ordered)


def q_krawtchouk(N: int, q, p: Scalar) -> FamilySpec:
    return _make_spec(Family.Q_KRAWTCHOUK, N, q, p=p)


def affine_q_krawtchouk(N: int, q, p: Scalar) -> FamilySpec:
    return _make_spec(Family.AFFINE_Q_KRAWTCHOUK, N, q, p=p)


def quantum_q_krawtchouk(N: int, q, p: Scalar) -> FamilySpec:
    return _make_spec(Family.QUANTUM_Q_KRAWTCHOUK, N, q, p=p)


def dual_q_krawtchouk(N: int, q, c: Scalar) -> FamilySpec:
    return _make_spec(Family.DUAL_Q_KRAWTCHOUK, N, q, c=c)


def q_hahn(N: int, q, alpha: Scalar, beta: Scalar) -> FamilySpec:
    return _make_spec(Family.Q_HAHN, N, q, alpha=alpha, beta=beta)


def dual_q_hahn(N: int, q, gamma: Scalar, delta: Scalar) -> FamilySpec:
    return _make_spec(Family.DUAL_Q_HAHN, N, q, gamma=gamma, delta=delta)


def q_racah(N: int, q, alpha: Scalar, beta: Scalar, gamma: Scalar) -> FamilySpec:
    """q-Racah spec; the fourth textbook parameter is tied as
    delta = 1 / (beta q**(N+1)) so the grid has exactly N+1 points."""
    return _make_spec(Family.Q_RACAH, N, q, alpha=alpha, beta=beta, gamma=gamma)


def pst_spec(q: RationalQ, N: int) -> FamilySpec:
    """The q-Krawtchouk spec with p = q**-N, the perfect transfer point.

    Requires 1/q to be a ratio of two odd integers, otherwise no exact
    transfer time exists and the construction is refused.
    """
    if not isinstance(q, RationalQ):
        q = RationalQ.from_fraction(Fraction(q))
    q.require_odd_odd()
    return q_krawtchouk(N, q, q.as_fraction ** (-N))


def qracah_delta(spec: FamilySpec) -> Scalar:
    """The tied q-Racah parameter delta = 1/(beta q**(N+1))."""
    beta = spec.param("beta")
    if isinstance(beta, (int, Fraction)) and spec.qx is not None:
        return 1 / (Fraction(beta) * spec.qx ** (spec.N + 1))
    return 1.0 / (float(beta) * spec.qf ** (spec.N + 1))


# ----------------------------------------------------------------------
# exact/float helpers

def _exact_value(value: Scalar) -> Optional[Fraction]:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return None


def _qpow(spec: FamilySpec, e: int) -> Scalar:
    """q**e, exact when q is rational."""
    if spec.qx is not None:
        return spec.qx ** e
    return spec.qf ** e


def _scaled_qpow(spec: FamilySpec, value: Scalar, e: int) -> Scalar:
    """value * q**e, exact when both parts are exact."""
    vx = _exact_value(value)
    if vx is not None and spec.qx is not None:
        return vx * spec.qx ** e
    return float(value) * spec.qf ** e


def _poch(a: Scalar, qf: float, n: int) -> LogSign:
    return q_pochhammer(a, qf, n)


def _ls(x: float) -> LogSign:
    return LogSign.from_float(x)


def _lspow(base: float, e: float) -> LogSign:
    return LogSign.from_pow(base, e)


def _one_plus(c: float, qf: float, e: int) -> LogSign:
    """LogSign of 1 + c*q**e for c > 0, safe when c*q**e overflows."""
    t = math.log(c) + e * math.log(qf)
    return LogSign(1, float(np.logaddexp(0.0, t)))


# ----------------------------------------------------------------------
# polynomial point values

def _series_parameters(
    spec: FamilySpec, n: int, x: int
) -> Tuple[Sequence[Scalar], Sequence[Scalar], Scalar]:
    """Numerator and denominator parameter lists plus the argument z of
    the defining terminating series for P_n at grid node x."""
    N = spec.N
    fam = spec.family
    qn = _qpow(spec, -n)
    qxm = _qpow(spec, -x)
    qN = _qpow(spec, -N)
    qq = spec.qx if spec.qx is not None else spec.qf
    if fam is Family.Q_KRAWTCHOUK:
        p = spec.param("p")
        return [qn, qxm, _scaled_qpow(spec, -p, n)], [qN, 0], qq
    if fam is Family.AFFINE_Q_KRAWTCHOUK:
        p = spec.param("p")
        return [qn, 0, qxm], [_scaled_qpow(spec, p, 1), qN], qq
    if fam is Family.QUANTUM_Q_KRAWTCHOUK:
        p = spec.param("p")
        return [qn, qxm], [qN], _scaled_qpow(spec, p, n + 1)
    if fam is Family.DUAL_Q_KRAWTCHOUK:
        c = spec.param("c")
        return [qn, qxm, _scaled_qpow(spec, c, x - N)], [qN, 0], qq
    if fam is Family.Q_HAHN:
        a, b = spec.param("alpha"), spec.param("beta")
        ab = _product(a, b)
        return (
            [qn, _scaled_qpow(spec, ab, n + 1), qxm],
            [_scaled_qpow(spec, a, 1), qN],
            qq,
        )
    if fam is Family.DUAL_Q_HAHN:
        g, d = spec.param("gamma"), spec.param("delta")
        gd = _product(g, d)
        return (
            [qn, qxm, _scaled_qpow(spec, gd, x + 1)],
            [_scaled_qpow(spec, g, 1), qN],
            qq,
        )
    if fam is Family.Q_RACAH:
        a, b, g = spec.param("alpha"), spec.param("beta"), spec.param("gamma")
        ab = _product(a, b)
        gd = _gamma_delta(spec)
        return (
            [qn, _scaled_qpow(spec, ab, n + 1), qxm, _scaled_qpow(spec, gd, x + 1)],
            [_scaled_qpow(spec, a, 1), qN, _scaled_qpow(spec, g, 1)],
            qq,
        )
    raise AssertionError(fam)


def _product(a: Scalar, b: Scalar) -> Scalar:
    ax, bx = _exact_value(a), _exact_value(b)
    if ax is not None and bx is not None:
        return ax * bx
    return float(a) * float(b)


def _gamma_delta(spec: FamilySpec) -> Scalar:
    """gamma * delta for the two families indexed by that product."""
    if spec.family is Family.Q_RACAH:
        g = spec.param("gamma")
        gx = _exact_value(g)
        b = spec.param("beta")
        bx = _exact_value(b)
        if gx is not None and bx is not None and spec.qx is not None:
            return gx / (bx * spec.qx ** (spec.N + 1))
        return float(g) / (float(b) * spec.qf ** (spec.N + 1))
    if spec.family is Family.DUAL_Q_HAHN:
        return _product(spec.param("gamma"), spec.param("delta"))
    raise AssertionError(spec.family)


def evaluate(spec: FamilySpec, n: int, x: int) -> float:
    """Value of the degree-n polynomial at grid node x, both in 0..N.

    Normalised so that P_n(0) = 1 for every family.  Exact specs are
    summed in rational arithmetic (the alternating series cancel badly
    in floats once N grows), float specs term by term in log space.
    """
    return _point_value(spec, n, x).to_float()


def _point_value(spec: FamilySpec, n: int, x: int) -> LogSign:
    """P_n(x) as a LogSign, exact-arithmetic route when possible."""
    if not (0 <= n <= spec.N and 0 <= x <= spec.N):
        raise ValueError("need 0 <= n, x <= N")
    numer, denom, z = _series_parameters(spec, n, x)
    if spec.is_exact:
        return LogSign.from_fraction(
            basic_hypergeometric_exact(numer, denom, spec.q, z)
        )
    return LogSign.from_float(basic_hypergeometric(numer, denom, spec.q, z))


# ----------------------------------------------------------------------
# weights and norms

@dataclass(frozen=True)
class OrthogonalityData:
    """Weights w(0..N) and norms d(0..N) as LogSign pairs.

    ``flipped`` records whether a uniform sign was factored out of the
    textbook expressions to make the data positive; spectral sums are
    unchanged by the flip, but closed-form amplitude displays inherit
    the same factor.
    """

    weights: Tuple[LogSign, ...]
    norms: Tuple[LogSign, ...]
    flipped: bool = False

    def weight_float(self) -> np.ndarray:
        return np.array([w.to_float() for w in self.weights])

    def norm_float(self) -> np.ndarray:
        return np.array([d.to_float() for d in self.norms])


def _qk_is_pst(spec: FamilySpec) -> bool:
    """q-Krawtchouk at the exact transfer point p = q**-N."""
    if spec.family is not Family.Q_KRAWTCHOUK or spec.qx is None:
        return False
    px = _exact_value(spec.param("p"))
    return px is not None and px == spec.qx ** (-spec.N)


def _weights_norms(spec: FamilySpec) -> Tuple[list, list]:
    N, qf = spec.N, spec.qf
    fam = spec.family
    if fam is Family.Q_KRAWTCHOUK and _qk_is_pst(spec):
        return _qk_pst_weights_norms(N, qf)
    if fam is Family.Q_KRAWTCHOUK:
        p = float(spec.param("p"))
        w = [
            _poch(qf ** -N, qf, x) / _poch(qf, qf, x) * _lspow(-p, -x)
            for x in range(N + 1)
        ]
        tail = (
            _poch(-p * qf, qf, N)
            * _lspow(p, -N)
            * _lspow(qf, -N * (N + 1) / 2)
        )
        d = [
            _poch(qf, qf, n)
            * _poch(-p * qf ** (N + 1), qf, n)
            / _poch(-p, qf, n)
            / _poch(qf ** -N, qf, n)
            * (_one_plus(p, qf, 0) / _one_plus(p, qf, 2 * n))
            * tail
            * _lspow(-p, n)
            * _lspow(qf, n * n - N * n)
            for n in range(N + 1)
        ]
        return w, d
    if fam is Family.AFFINE_Q_KRAWTCHOUK:
        p = float(spec.param("p"))
        full = _poch(qf, qf, N)
        w = [
            _poch(p * qf, qf, x) * full / _poch(qf, qf, x) / _poch(qf, qf, N - x)
            * _lspow(p * qf, -x)
            for x in range(N + 1)
        ]
        d = [
            _poch(qf, qf, n) * _poch(qf, qf, N - n) / _poch(p * qf, qf, n) / full
            * _lspow(p * qf, n - N)
            for n in range(N + 1)
        ]
        return w, d
    if fam is Family.QUANTUM_Q_KRAWTCHOUK:
        p = float(spec.param("p"))
        w = [
            _poch(p * qf, qf, N - x) / _poch(qf, qf, x) / _poch(qf, qf, N - x)
            * LogSign(-1 if x % 2 else 1, 0.0)
            * _lspow(qf, x * (x - 1) / 2)
            for x in range(N + 1)
        ]
        full = _poch(qf, qf, N)
        d = [
            _poch(qf, qf, N - n) * _poch(qf, qf, n) * _poch(p * qf, qf, n)
            / (full * full)
            * LogSign(-1 if (N - n) % 2 else 1, 0.0)
            * _lspow(p, N)
            * _lspow(qf, N * n + N * (N + 1) / 2 - n * (n + 1) / 2)
            for n in range(N + 1)
        ]
        return w, d
    if fam is Family.DUAL_Q_KRAWTCHOUK:
        c = float(spec.param("c"))
        w = [
            _poch(c * qf ** -N, qf, x) * _poch(qf ** -N, qf, x)
            / _poch(qf, qf, x) / _poch(c * qf, qf, x)
            * (_one_plus(-c, qf, 2 * x - N) / _one_plus(-c, qf, -N))
            * _lspow(c, -x)
            * _lspow(qf, x * (2 * N - x))
            for x in range(N + 1)
        ]
        head = _poch(1.0 / c, qf, N)
        d = [
            _poch(qf, qf, n) * head / _poch(qf ** -N, qf, n)
            * _lspow(c * qf ** -N, n)
            for n in range(N + 1)
        ]
        return w, d
    if fam is Family.Q_HAHN:
        a, b = float(spec.param("alpha")), float(spec.param("beta"))
        w = [
            _poch(a * qf, qf, x) * _poch(qf ** -N, qf, x)
            / _poch(qf, qf, x) / _poch(qf ** -N / b, qf, x)
            * _lspow(a * b * qf, -x)
            for x in range(N + 1)
        ]
        head = _poch(a * b * qf ** 2, qf, N) / _lspow(a * qf, N) / _poch(b * qf, qf, N)
        d = [
            head
            * _poch(qf, qf, n) * _poch(b * qf, qf, n) * _poch(a * b * qf ** (N + 2), qf, n)
            / _poch(qf ** -N, qf, n) / _poch(a * qf, qf, n) / _poch(a * b * qf, qf, n)
            * _ls((1 - a * b * qf) / (1 - a * b * qf ** (2 * n + 1)))
            * _lspow(-a * qf ** (1 - N), n)
            * _lspow(qf, n * (n - 1) / 2)
            for n in range(N + 1)
        ]
        return w, d
    if fam is Family.DUAL_Q_HAHN:
        g, dd = float(spec.param("gamma")), float(spec.param("delta"))
        gd = g * dd
        w = [
            _poch(g * qf, qf, x) * _poch(gd * qf, qf, x) * _poch(qf ** -N, qf, x)
            / _poch(qf, qf, x) / _poch(gd * qf ** (N + 2), qf, x) / _poch(dd * qf, qf, x)
            * _ls((1 - gd * qf ** (2 * x + 1)) / (1 - gd * qf))
            * _lspow(-g * qf, -x)
            * _lspow(qf, N * x - x * (x - 1) / 2)
            for x in range(N + 1)
        ]
        head = _poch(qf ** (-N - 1) / gd, qf, N) / _poch(qf ** -N / dd, qf, N)
        d = [
            head
            * _poch(qf, qf, n) * _poch(qf ** -N / dd, qf, n)
            / _poch(qf ** -N, qf, n) / _poch(g * qf, qf, n)
            * _lspow(gd * qf, n)
            for n in range(N + 1)
        ]
        return w, d
    if fam is Family.Q_RACAH:
        a, b = float(spec.param("alpha")), float(spec.param("beta"))
        g = float(spec.param("gamma"))
        dd = 1.0 / (b * qf ** (N + 1))
        gd = g * dd
        w = [
            _poch(a * qf, qf, x) * _poch(qf ** -N, qf, x)
            * _poch(g * qf, qf, x) * _poch(gd * qf, qf, x)
            / _poch(qf, qf, x) / _poch(gd * qf / a, qf, x)
            / _poch(g * qf / b, qf, x) / _poch(dd * qf, qf, x)
            * _ls((1 - gd * qf ** (2 * x + 1)) / (1 - gd * qf))
            * _lspow(a * b * qf, -x)
            for x in range(N + 1)
        ]
        head = (
            _poch(a * b * qf ** 2, qf, N) * _poch(b / g, qf, N)
            / _poch(a * b * qf / g, qf, N) / _poch(b * qf, qf, N)
        )
        d = [
            head
            * _poch(qf, qf, n) * _poch(a * b * qf / g, qf, n)
            * _poch(a * b * qf ** (N + 2), qf, n) * _poch(b * qf, qf, n)
            / _poch(qf ** -N, qf, n) / _poch(a * qf, qf, n)
            / _poch(a * b * qf, qf, n) / _poch(g * qf, qf, n)
            * _ls((1 - a * b * qf) / (1 - a * b * qf ** (2 * n + 1)))
            * _lspow(g * qf ** -N / b, n)
            for n in range(N + 1)
        ]
        return w, d
    raise AssertionError(fam)


def _qk_pst_weights_norms(N: int, qf: float) -> Tuple[list, list]:
    """Simplified transfer-point forms of the q-Krawtchouk data."""
    full = _poch(qf, qf, N)
    w = [
        full / _poch(qf, qf, x) / _poch(qf, qf, N - x) * _lspow(qf, x * (x - 1) / 2)
        for x in range(N + 1)
    ]
    d = []
    for n in range(N + 1):
        lo, hi = min(n, N - n), abs(N - 2 * n)
        mid = _lspow(qf, lo) * _one_plus(1.0, qf, hi)  # q**n + q**(N-n), safely
        d.append(
            _ls(2.0)
            * _poch(qf, qf, n) * _poch(-qf, qf, n)
            * _poch(qf, qf, N - n) * _poch(-qf, qf, N - n)
            / (full * mid)
        )
    return w, d


def orthogonality_data(spec: FamilySpec) -> OrthogonalityData:
    """Weights and norms, sign-normalised to positive when needed.

    Raises InvalidSpecError when the data cannot be normalised to a
    positive orthogonality measure (mixed signs or vanishing entries),
    which is exactly the positivity check used by :func:`validate`.
    """
    structural = _structural_violations(spec)
    if structural:
        raise InvalidSpecError(f"{spec.describe()}: " + "; ".join(structural))
    w, d = _weights_norms(spec)
    signs = {t.sign for t in w} | {t.sign for t in d}
    if 0 in signs:
        raise InvalidSpecError(
            f"degenerate weight or norm in {spec.describe()}"
        )
    if signs == {1}:
        return OrthogonalityData(tuple(w), tuple(d), flipped=False)
    if signs == {-1}:
        return OrthogonalityData(tuple(-t for t in w), tuple(-t for t in d), flipped=True)
    raise InvalidSpecError(
        f"orthogonality data of {spec.describe()} has mixed signs"
    )


def orthonormal_value(spec: FamilySpec, n: int, x: int) -> float:
    """Entry U[n, x] of the orthonormal matrix, gauge included.

    The raw value is sqrt(w(x)/d_n) P_n(x); row n additionally carries
    the site sign that makes the chain couplings positive (see
    :func:`site_signs`).
    """
    data = orthogonality_data(spec)
    scale = (data.weights[x] / data.norms[n]).sqrt()
    return site_signs(spec)[n] * scale.to_float() * evaluate(spec, n, x)


def orthonormal_matrix(spec: FamilySpec) -> np.ndarray:
    """The full (N+1) x (N+1) matrix U[n, x] = s_n sqrt(w(x)/d_n) P_n(x).

    Rows are indexed by degree (chain site), columns by grid node
    (eigenvalue label).  Rows and columns are orthonormal for a valid
    spec, and column x is the eigenvector of eigenvalue(spec, x) for
    the assembled chain matrix with negative off-diagonal.
    """
    N = spec.N
    data = orthogonality_data(spec)
    signs = site_signs(spec)
    out = np.empty((N + 1, N + 1))
    for n in range(N + 1):
        for x in range(N + 1):
            scale = (data.weights[x] / data.norms[n]).sqrt()
            out[n, x] = signs[n] * (scale * _point_value(spec, n, x)).to_float()
    return out


# ----------------------------------------------------------------------
# recurrence -> chain couplings

def _jacobi_AC(spec: FamilySpec, n: int) -> Tuple[float, float]:
    """Raise/lower coefficients A_n, C_n of the grid-variable recurrence
    for the four families expressed through them.

    A_N and C_0 vanish identically (factors 1-q^{n-N} and 1-q^n), so
    they are returned as exact zeros; evaluating the full expression
    there can hit a removable 0/0 (e.g. q-Hahn with alpha*beta = 1).
    """
    N, qf = spec.N, spec.qf
    fam = spec.family
    if fam is Family.Q_KRAWTCHOUK:
        p = float(spec.param("p"))
        A = 0.0 if n == N else (
            (1 - qf ** (n - N)) * (1 + p * qf ** n)
            / ((1 + p * qf ** (2 * n)) * (1 + p * qf ** (2 * n + 1)))
        )
        C = 0.0 if n == 0 else (
            -p * qf ** (2 * n - N - 1)
            * (1 + p * qf ** (n + N)) * (1 - qf ** n)
            / ((1 + p * qf ** (2 * n - 1)) * (1 + p * qf ** (2 * n)))
        )
        return A, C
    if fam is Family.Q_HAHN:
        a, b = float(spec.param("alpha")), float(spec.param("beta"))
        ab = a * b
        A = 0.0 if n == N else (
            (1 - a * qf ** (n + 1)) * (1 - ab * qf ** (n + 1)) * (1 - qf ** (n - N))
            / ((1 - ab * qf ** (2 * n + 1)) * (1 - ab * qf ** (2 * n + 2)))
        )
        C = 0.0 if n == 0 else (
            -a * qf ** (n - N)
            * (1 - qf ** n) * (1 - b * qf ** n) * (1 - ab * qf ** (N + n + 1))
            / ((1 - ab * qf ** (2 * n)) * (1 - ab * qf ** (2 * n + 1)))
        )
        return A, C
    if fam is Family.DUAL_Q_HAHN:
        g, dd = float(spec.param("gamma")), float(spec.param("delta"))
        A = (1 - qf ** (n - N)) * (1 - g * qf ** (n + 1))
        C = g * qf * (1 - qf ** n) * (dd - qf ** (n - N - 1))
        return A, C
    if fam is Family.Q_RACAH:
        a, b = float(spec.param("alpha")), float(spec.param("beta"))
        g = float(spec.param("gamma"))
        dd = 1.0 / (b * qf ** (N + 1))
        ab = a * b
        A = 0.0 if n == N else (
            (1 - a * qf ** (n + 1)) * (1 - ab * qf ** (n + 1))
            * (1 - qf ** (n - N)) * (1 - g * qf ** (n + 1))
            / ((1 - ab * qf ** (2 * n + 1)) * (1 - ab * qf ** (2 * n + 2)))
        )
        C = 0.0 if n == 0 else (
            qf * (1 - qf ** n) * (1 - b * qf ** n)
            * (g - ab * qf ** n) * (dd - a * qf ** n)
            / ((1 - ab * qf ** (2 * n)) * (1 - ab * qf ** (2 * n + 1)))
        )
        return A, C
    raise AssertionError(fam)


def _signed_couplings(spec: FamilySpec) -> Tuple[np.ndarray, np.ndarray]:
    """Raw recurrence couplings J_n (sign included) and energies h_n.

    The textbook orthonormal recurrence can produce negative J_n in
    some admissible parameter regions (q-Racah especially); the sign is
    a gauge choice, absorbed into :func:`site_signs`.
    """
    N, qf = spec.N, spec.qf
    fam = spec.family
    _, norms = _weights_norms(spec)
    ratio = [
        (norms[n + 1] / norms[n]).sqrt().to_float() for n in range(N)
    ]
    J = np.empty(N)
    h = np.empty(N + 1)
    if fam in (Family.Q_KRAWTCHOUK, Family.Q_HAHN, Family.DUAL_Q_HAHN, Family.Q_RACAH):
        one_minus_q = 1.0 - qf
        for n in range(N + 1):
            A, C = _jacobi_AC(spec, n)
            h[n] = -(A + C) / one_minus_q
            if n < N:
                J[n] = -A / one_minus_q * ratio[n]
    elif fam is Family.AFFINE_Q_KRAWTCHOUK:
        p = float(spec.param("p"))
        for n in range(N + 1):
            bn = float(q_number(n, qf)) if n else 0.0
            bnN = float(q_number(n - N, qf))
            h[n] = bn * p * qf ** (n - N) - bnN * (1 - p * qf ** (n + 1))
            if n < N:
                J[n] = -bnN * (1 - p * qf ** (n + 1)) * ratio[n]
    elif fam is Family.QUANTUM_Q_KRAWTCHOUK:
        p = float(spec.param("p"))
        for n in range(N + 1):
            bn = float(q_number(n, qf)) if n else 0.0
            bnN = float(q_number(n - N, qf))
            h[n] = -bn * (1 - p * qf ** n) / (p * qf ** (2 * n)) - bnN / (
                p * qf ** (2 * n + 1)
            )
            if n < N:
                J[n] = -bnN / (p * qf ** (2 * n + 1)) * ratio[n]
    elif fam is Family.DUAL_Q_KRAWTCHOUK:
        c = float(spec.param("c"))
        for n in range(N + 1):
            bn = float(q_number(n, qf)) if n else 0.0
            bnN = float(q_number(n - N, qf))
            # note: the bracket arguments here are fixed by the trace
            # identity sum(h) = sum(eps), see the test suite
            h[n] = -bnN - c * qf ** -N * bn
            if n < N:
                J[n] = -bnN * ratio[n]
    else:
        raise AssertionError(fam)
    return J, h


def site_signs(spec: FamilySpec) -> np.ndarray:
    """Per-site signs s_n turning raw couplings into positive ones.

    s_0 = +1 and s_{n+1} = s_n * sign(J_n_raw).  Conjugating the raw
    Jacobi matrix by diag(s) flips every negative off-diagonal entry,
    so the chain with couplings |J_n| has eigenvector matrix
    diag(s) * U_raw.  In the parameter regions the positivity claims
    cover, every s_n is +1.
    """
    J, _ = _signed_couplings(spec)
    signs = np.ones(spec.N + 1)
    for n in range(spec.N):
        signs[n + 1] = signs[n] * (1.0 if J[n] > 0 else -1.0)
    return signs


def recurrence_coefficients(spec: FamilySpec) -> SpinChain:
    """Chain couplings J_n (n = 0..N-1) and on-site energies h_n (n = 0..N).

    These are the three-term recurrence coefficients of the orthonormal
    family, arranged so that the hopping matrix with -J off-diagonal
    has the family's eigenvalue map as its spectrum.  Couplings are
    reported as positive magnitudes; the gauge signs live in
    :func:`site_signs` and are already folded into the orthonormal
    matrix.
    """
    J, h = _signed_couplings(spec)
    return SpinChain(np.abs(J), h, source=spec)


# ----------------------------------------------------------------------
# eigenvalue maps

def eigenvalue(spec: FamilySpec, k: int) -> Scalar:
    """eps_k of the hopping matrix, exact (Fraction) for exact specs.

    All seven maps share the factor -[-k] = 1/q + ... + 1/q**k; the
    dual families modulate it by a parameter-dependent linear factor,
    so their maps need not be monotone in k.
    """
    if not (0 <= k <= spec.N):
        raise ValueError("need 0 <= k <= N")
    fam = spec.family
    exact = spec.is_exact
    q: Scalar = spec.qx if exact else spec.qf
    base = -q_number(-k, q) if k else (Fraction(0) if exact else 0.0)
    if fam is Family.DUAL_Q_KRAWTCHOUK:
        c = spec.param("c") if exact else float(spec.param("c"))
        return base * (1 - _scaled_qpow(spec, c, k - spec.N))
    if fam in (Family.Q_RACAH, Family.DUAL_Q_HAHN):
        gd = _gamma_delta(spec)
        if not exact:
            gd = float(gd)
        return base * (1 - _scaled_qpow(spec, gd, k + 1))
    return base


def eigenvalues(spec: FamilySpec) -> list:
    return [eigenvalue(spec, k) for k in range(spec.N + 1)]


# ----------------------------------------------------------------------
# transfer-point closed forms and validation

def pst_chain_closed_form(q, N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Closed-form transfer-point couplings and energies.

        J_n = sqrt([n+1][N-n]) * q / (q**(N-n) + q**(n+1))
              * sqrt((1+q**(N-n))(1+q**(n+1))
                     / ((q**(N-n)+q**(n+2))(q**(N-n+1)+q**(n+1))))
        h_n = [n] (1+q**n) / ((q**(N-n)+q**n)(q**(N-n+1)+q**n))
              + [N-n] (1+q**(N-n)) / ((q**(N-n)+q**n)(q**(N-n)+q**(n+1)))

    Valid for any positive q != 1 (plain float allowed); mirror
    symmetric: h_n = h_{N-n} and J_n = J_{N-1-n}.
    """
    qf = float(q)
    J = np.empty(N)
    h = np.empty(N + 1)
    for n in range(N):
        bracket = float(q_number(n + 1, qf)) * float(q_number(N - n, qf))
        inner = (
            (1 + qf ** (N - n)) * (1 + qf ** (n + 1))
            / ((qf ** (N - n) + qf ** (n + 2)) * (qf ** (N - n + 1) + qf ** (n + 1)))
        )
        J[n] = math.sqrt(bracket) * qf / (qf ** (N - n) + qf ** (n + 1)) * math.sqrt(inner)
    for n in range(N + 1):
        first = 0.0
        if n:
            first = (
                float(q_number(n, qf)) * (1 + qf ** n)
                / ((qf ** (N - n) + qf ** n) * (qf ** (N - n + 1) + qf ** n))
            )
        second = 0.0
        if n < N:
            second = (
                float(q_number(N - n, qf)) * (1 + qf ** (N - n))
                / ((qf ** (N - n) + qf ** n) * (qf ** (N - n) + qf ** (n + 1)))
            )
        h[n] = first + second
    return J, h


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: Tuple[str, ...]

    def __bool__(self) -> bool:
        return self.valid


def _structural_violations(spec: FamilySpec) -> list:
    """Parameter-range conditions stated per family; the definitive
    positivity test is running the orthogonality data itself."""
    out = []
    qf = spec.qf
    fam = spec.family
    N = spec.N

    def pos(name: str) -> Optional[float]:
        v = float(spec.param(name))
        if not v > 0.0:
            out.append(f"{name} must be positive, got {v}")
            return None
        return v

    if fam is Family.Q_KRAWTCHOUK:
        pos("p")
    elif fam is Family.AFFINE_Q_KRAWTCHOUK:
        p = pos("p")
        if p is not None:
            bound = 1.0 / qf if qf < 1.0 else qf ** -N
            if not p < bound:
                out.append(f"need 0 < p < {bound} for q = {spec.q}, got {p}")
    elif fam is Family.QUANTUM_Q_KRAWTCHOUK:
        p = pos("p")
        if p is not None:
            bound = qf ** -N if qf < 1.0 else 1.0 / qf
            if not p > bound:
                out.append(f"need p > {bound} for q = {spec.q}, got {p}")
    elif fam is Family.DUAL_Q_KRAWTCHOUK:
        c = float(spec.param("c"))
        if not c < 0.0:
            out.append(f"c must be negative, got {c}")
    elif fam is Family.Q_HAHN:
        pos("alpha")
        pos("beta")
    elif fam is Family.DUAL_Q_HAHN:
        pos("gamma")
        pos("delta")
    elif fam is Family.Q_RACAH:
        pos("alpha")
        pos("beta")
        pos("gamma")
        if not qf < 1.0:
            out.append(f"q-racah needs 0 < q < 1, got q = {spec.q}")
    return out


def validate(spec: FamilySpec) -> ValidationReport:
    """Structural parameter ranges plus a direct positivity check of the
    weights, norms, and couplings on the whole support."""
    violations = _structural_violations(spec)
    if violations:
        return ValidationReport(False, tuple(violations))
    try:
        data = orthogonality_data(spec)
    except (InvalidSpecError, ZeroDivisionError, DenominatorZeroError, ValueError) as err:
        return ValidationReport(False, (str(err),))
    if any(not math.isfinite(t.logmag) for t in data.weights + data.norms):
        return ValidationReport(False, ("weight or norm overflow/underflow",))
    try:
        chain = recurrence_coefficients(spec)
    except (ValueError, ZeroDivisionError) as err:
        return ValidationReport(False, (f"couplings not positive: {err}",))
    if not np.all(np.isfinite(chain.couplings)) or not np.all(np.isfinite(chain.fields)):
        return ValidationReport(False, ("non-finite couplings",))
    return ValidationReport(True, ())


def require_valid(spec: FamilySpec) -> None:
    report = validate(spec)
    if not report.valid:
        raise InvalidSpecError(
            f"{spec.describe()}: " + "; ".join(report.violations)
        )
