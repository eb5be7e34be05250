"""Mirror-symmetric-in-spirit spin chain data and its spectral theory.

A chain on sites 0..N is described by positive nearest-neighbour
couplings J_0..J_{N-1} and on-site energies h_0..h_N.  In the single
excitation sector the Hamiltonian is the (N+1) x (N+1) symmetric
tridiagonal matrix with h on the diagonal and -J (or +J) off it.  The
two off-diagonal sign conventions are unitarily equivalent through
conjugation by diag((-1)**k), so spectra and transfer amplitudes between
fixed sites agree up to that relabelling; the negative convention is the
default everywhere.

Two independent diagonalisation routes are kept deliberately separate:

* :func:`analytic_decomposition` builds eigenvectors from orthonormal
  polynomial values (see :mod:`qchain.families`),
* :func:`numeric_decomposition` runs a self-contained implicit-shift QL
  iteration on the tridiagonal data, with no reference to any special
  function.

Cross-checking one against the other is the main correctness gate for
everything downstream.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "SignConvention",
    "SpinChain",
    "SpectralDecomposition",
    "DecompositionReport",
    "NoConvergenceError",
    "assemble_matrix",
    "analytic_decomposition",
    "numeric_decomposition",
    "verify_decomposition",
]


class NoConvergenceError(RuntimeError):
    """QL iteration failed to deflate within the sweep budget."""


class SignConvention(enum.Enum):
    """Sign of the off-diagonal entries of the hopping matrix."""

    POSITIVE = "pos"
    NEGATIVE = "neg"


def _frozen_array(values, dtype=float) -> np.ndarray:
    out = np.array(values, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SpinChain:
    """Couplings J (length N) and on-site energies h (length N+1).

    Arrays are copied and marked read-only.  ``source`` optionally
    records the polynomial family spec the chain was derived from.
    """

    couplings: np.ndarray
    fields: np.ndarray
    source: Optional[object] = None

    def __post_init__(self) -> None:
        J = _frozen_array(self.couplings)
        h = _frozen_array(self.fields)
        if J.ndim != 1 or h.ndim != 1:
            raise ValueError("couplings and fields must be one-dimensional")
        if len(h) != len(J) + 1:
            raise ValueError("need len(fields) == len(couplings) + 1")
        if len(h) == 0:
            raise ValueError("a chain has at least one site")
        if np.any(J <= 0.0):
            raise ValueError("couplings must be strictly positive")
        object.__setattr__(self, "couplings", J)
        object.__setattr__(self, "fields", h)

    @property
    def n_sites(self) -> int:
        return len(self.fields)

    @property
    def last_site(self) -> int:
        return len(self.fields) - 1

    def mirror_residual(self) -> float:
        """max deviation from J_n = J_{N-1-n}, h_n = h_{N-n}."""
        J, h = self.couplings, self.fields
        rj = float(np.max(np.abs(J - J[::-1]))) if len(J) else 0.0
        rh = float(np.max(np.abs(h - h[::-1])))
        return max(rj, rh)


def assemble_matrix(
    chain: SpinChain, sign: SignConvention = SignConvention.NEGATIVE
) -> np.ndarray:
    """Single-excitation hopping matrix for the chosen sign convention."""
    h = chain.fields
    J = chain.couplings
    out = np.diag(h)
    off = -J if sign is SignConvention.NEGATIVE else J
    n = len(h)
    idx = np.arange(n - 1)
    out[idx, idx + 1] = off
    out[idx + 1, idx] = off
    return out


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending or family order) and orthonormal eigenvectors.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.  When the
    deformation parameter and family parameters are rational the exact
    eigenvalues are carried alongside as Fractions in the same order.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    exact_eigenvalues: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "eigenvalues", _frozen_array(self.eigenvalues))
        object.__setattr__(self, "eigenvectors", _frozen_array(self.eigenvectors))

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    def reconstruction(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T


# Deflation threshold relative to the local diagonal scale, and the
# per-eigenvalue sweep budget of the QL iteration.
_QL_TOL = 1e-14
_QL_MAX_SWEEPS = 50


def _tridiagonal_ql(d: np.ndarray, e: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Implicit-shift QL iteration with eigenvector accumulation.

    ``d`` holds the diagonal, ``e`` the subdiagonal (length n, last slot
    scratch).  Returns (eigenvalues, column eigenvectors), unordered.
    This is the classic Givens-rotation scheme for symmetric tridiagonal
    matrices, kept dependency-free so it can serve as an independent
    oracle for the closed-form eigenvectors.
    """
    n = len(d)
    d = d.astype(float).copy()
    e = np.append(e.astype(float), 0.0)
    z = np.eye(n)
    for l in range(n):
        sweeps = 0
        while True:
            for m in range(l, n - 1):
                scale = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _QL_TOL * scale:
                    break
            else:
                m = n - 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _QL_MAX_SWEEPS:
                raise NoConvergenceError(
                    f"QL sweep budget exhausted at eigenvalue {l}"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col_i = z[:, i].copy()
                col_j = z[:, i + 1].copy()
                z[:, i + 1] = s * col_i + c * col_j
                z[:, i] = c * col_i - s * col_j
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


def _fix_column_signs(z: np.ndarray) -> np.ndarray:
    """Flip eigenvector columns so the first significant entry is positive."""
    z = z.copy()
    for k in range(z.shape[1]):
        col = z[:, k]
        scale = np.max(np.abs(col))
        if scale == 0.0:
            continue
        lead = col[np.abs(col) > 1e-12 * scale][0]
        if lead < 0.0:
            z[:, k] = -col
    return z


def numeric_decomposition(matrix: np.ndarray) -> SpectralDecomposition:
    """Eigenvalues and orthonormal eigenvectors of a symmetric tridiagonal.

    The input must be square, symmetric, and zero beyond the first
    off-diagonal (diagonal matrices are fine).  Output is deterministic:
    eigenvalues ascend and each eigenvector's first significant
    component is positive.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-13 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix must be symmetric")
    mask = ~(np.eye(n, dtype=bool) | np.eye(n, k=1, dtype=bool) | np.eye(n, k=-1, dtype=bool))
    if np.any(a[mask] != 0.0):
        raise ValueError("matrix must be tridiagonal")
    d = np.diag(a).copy()
    e = np.diag(a, k=-1).copy() if n > 1 else np.zeros(0)
    vals, vecs = _tridiagonal_ql(d, e)
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = _fix_column_signs(vecs[:, order])
    return SpectralDecomposition(vals, vecs)


def analytic_decomposition(spec) -> SpectralDecomposition:
    """Spectral decomposition read off the polynomial data of a spec.

    Eigenvalues come from the family's closed eigenvalue map (exact
    Fractions carried alongside when the spec is exact) and the
    eigenvector matrix is the orthonormal polynomial table: column k of
    U is the eigenvector of eigenvalue eps_k, with U[n, k] the
    orthonormal value of degree n at grid node k.  Agrees with
    assemble_matrix(recurrence_coefficients(spec), NEGATIVE).
    """
    from . import families  # runtime import; families builds on chain

    eps = families.eigenvalues(spec)
    U = families.orthonormal_matrix(spec)
    exact = None
    if all(isinstance(e, Fraction) for e in eps):
        exact = tuple(eps)
    return SpectralDecomposition(
        np.array([float(e) for e in eps]), U, exact_eigenvalues=exact
    )


@dataclass(frozen=True)
class DecompositionReport:
    """Residuals of a decomposition against a matrix and the numeric oracle."""

    orthogonality_residual: float
    reconstruction_residual: float
    eigenvalue_gap: float

    def max_residual(self) -> float:
        return max(
            self.orthogonality_residual,
            self.reconstruction_residual,
            self.eigenvalue_gap,
        )


def verify_decomposition(
    dec: SpectralDecomposition, matrix: np.ndarray
) -> DecompositionReport:
    """Check U^T U = I, U diag(eps) U^T = M, and eigenvalue agreement
    with the independent QL oracle (both sides sorted)."""
    U = dec.eigenvectors
    n = dec.size
    ortho = float(np.max(np.abs(U.T @ U - np.eye(n))))
    recon = float(np.max(np.abs(dec.reconstruction() - matrix)))
    oracle = numeric_decomposition(matrix)
    gap = float(
        np.max(np.abs(np.sort(dec.eigenvalues) - oracle.eigenvalues))
    )
    return DecompositionReport(ortho, recon, gap)
