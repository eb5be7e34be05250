"""q-arithmetic kernel: rational deformation parameters, sign/log-magnitude
scalars, q-shifted factorials, and terminating basic hypergeometric series.

Conventions
-----------
For a base ``q > 0``, ``q != 1``:

    [n]_q          = (1 - q**n) / (1 - q)
    (a; q)_n       = prod_{k=0}^{n-1} (1 - a q**k)
    (a1, a2; q)_n  = (a1; q)_n (a2; q)_n

A basic hypergeometric sum with A numerator and B denominator
parameters is

    sum_n  (a1,...,aA; q)_n / ((q, b1,...,bB; q)_n)
           * ((-1)**n q**binom(n,2))**(1 + B - A) * z**n

and is only evaluated here when some numerator parameter equals
``q**-m`` for an integer ``m >= 0``, which truncates the sum at ``n = m``.

Products of q-shifted factorials overflow doubles quickly (factors such
as ``q**(n*n)`` appear), so they are carried as :class:`LogSign` pairs,
a sign in ``{-1, 0, +1}`` together with ``log |value|``.  Individual
series terms are converted back to floats only at the very end and
totalled with compensated summation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

__all__ = [
    "ParityClass",
    "RationalQ",
    "LogSign",
    "q_number",
    "q_pochhammer",
    "q_pochhammer_exact",
    "logsign_sum",
    "basic_hypergeometric",
    "basic_hypergeometric_exact",
    "vwp_pair_reduce",
    "vwp_pair_reduce_exact",
    "QSeriesError",
    "NonTerminatingSeriesError",
    "DenominatorZeroError",
    "PoleAtOneError",
    "NotOddOddError",
]

Exactish = Union[int, Fraction]
Scalar = Union[int, float, Fraction]

# math.exp overflows just above this; LogSign.to_float saturates instead.
_EXP_MAX = 709.0

# |a q**k| beyond e**50: drop the 1 in (1 - a q**k), relative error < 2e-22.
_LOG_DOMINANT = 50.0


class QSeriesError(ValueError):
    """Base class for series evaluation failures."""


class NonTerminatingSeriesError(QSeriesError):
    """No numerator parameter is a nonpositive integer power of q."""


class DenominatorZeroError(QSeriesError):
    """A denominator q-shifted factorial vanishes before the series ends."""


class PoleAtOneError(QSeriesError):
    """Degenerate very-well-poised pair with unit base."""


class NotOddOddError(ValueError):
    """1/q is not a ratio of two odd integers, so no exact transfer time exists."""


class ParityClass(enum.Enum):
    """Parity type of 1/q = P/Q in lowest terms."""

    ODD_ODD = "odd/odd"
    EVEN_OVER_ODD = "even/odd"
    ODD_OVER_EVEN = "odd/even"


@dataclass(frozen=True)
class RationalQ:
    """Positive rational deformation parameter q = num/den, q != 1.

    The pair is reduced on construction.  Writing the inverse in lowest
    terms as 1/q = P/Q (so P = den, Q = num after reduction), the parity
    class of (P, Q) decides whether phases built from powers of 1/q can
    ever align to the alternating pattern (-1)**k.
    """

    num: int
    den: int = 1

    def __post_init__(self) -> None:
        if self.den == 0:
            raise ZeroDivisionError("q must have a nonzero denominator")
        if self.num * self.den <= 0:
            raise ValueError("q must be positive")
        g = math.gcd(self.num, self.den)
        num, den = abs(self.num) // g, abs(self.den) // g
        if num == den:
            raise ValueError("q = 1 is excluded")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "RationalQ":
        return cls(value.numerator, value.denominator)

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def inverse(self) -> Fraction:
        """1/q = P/Q in lowest terms."""
        return Fraction(self.den, self.num)

    @property
    def inv_parity_class(self) -> ParityClass:
        p, qq = self.den, self.num
        if p % 2 == 1 and qq % 2 == 1:
            return ParityClass.ODD_ODD
        if p % 2 == 0:
            return ParityClass.EVEN_OVER_ODD
        return ParityClass.ODD_OVER_EVEN

    def require_odd_odd(self) -> None:
        if self.inv_parity_class is not ParityClass.ODD_ODD:
            raise NotOddOddError(
                f"1/q = {self.den}/{self.num} is {self.inv_parity_class.value}; "
                "an exact transfer time needs odd/odd"
            )

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}" if self.den != 1 else str(self.num)


@dataclass(frozen=True)
class LogSign:
    """A real number held as (sign, log of magnitude).

    ``sign`` is -1, 0 or +1; ``logmag`` is log|value| (forced to -inf
    when the sign is 0).  Multiplication, division, integer powers and
    square roots never overflow; conversion back to a float saturates at
    the double range.
    """

    sign: int
    logmag: float

    @classmethod
    def from_float(cls, value: float) -> "LogSign":
        value = float(value)
        if value == 0.0:
            return cls(0, float("-inf"))
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @classmethod
    def from_pow(cls, base: float, exponent: float) -> "LogSign":
        """base**exponent without overflow.

        Negative bases are allowed only for integer exponents.
        """
        base = float(base)
        if base == 0.0:
            if exponent == 0:
                return cls.one()
            if exponent < 0:
                raise ZeroDivisionError("0 raised to a negative power")
            return cls.zero()
        if base < 0.0:
            if exponent != int(exponent):
                raise ValueError("negative base needs an integer exponent")
            sign = -1 if int(exponent) % 2 else 1
            return cls(sign, exponent * math.log(-base))
        return cls(1, exponent * math.log(base))

    @classmethod
    def one(cls) -> "LogSign":
        return cls(1, 0.0)

    @classmethod
    def zero(cls) -> "LogSign":
        return cls(0, float("-inf"))

    def __mul__(self, other: "LogSign") -> "LogSign":
        if self.sign == 0 or other.sign == 0:
            return LogSign.zero()
        return LogSign(self.sign * other.sign, self.logmag + other.logmag)

    def __truediv__(self, other: "LogSign") -> "LogSign":
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogSign")
        if self.sign == 0:
            return LogSign.zero()
        return LogSign(self.sign * other.sign, self.logmag - other.logmag)

    def __pow__(self, exponent: int) -> "LogSign":
        if self.sign == 0:
            if exponent == 0:
                return LogSign.one()
            if exponent < 0:
                raise ZeroDivisionError("zero to a negative power")
            return LogSign.zero()
        sign = self.sign if exponent % 2 else 1
        return LogSign(sign, self.logmag * exponent)

    def __neg__(self) -> "LogSign":
        if self.sign == 0:
            return self
        return LogSign(-self.sign, self.logmag)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "LogSign":
        """Exact rational input of any size; log taken on the integers."""
        if value == 0:
            return cls.zero()
        sign = 1 if value > 0 else -1
        return cls(sign, math.log(abs(value.numerator)) - math.log(value.denominator))

    def sqrt(self) -> "LogSign":
        if self.sign < 0:
            raise ValueError("square root of a negative LogSign")
        if self.sign == 0:
            return LogSign.zero()
        return LogSign(1, 0.5 * self.logmag)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.logmag > _EXP_MAX:
            return self.sign * float("inf")
        return self.sign * math.exp(self.logmag)


def _exact(value: Scalar) -> Optional[Fraction]:
    """Fraction view of an exact input, None for floats."""
    if isinstance(value, RationalQ):
        return value.as_fraction
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return None


def q_number(n: int, q: Scalar) -> Scalar:
    """The q-integer [n]_q = (1 - q**n) / (1 - q).

    Exact inputs (int, Fraction, RationalQ) give an exact Fraction;
    float input gives a float.  ``n`` may be negative, for example
    [-1]_q = -1/q and -[-k]_q = 1/q + ... + 1/q**k.
    """
    qx = _exact(q)
    if qx is not None:
        if qx == 1:
            raise ZeroDivisionError("[n]_q needs q != 1")
        return (1 - qx ** n) / (1 - qx)
    qf = float(q)
    if qf == 1.0:
        raise ZeroDivisionError("[n]_q needs q != 1")
    return (1.0 - qf ** n) / (1.0 - qf)


class _FactorStream:
    """Overflow-safe factors (1 - a q**k) for k = 0, 1, 2, ...

    Tracks the running power q**k as a float for accuracy and falls back
    to log-space arithmetic once a q**k leaves the comfortable range.
    """

    def __init__(self, a: float, q: float):
        self.a = float(a)
        self.log_a = math.log(abs(self.a)) if self.a != 0.0 else float("-inf")
        self.log_q = math.log(q)

    def factor(self, k: int, q_power: Optional[float]) -> LogSign:
        if self.a == 0.0:
            return LogSign.one()
        t = self.log_a + k * self.log_q
        if t > _LOG_DOMINANT:
            return LogSign(-1 if self.a > 0 else 1, t)
        if t < -_LOG_DOMINANT:
            return LogSign.one()
        if q_power is not None:
            return LogSign.from_float(1.0 - self.a * q_power)
        return LogSign.from_float(1.0 - math.copysign(math.exp(t), self.a))


def q_pochhammer(a: Scalar, q: Scalar, n: int) -> LogSign:
    """(a; q)_n = prod_{k=0}^{n-1} (1 - a q**k) as a LogSign.

    ``n`` must be nonnegative; ``q`` must be positive.  Factors whose
    magnitude would overflow a double are folded in through their
    logarithm, so the result stays finite in log space even when the
    plain product is not representable.  Log magnitudes are totalled
    with compensated summation to keep long products accurate.
    """
    if n < 0:
        raise ValueError("(a; q)_n needs n >= 0 here")
    qf = float(q)
    if qf <= 0.0:
        raise ValueError("(a; q)_n needs q > 0")
    stream = _FactorStream(float(a), qf)
    sign = 1
    logs = []
    q_power: Optional[float] = 1.0
    for k in range(n):
        factor = stream.factor(k, q_power)
        if factor.sign == 0:
            return LogSign.zero()
        sign *= factor.sign
        logs.append(factor.logmag)
        if q_power is not None:
            q_power *= qf
            if q_power == 0.0 or math.isinf(q_power):
                q_power = None
    return LogSign(sign, math.fsum(logs))


def logsign_sum(terms: Sequence[LogSign]) -> LogSign:
    """Sum of LogSign terms, scaled by the largest magnitude first.

    Keeps sums finite in log space even when individual terms are not
    representable as doubles.
    """
    live = [t for t in terms if t.sign != 0]
    if not live:
        return LogSign.zero()
    peak = max(t.logmag for t in live)
    total = math.fsum(t.sign * math.exp(t.logmag - peak) for t in live)
    if total == 0.0:
        return LogSign.zero()
    return LogSign(1 if total > 0 else -1, peak + math.log(abs(total)))


def q_pochhammer_exact(a: Exactish, q: Union[Exactish, RationalQ], n: int) -> Fraction:
    """Exact (a; q)_n for rational a and q."""
    if n < 0:
        raise ValueError("(a; q)_n needs n >= 0 here")
    ax = Fraction(a)
    qx = q.as_fraction if isinstance(q, RationalQ) else Fraction(q)
    out = Fraction(1)
    power = Fraction(1)
    for _ in range(n):
        out *= 1 - ax * power
        power *= qx
    return out


_TERMINATION_CAP = 4096
_TERMINATION_TOL = 1e-12


def _neg_power_index(a: Scalar, q: Scalar) -> Optional[int]:
    """Smallest m >= 0 with a == q**-m, None if there is no such m.

    Exact parameters are matched exactly; floats within relative 1e-12
    of a power.  Candidates above 4096 are not considered.
    """
    ax, qx = _exact(a), _exact(q)
    if ax is not None and qx is not None:
        if ax <= 0:
            return None
        if ax == 1:
            return 0
        if qx <= 0 or qx == 1:
            return None
        # integer logs work at any magnitude, unlike float conversion
        log_a = math.log(ax.numerator) - math.log(ax.denominator)
        log_q = math.log(qx.numerator) - math.log(qx.denominator)
        guess = -log_a / log_q
        if not math.isfinite(guess):
            return None
        for m in (round(guess) - 1, round(guess), round(guess) + 1):
            if 0 <= m <= _TERMINATION_CAP and ax * qx ** m == 1:
                return m
        return None
    try:
        af, qf = float(a), float(q)
    except OverflowError:
        return None
    if af <= 0.0 or not math.isfinite(af):
        return None
    if af == 1.0:
        return 0
    if qf <= 0.0 or qf == 1.0:
        return None
    guess = -math.log(af) / math.log(qf)
    if not math.isfinite(guess):
        return None
    for m in (round(guess) - 1, round(guess), round(guess) + 1):
        if m < 0 or m > _TERMINATION_CAP:
            continue
        if abs(af * qf ** m - 1.0) < _TERMINATION_TOL:
            return m
    return None


def basic_hypergeometric(
    numer: Sequence[Scalar],
    denom: Sequence[Scalar],
    q: Scalar,
    z: Scalar,
) -> float:
    """Evaluate a terminating basic hypergeometric sum.

    Arguments are the numerator parameter list ``(a1, ..., aA)``, the
    denominator list ``(b1, ..., bB)`` (the implicit ``(q; q)_n`` is
    supplied here), the base and the argument.  The factor
    ``((-1)**n q**binom(n,2))**(1+B-A)`` is included, so both the
    balanced ``A = B + 1`` normalisation and the unbalanced variants
    used for transfer amplitudes evaluate correctly.

    Exact parameters (int / Fraction / RationalQ) are recognised as
    termination indices exactly; float parameters within relative 1e-12
    of ``q**-m``.

    Raises
    ------
    NonTerminatingSeriesError
        when no numerator parameter has the form ``q**-m``.
    DenominatorZeroError
        when a denominator factor vanishes at an index strictly below
        the termination index.
    """
    qf = float(q)
    if qf <= 0.0 or qf == 1.0:
        raise ValueError("series base must be positive and != 1")
    stops = [m for m in (_neg_power_index(a, q) for a in numer) if m is not None]
    if not stops:
        raise NonTerminatingSeriesError(
            "no numerator parameter of the form q**-m, refusing an infinite sum"
        )
    top = min(stops)
    for b in denom:
        j = _neg_power_index(b, q)
        if j is not None and j < top:
            raise DenominatorZeroError(
                f"denominator parameter q**-{j} vanishes before the series "
                f"terminates at n = {top}"
            )
    excess = 1 + len(denom) - len(numer)
    log_q = math.log(qf)
    numer_streams = [_FactorStream(float(a), qf) for a in numer]
    denom_streams = [_FactorStream(float(b), qf) for b in denom]
    base_stream = _FactorStream(1.0, qf)
    zf = float(z)
    term = LogSign.one()
    terms = [LogSign.one()]
    q_power: Optional[float] = 1.0
    for n in range(1, top + 1):
        k = n - 1
        for stream in numer_streams:
            term = term * stream.factor(k, q_power)
        if q_power is not None:
            next_power = q_power * qf
            if next_power == 0.0 or math.isinf(next_power):
                next_power = None
        else:
            next_power = None
        for stream in denom_streams:
            factor = stream.factor(k, q_power)
            if factor.sign == 0:
                raise DenominatorZeroError(
                    f"denominator factor vanished at series index {n}"
                )
            term = term / factor
        base = base_stream.factor(n, next_power)  # 1 - q**n from (q; q)_n
        if base.sign == 0:
            raise DenominatorZeroError("(q; q)_n vanished; is q a root of unity?")
        term = term / base
        term = term * LogSign.from_float(zf)
        if excess:
            # ratio of ((-1)**n q**binom(n,2))**excess between n-1 and n
            term = term * LogSign(-1 if excess % 2 else 1, excess * k * log_q)
        terms.append(term)
        if term.sign == 0:
            break
        q_power = next_power
    return logsign_sum(terms).to_float()


def basic_hypergeometric_exact(
    numer: Sequence[Exactish],
    denom: Sequence[Exactish],
    q: Union[Exactish, RationalQ],
    z: Exactish,
) -> Fraction:
    """Exact rational value of a terminating basic hypergeometric sum.

    Same series as :func:`basic_hypergeometric` but all inputs must be
    exact (int / Fraction / RationalQ).  Summing in rational arithmetic
    sidesteps the cancellation between the huge alternating terms that
    these series produce away from q = 1, so this is the evaluator of
    choice whenever the spec data is rational.
    """
    numer_x = [_exact(a) for a in numer]
    denom_x = [_exact(b) for b in denom]
    qx = _exact(q)
    zx = _exact(z)
    if any(v is None for v in numer_x + denom_x + [qx, zx]):
        raise TypeError("exact series evaluation needs exact parameters")
    if qx <= 0 or qx == 1:
        raise ValueError("series base must be positive and != 1")
    stops = [m for m in (_neg_power_index(a, qx) for a in numer_x) if m is not None]
    if not stops:
        raise NonTerminatingSeriesError(
            "no numerator parameter of the form q**-m, refusing an infinite sum"
        )
    top = min(stops)
    for b in denom_x:
        j = _neg_power_index(b, qx)
        if j is not None and j < top:
            raise DenominatorZeroError(
                f"denominator parameter q**-{j} vanishes before the series "
                f"terminates at n = {top}"
            )
    excess = 1 + len(denom_x) - len(numer_x)
    total = Fraction(1)
    term = Fraction(1)
    power = Fraction(1)  # q**(n-1) while processing term n
    for n in range(1, top + 1):
        for a in numer_x:
            term *= 1 - a * power
        if term == 0:
            break
        for b in denom_x:
            factor = 1 - b * power
            if factor == 0:
                raise DenominatorZeroError(
                    f"denominator factor vanished at series index {n}"
                )
            term /= factor
        term /= 1 - qx ** n
        term *= zx
        if excess:
            # ratio of ((-1)**n q**binom(n,2))**excess between n-1 and n
            term *= (-power) ** excess
        total += term
        power *= qx
    return total


def vwp_pair_reduce(base: Scalar, q: Scalar, m: int) -> float:
    """Order-m product of the very-well-poised parameter pair.

    For the pair ``q sqrt(base), -q sqrt(base)`` over ``sqrt(base),
    -sqrt(base)`` the order-m q-shifted factorial ratio telescopes to

        (1 - base * q**(2m)) / (1 - base)

    which is evaluated directly, so no square root of ``base`` is ever
    taken and negative ``base`` is fine.
    """
    bx, qx = _exact(base), _exact(q)
    if (bx == 1) if bx is not None else (float(base) == 1.0):
        raise PoleAtOneError("very-well-poised pair undefined at base = 1")
    if bx is not None and qx is not None:
        return float((1 - bx * qx ** (2 * m)) / (1 - bx))
    bf, qf = float(base), float(q)
    return (1.0 - bf * qf ** (2 * m)) / (1.0 - bf)


def vwp_pair_reduce_exact(
    base: Exactish, q: Union[Exactish, RationalQ], m: int
) -> Fraction:
    """Exact counterpart of :func:`vwp_pair_reduce`."""
    bx = Fraction(base)
    if bx == 1:
        raise PoleAtOneError("very-well-poised pair undefined at base = 1")
    qx = q.as_fraction if isinstance(q, RationalQ) else Fraction(q)
    return (1 - bx * qx ** (2 * m)) / (1 - bx)
