"""Command-line surface: build chains, dump spectra, run time scans,
certify transfer, evaluate closed forms.

Spec files are JSON objects

    {"family": "q-krawtchouk", "N": 2, "q": {"num": 3, "den": 1},
     "params": {"p": "1/9"}, "sign": "neg"}

where parameter values may be integers, "num/den" strings, {"num", "den"}
objects (all exact), or plain floats (inexact; such specs lose access to
the exact-phase routes).  The family tag "chain" takes explicit data
instead: params {"J": [...], "h": [...]} with N couplings and N+1
on-site energies, which is exactly what ``build --format json`` emits,
so a built chain re-ingests as a spec.  The optional "sign" field picks
the off-diagonal sign convention of the hopping matrix; the two
conventions are unitarily equivalent and flip every cross-site
amplitude by (-1)**(r+s).

Times are written as rational multiples of pi ("9pi", "3/2pi") to route
through the exact-phase engine; bare decimal seconds are accepted but
flagged on standard error, and refused beyond the floating safety
bound.  Float parameter values are carried into the exact routes as
their exact binary rationals, which are the same numbers, so rational-q
specs never lose the exact engine; scan evaluates the endpoint
magnitude at each point's would-be transfer time, where a failing
parity table is part of the answer rather than an error.  Reals print
at 17 significant digits, exact values as "num/den", tables as CSV with
a header row and LF line endings, so identical invocations produce
byte-identical output.

Exit codes are a stable contract: 0 success or Perfect verdict,
1 Imperfect verdict, 2 parse error, 3 validation failure, 4 floating
time beyond the safety bound, 5 deformation outside the odd/odd parity
class, 6 phase condition unmet.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import closedform, evolve, families
from .chain import (
    SignConvention,
    SpinChain,
    analytic_decomposition,
    assemble_matrix,
    numeric_decomposition,
    verify_decomposition,
)
from .closedform import PhaseConditionUnmetError
from .evolve import ExactPhaseTime, TimeBoundExceededError, TransferVerdict
from .families import Family, FamilySpec, InvalidSpecError
from .qseries import NotOddOddError, RationalQ

__all__ = [
    "EXIT_OK",
    "EXIT_IMPERFECT",
    "EXIT_PARSE",
    "EXIT_VALIDATION",
    "EXIT_TIME_BOUND",
    "EXIT_NOT_ODD_ODD",
    "EXIT_PHASE",
    "SpecFile",
    "SpecParseError",
    "entry",
    "load_spec_file",
    "main",
    "parse_spec_data",
    "parse_time",
]

EXIT_OK = 0
EXIT_IMPERFECT = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_TIME_BOUND = 4
EXIT_NOT_ODD_ODD = 5
EXIT_PHASE = 6


class SpecParseError(ValueError):
    """A spec file failed to parse; the message lists every problem."""


# ----------------------------------------------------------------------
# spec files

_FAMILY_PARAMS: Dict[str, Tuple[str, ...]] = {
    Family.Q_KRAWTCHOUK.value: ("p",),
    Family.AFFINE_Q_KRAWTCHOUK.value: ("p",),
    Family.QUANTUM_Q_KRAWTCHOUK.value: ("p",),
    Family.DUAL_Q_KRAWTCHOUK.value: ("c",),
    Family.Q_HAHN.value: ("alpha", "beta"),
    Family.DUAL_Q_HAHN.value: ("gamma", "delta"),
    Family.Q_RACAH.value: ("alpha", "beta", "gamma"),
}

_FAMILY_BUILDERS = {
    Family.Q_KRAWTCHOUK.value: families.q_krawtchouk,
    Family.AFFINE_Q_KRAWTCHOUK.value: families.affine_q_krawtchouk,
    Family.QUANTUM_Q_KRAWTCHOUK.value: families.quantum_q_krawtchouk,
    Family.DUAL_Q_KRAWTCHOUK.value: families.dual_q_krawtchouk,
    Family.Q_HAHN.value: families.q_hahn,
    Family.DUAL_Q_HAHN.value: families.dual_q_hahn,
    Family.Q_RACAH.value: families.q_racah,
}

CHAIN_FAMILY_TAG = "chain"


@dataclass(frozen=True)
class SpecFile:
    """A parsed spec file: a polynomial family or an explicit chain."""

    spec: Optional[FamilySpec]
    chain: Optional[SpinChain]
    sign: SignConvention

    @property
    def N(self) -> int:
        if self.spec is not None:
            return self.spec.N
        return self.chain.last_site

    def describe(self) -> str:
        if self.spec is not None:
            return self.spec.describe()
        return f"chain(N={self.chain.last_site})"

    def require_family(self, what: str) -> FamilySpec:
        if self.spec is None:
            raise SpecParseError(f"{what} needs a polynomial family spec, "
                                 f"not an explicit chain")
        return self.spec

    def require_rational_q(self, what: str) -> RationalQ:
        spec = self.require_family(what)
        if not isinstance(spec.q, RationalQ):
            raise SpecParseError(f"{what} needs exact rational q, "
                                 f"got q = {spec.q!r}")
        return spec.q


def _parse_exact_or_float(
    value: object, where: str, errors: List[str]
) -> Union[Fraction, float, None]:
    """Numbers stay exact when they can: ints, "num/den" strings and
    {"num", "den"} objects become Fractions, floats stay floats."""
    if isinstance(value, bool):
        errors.append(f"{where}: expected a number, got {value!r}")
        return None
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            errors.append(f"{where}: cannot read {value!r} as num/den")
            return None
    if isinstance(value, dict):
        extra = set(value) - {"num", "den"}
        missing = {"num", "den"} - set(value)
        if extra or missing:
            errors.append(f"{where}: a rational object needs exactly "
                          f"the keys num and den, got {sorted(value)}")
            return None
        if not all(isinstance(value[k], int) for k in ("num", "den")):
            errors.append(f"{where}: num and den must be integers")
            return None
        if value["den"] == 0:
            errors.append(f"{where}: zero denominator")
            return None
        return Fraction(value["num"], value["den"])
    errors.append(f"{where}: expected a number, got {value!r}")
    return None


def _parse_q(value: object, errors: List[str]) -> Union[RationalQ, float, None]:
    raw = _parse_exact_or_float(value, "q", errors)
    if raw is None:
        return None
    if isinstance(raw, float):
        return raw
    try:
        return RationalQ(raw.numerator, raw.denominator)
    except (ValueError, ZeroDivisionError) as exc:
        errors.append(f"q: {exc}")
        return None


def _parse_number_list(
    value: object, where: str, errors: List[str]
) -> Optional[List[float]]:
    if not isinstance(value, list):
        errors.append(f"{where}: expected a list of numbers")
        return None
    out = []
    for i, item in enumerate(value):
        parsed = _parse_exact_or_float(item, f"{where}[{i}]", errors)
        if parsed is None:
            return None
        out.append(float(parsed))
    return out


def parse_spec_data(data: object) -> SpecFile:
    """Parse a decoded JSON object into a SpecFile.

    Structural problems are collected and reported together; a spec
    that parses but violates a family constraint is left to the
    per-command validation so it exits with the validation code.
    """
    errors: List[str] = []
    if not isinstance(data, dict):
        raise SpecParseError("spec file must be a JSON object")
    known = {"family", "N", "q", "params", "sign"}
    for key in sorted(set(data) - known):
        errors.append(f"unknown key {key!r}")
    family = data.get("family")
    if not isinstance(family, str):
        errors.append("family: required string tag")
        family = None
    elif family != CHAIN_FAMILY_TAG and family not in _FAMILY_PARAMS:
        tags = ", ".join(sorted(_FAMILY_PARAMS) + [CHAIN_FAMILY_TAG])
        errors.append(f"family: unknown tag {family!r}; expected one of {tags}")
        family = None
    sign = SignConvention.NEGATIVE
    if "sign" in data:
        try:
            sign = SignConvention(data["sign"])
        except ValueError:
            errors.append(f"sign: expected \"pos\" or \"neg\", got {data['sign']!r}")
    params = data.get("params")
    if not isinstance(params, dict):
        errors.append("params: required object")
        params = {}

    if family == CHAIN_FAMILY_TAG:
        J = _parse_number_list(params.get("J", []), "params.J", errors)
        h = _parse_number_list(params.get("h"), "params.h", errors)
        for key in sorted(set(params) - {"J", "h"}):
            errors.append(f"params.{key}: explicit chains take only J and h")
        if "N" in data and isinstance(data["N"], int) and J is not None:
            if data["N"] != len(J):
                errors.append(f"N = {data['N']} disagrees with {len(J)} couplings")
        if errors:
            raise SpecParseError("; ".join(errors))
        try:
            chain = SpinChain(np.array(J, dtype=float), np.array(h, dtype=float))
        except ValueError as exc:
            # shape and positivity are value constraints, not syntax
            raise InvalidSpecError(f"chain: {exc}") from exc
        return SpecFile(spec=None, chain=chain, sign=sign)

    N = data.get("N")
    if not isinstance(N, int) or isinstance(N, bool) or N < 0:
        errors.append(f"N: required integer >= 0, got {data.get('N')!r}")
        N = None
    q = _parse_q(data.get("q"), errors) if "q" in data else None
    if "q" not in data:
        errors.append("q: required")
    if family is not None:
        wanted = _FAMILY_PARAMS[family]
        for key in sorted(set(params) - set(wanted)):
            errors.append(f"params.{key}: {family} takes only {', '.join(wanted)}")
        values = []
        for key in wanted:
            if key not in params:
                errors.append(f"params.{key}: required for {family}")
                continue
            parsed = _parse_exact_or_float(params[key], f"params.{key}", errors)
            if parsed is not None:
                values.append(parsed)
    if errors:
        raise SpecParseError("; ".join(errors))
    spec = _FAMILY_BUILDERS[family](N, q, *values)
    return SpecFile(spec=spec, chain=None, sign=sign)


def load_spec_file(path: str) -> SpecFile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path} is not valid JSON: {exc}") from exc
    return parse_spec_data(data)


# ----------------------------------------------------------------------
# formatting

def _real(x: float) -> str:
    # 17 significant digits always round-trip a binary64
    value = float(x)
    if value == 0.0:
        value = 0.0  # canonical zero, never "-0"
    return f"{value:.17g}"


def _exact(value: object) -> str:
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    return "-"


def _param_repr(value: Union[Fraction, float]) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return _real(value)


def _emit(lines: Sequence[str], output: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _note(message: str) -> None:
    print(message, file=sys.stderr)


# ----------------------------------------------------------------------
# time and grid arguments

_PI_MULTIPLE = re.compile(r"^([+-]?\d+(?:/\d+)?)\s*\*?\s*pi$")


def parse_time(text: str) -> Union[ExactPhaseTime, float]:
    """"9pi" and "3/2pi" give exact phase times; bare numbers give
    floating seconds."""
    match = _PI_MULTIPLE.match(text.strip())
    if match:
        return ExactPhaseTime(Fraction(match.group(1)))
    try:
        return float(text)
    except ValueError:
        raise SpecParseError(
            f"cannot read time {text!r}; use a pi multiple like 9pi or "
            "3/2pi, or a decimal number of seconds"
        ) from None


def _parse_grid_value(text: str) -> Union[Fraction, float]:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return float(text)
        except ValueError:
            raise SpecParseError(f"cannot read grid value {text!r}") from None


def _parse_count(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise SpecParseError(f"grid count must be an integer, got {text!r}") from None


def _linear_grid(
    lo: Union[Fraction, float], hi: Union[Fraction, float], count: int
) -> List[Union[Fraction, float]]:
    if count <= 0:
        raise SpecParseError("empty grid: count must be positive")
    if count == 1:
        return [lo]
    if isinstance(lo, Fraction) and isinstance(hi, Fraction):
        step = (hi - lo) / (count - 1)
        return [lo + k * step for k in range(count)]
    return [float(x) for x in np.linspace(float(lo), float(hi), count)]


def _log_grid(lo: float, hi: float, count: int) -> List[float]:
    if count <= 0:
        raise SpecParseError("empty grid: count must be positive")
    if lo <= 0 or hi <= 0:
        raise SpecParseError("log-spaced grids need positive endpoints")
    if count == 1:
        return [float(lo)]
    return [float(x) for x in np.geomspace(float(lo), float(hi), count)]


# ----------------------------------------------------------------------
# shared evaluation plumbing

def _spec_chain(sf: SpecFile) -> SpinChain:
    if sf.chain is not None:
        return sf.chain
    return families.recurrence_coefficients(sf.spec)


def _exact_spec(spec: FamilySpec) -> FamilySpec:
    """Same family with float parameters replaced by their exact binary
    rationals, which are the same numbers, so the exact-phase routes
    apply whenever q itself is rational."""
    values = [
        Fraction(value) if isinstance(value, float) else value
        for (_, value) in spec.params
    ]
    return _FAMILY_BUILDERS[spec.family.value](spec.N, spec.q, *values)


def _decomposition(sf: SpecFile):
    """Decomposition and hopping matrix honouring the sign convention.

    The analytic route is stated for the negative convention; the
    positive one conjugates by diag((-1)**site), which flips eigenvector
    rows and leaves the spectrum alone.
    """
    matrix = assemble_matrix(_spec_chain(sf), sf.sign)
    if sf.spec is None:
        return numeric_decomposition(matrix), matrix
    dec = analytic_decomposition(sf.spec)
    if sf.sign is SignConvention.POSITIVE:
        twist = np.where(np.arange(dec.size) % 2 == 0, 1.0, -1.0)
        dec = type(dec)(
            dec.eigenvalues,
            dec.eigenvectors * twist[:, None],
            dec.exact_eigenvalues,
        )
    return dec, matrix


def _sign_twist(sf: SpecFile, r: int, s: int) -> float:
    if sf.sign is SignConvention.POSITIVE and (r + s) % 2 == 1:
        return -1.0
    return 1.0


def _check_site(sf: SpecFile, name: str, value: int) -> int:
    if not 0 <= value <= sf.N:
        raise SpecParseError(f"{name} = {value} outside sites 0..{sf.N}")
    return value


# ----------------------------------------------------------------------
# subcommands

def cmd_build(args: argparse.Namespace) -> int:
    sf = load_spec_file(args.spec)
    if sf.spec is not None:
        families.require_valid(sf.spec)
    chain = _spec_chain(sf)
    if args.format == "json":
        payload = {
            "family": CHAIN_FAMILY_TAG,
            "N": chain.last_site,
            "params": {
                "J": [float(x) for x in chain.couplings],
                "h": [float(x) for x in chain.fields],
            },
            "sign": sf.sign.value,
        }
        _emit([json.dumps(payload)], args.output)
        return EXIT_OK
    lines = ["section,index,value"]
    for n, J in enumerate(chain.couplings):
        lines.append(f"J,{n},{_real(J)}")
    for n, h in enumerate(chain.fields):
        lines.append(f"h,{n},{_real(h)}")
    _emit(lines, args.output)
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    sf = load_spec_file(args.spec)
    if sf.spec is not None:
        families.require_valid(sf.spec)
    dec, matrix = _decomposition(sf)
    report = verify_decomposition(dec, matrix)
    lines = [f"# spectrum of {sf.describe()} [sign={sf.sign.value}]"]
    lines.append("k,eps_exact,eps")
    exact = dec.exact_eigenvalues or (None,) * dec.size
    for k in range(dec.size):
        tag = _exact(exact[k]) if exact[k] is not None else "-"
        lines.append(f"{k},{tag},{_real(dec.eigenvalues[k])}")
    lines.append("# eigenvectors U[site, k]")
    for row in dec.eigenvectors:
        lines.append(",".join(_real(x) for x in row))
    lines.append(f"# reconstruction residual: {report.reconstruction_residual:.3e}")
    _emit(lines, args.output)
    return EXIT_OK


def _evolve_times(args: argparse.Namespace) -> List[Union[ExactPhaseTime, float]]:
    if args.times is not None:
        if not args.times:
            raise SpecParseError("empty grid: give at least one time")
        return [parse_time(text) for text in args.times]
    lo, hi, count = args.grid
    grid = _linear_grid(
        _parse_grid_value(lo), _parse_grid_value(hi), _parse_count(count)
    )
    return [float(t) for t in grid]


def cmd_evolve(args: argparse.Namespace) -> int:
    sf = load_spec_file(args.spec)
    if sf.spec is not None:
        families.require_valid(sf.spec)
    r = _check_site(sf, "r", args.r)
    s = _check_site(sf, "s", args.s)
    times = _evolve_times(args)
    twist = _sign_twist(sf, r, s)

    exact_spec = None
    if sf.spec is not None and isinstance(sf.spec.q, RationalQ):
        exact_spec = _exact_spec(sf.spec)
    if any(isinstance(t, float) for t in times):
        _note("floating times run through inexact trigonometric phases")
    if exact_spec is None and any(isinstance(t, ExactPhaseTime) for t in times):
        _note("no exact rational spectrum; pi-multiple times evaluated "
              "in floating point")

    dec = None
    lines = ["t,re_f,im_f,abs_f"]
    for t in times:
        if isinstance(t, ExactPhaseTime) and exact_spec is not None:
            amp = evolve.correlation_exact_phase(exact_spec, r, s, t)
            t_value = t.to_float()
        else:
            t_value = t.to_float() if isinstance(t, ExactPhaseTime) else float(t)
            if dec is None:
                dec, _ = _decomposition(sf)
            amp = evolve.correlation(dec, r, s, t_value)
        re, im = twist * amp.re, twist * amp.im
        lines.append(
            f"{_real(t_value)},{_real(re)},{_real(im)},"
            f"{_real(np.hypot(re, im))}"
        )
    _emit(lines, args.output)
    return EXIT_OK


def cmd_pst_check(args: argparse.Namespace) -> int:
    sf = load_spec_file(args.spec)
    sf.require_rational_q("pst-check")
    families.require_valid(sf.spec)
    try:
        report = evolve.transfer_report(_exact_spec(sf.spec))
    except NotOddOddError as exc:
        classification = evolve.classify_q(sf.spec.q)
        _note(f"{exc}")
        _note(classification.explanation)
        return EXIT_NOT_ODD_ODD
    classification = evolve.classify_q(sf.spec.q)
    lines = [
        f"spec: {sf.describe()}",
        f"classification: {classification.parity_class.value}; "
        f"{classification.explanation}",
        f"T = {report.time}",
        "k,t_eps_over_pi,integer,parity_ok",
    ]
    for entry_ in report.parity.entries:
        lines.append(
            f"{entry_.k},{entry_.value},"
            f"{'yes' if entry_.is_integer else 'no'},"
            f"{'yes' if entry_.parity_matches else 'no'}"
        )
    lines.append(f"|f_N0(T)| = {_real(report.endpoint_magnitude)}")
    lines.append(f"period residual |f(2T) - I|: {report.period_residual:.3e}")
    if report.mirror_residual is not None:
        lines.append(f"mirror residual: {report.mirror_residual:.3e}")
    lines.append(
        "verdict: "
        + ("Perfect" if report.verdict is TransferVerdict.PERFECT else "Imperfect")
    )
    _emit(lines, args.output)
    return EXIT_OK if report.verdict is TransferVerdict.PERFECT else EXIT_IMPERFECT


def _closed_form_result(
    sf: SpecFile, r: int, s: int
) -> closedform.ClosedFormResult:
    spec = sf.spec
    values = dict(spec.params)
    N, q = spec.N, spec.q
    if spec.family is Family.Q_KRAWTCHOUK:
        return closedform.f_T_qkrawtchouk(values["p"], q, N, r, s)
    if spec.family is Family.AFFINE_Q_KRAWTCHOUK:
        return closedform.f_T_affine(values["p"], q, N, r, s)
    if spec.family is Family.QUANTUM_Q_KRAWTCHOUK:
        return closedform.f_T_quantum(values["p"], q, N, r, s)
    if spec.family is Family.DUAL_Q_KRAWTCHOUK:
        return closedform.f_T_dual_qk(values["c"], q, N, r, s)
    if spec.family is Family.Q_RACAH:
        return closedform.f_T_qracah(
            values["alpha"], values["beta"], values["gamma"], q, N, r, s
        )
    # the q-Hahn limits carry endpoint product formulas only
    direct = closedform.direct_spectral_sum(spec, r, s)
    if {r, s} != ({0, N} if N else {0}):
        return closedform.ClosedFormResult(
            direct, closedform.Method.FALLBACK_DIRECT_SUM, 0.0
        )
    if spec.family is Family.Q_HAHN:
        value = closedform.f_T_qhahn_N0(values["alpha"], values["beta"], q, N)
    else:
        value = closedform.f_T_dual_qhahn_N0(
            values["gamma"], values["delta"], q, N
        )
    return closedform.ClosedFormResult(
        value, closedform.Method.CLOSED_FORM, abs(value - direct)
    )


def cmd_closed_form(args: argparse.Namespace) -> int:
    sf = load_spec_file(args.spec)
    sf.require_rational_q("closed-form")
    families.require_valid(sf.spec)
    r = _check_site(sf, "r", args.r)
    s = _check_site(sf, "s", args.s)
    sf = SpecFile(spec=_exact_spec(sf.spec), chain=None, sign=sf.sign)
    time = closedform.matched_transfer_time(sf.spec)
    result = _closed_form_result(sf, r, s)
    value = _sign_twist(sf, r, s) * result.value
    lines = [
        f"spec: {sf.describe()}",
        f"T = {time}",
        f"value = {_real(value)}",
        f"method = {result.method.value}",
        f"residual_vs_direct = {result.residual_vs_direct:.3e}",
    ]
    _emit(lines, args.output)
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    sf = load_spec_file(args.spec)
    spec = sf.require_family("scan")
    sf.require_rational_q("scan")
    name = args.param
    wanted = _FAMILY_PARAMS[spec.family.value]
    if name not in wanted:
        raise SpecParseError(
            f"{spec.family.value} has no parameter {name!r}; "
            f"expected one of {', '.join(wanted)}"
        )
    if args.values is not None:
        if not args.values:
            raise SpecParseError("empty grid: give at least one value")
        grid: List[Union[Fraction, float]] = [
            _parse_grid_value(text) for text in args.values
        ]
    else:
        lo, hi, count = args.grid
        lo_v, hi_v = _parse_grid_value(lo), _parse_grid_value(hi)
        if args.log:
            grid = _log_grid(float(lo_v), float(hi_v), _parse_count(count))
        else:
            grid = _linear_grid(lo_v, hi_v, _parse_count(count))
    N = spec.N
    builder = _FAMILY_BUILDERS[spec.family.value]
    rows: List[Tuple[Union[Fraction, float], float]] = []
    for value in grid:
        values = {
            key: Fraction(v) if isinstance(v, float) else v
            for key, v in spec.params
        }
        values[name] = Fraction(value) if isinstance(value, float) else value
        point = builder(N, spec.q, *(values[key] for key in wanted))
        families.require_valid(point)
        # endpoint magnitude at the would-be transfer time; a failing
        # parity table is part of the answer, not an error
        magnitude = evolve.transfer_report(point).endpoint_magnitude
        rows.append((value, magnitude))
    best = max(range(len(rows)), key=lambda i: rows[i][1])
    lines = [f"{name},abs_f_N0"]
    for value, magnitude in rows:
        lines.append(f"{_param_repr(value)},{_real(magnitude)}")
    lines.append(
        f"# max |f_N0| = {_real(rows[best][1])} at "
        f"{name} = {_param_repr(rows[best][0])}"
    )
    _emit(lines, args.output)
    return EXIT_OK


# ----------------------------------------------------------------------
# argument parsing and dispatch

# argparse only recognises plain negative integers and decimals as
# values, not fractions like -1/2, exponent forms, or pi multiples;
# widen the matcher so such tokens parse as arguments, not options
_NEGATIVE_TOKEN = re.compile(
    r"^-\d+(/\d+)?(\*?pi)?$|^-\d*\.?\d+([eE][+-]?\d+)?$"
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchain",
        description="q-deformed spin chains: build, diagonalise, evolve, "
        "certify transfer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p._negative_number_matcher = _NEGATIVE_TOKEN
        p.add_argument("spec", help="path to a JSON spec file")
        p.add_argument("-o", "--output", default=None,
                       help="write to this file instead of standard output")
        p.set_defaults(func=func)
        return p

    p = add("build", cmd_build, "couplings J and on-site energies h")
    p.add_argument("--format", choices=("table", "json"), default="table",
                   help="table: CSV rows; json: re-ingestable chain spec")

    add("spectrum", cmd_spectrum,
        "eigenvalues, eigenvectors, reconstruction residual")

    p = add("evolve", cmd_evolve, "correlation amplitude over a time grid")
    p.add_argument("-r", type=int, required=True, help="observation site")
    p.add_argument("-s", type=int, required=True, help="start site")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--times", nargs="*",
                       help="explicit times: pi multiples like 9pi or decimals")
    group.add_argument("--grid", nargs=3, metavar=("START", "STOP", "COUNT"),
                       help="linear grid of floating times")

    add("pst-check", cmd_pst_check,
        "parity table, transfer time, endpoint amplitude, verdict")

    p = add("closed-form", cmd_closed_form,
            "analytic transfer-time amplitude with residual")
    p.add_argument("-r", type=int, required=True, help="observation site")
    p.add_argument("-s", type=int, required=True, help="start site")

    p = add("scan", cmd_scan, "endpoint amplitude across a parameter grid")
    p.add_argument("--param", required=True, help="parameter name to vary")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--values", nargs="*", help="explicit parameter values")
    group.add_argument("--grid", nargs=3, metavar=("START", "STOP", "COUNT"),
                       help="parameter grid endpoints and size")
    p.add_argument("--log", action="store_true",
                   help="space the grid geometrically")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        _note(f"parse error: {exc}")
        return EXIT_PARSE
    except InvalidSpecError as exc:
        _note(f"validation failed: {exc}")
        return EXIT_VALIDATION
    except TimeBoundExceededError as exc:
        _note(f"time bound: {exc}")
        return EXIT_TIME_BOUND
    except NotOddOddError as exc:
        _note(f"parity class: {exc}")
        return EXIT_NOT_ODD_ODD
    except PhaseConditionUnmetError as exc:
        _note(f"phase condition: {exc}")
        return EXIT_PHASE
    except evolve.NonRationalSpectrumError as exc:
        _note(f"parse error: {exc}")
        return EXIT_PARSE
    except OSError as exc:
        _note(f"i/o error: {exc}")
        return EXIT_PARSE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
