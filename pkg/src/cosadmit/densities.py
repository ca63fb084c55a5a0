"""Catalog of probability densities with analytic pdfs and cfs.

Each entry carries the metadata the admissibility machinery needs: the
supremum bound M, the polynomial tail exponent beta (f ~ C |x|^-beta),
and p_max, the supremum of p with int |x|^p f(x)^2 dx finite.  For
Student-t(nu) these are beta = nu + 1 and p_max = 2 nu + 1.

Validity of moment orders is metadata, not runtime detection: quadrature
of a divergent integral fails in unreliable ways, so the thresholds gate
up front and raise DivergenceError.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DivergenceError, DomainError
from .numerics import _log_bessel_k_vec, default_quad_tol, integrate

__all__ = [
    "DensitySpec",
    "ProductDensitySpec",
    "catalog",
    "get_density",
    "parse_density",
    "student_t_cf",
    "weighted_moment",
    "tail_weighted_moment",
    "first_abs_moment",
    "l2_norm_sq",
    "interval_l2_norm_sq",
    "tail_mass",
]


@dataclass(frozen=True)
class DensitySpec:
    """A named density with analytic pdf and characteristic function.

    ``pdf`` and ``cf`` are vectorized over ndarrays.  For even densities
    the cf returns real values (so coefficient parity is exact).
    """

    name: str
    params: dict[str, float] = field(default_factory=dict)
    pdf: Callable[[np.ndarray], np.ndarray] = None
    cf: Callable[[np.ndarray], np.ndarray] = None
    support: tuple[float, float] = (-math.inf, math.inf)
    is_even: bool = True
    sup_bound: float | None = None
    tail_exponent: float | None = None
    p_max: float | None = None

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.name}({inner})"

    def support_within(self, L: float) -> bool:
        return self.support[0] >= -L and self.support[1] <= L


@dataclass(frozen=True)
class ProductDensitySpec:
    """Independent product of 1-D catalog densities."""

    factors: tuple[DensitySpec, ...]

    def __post_init__(self):
        if len(self.factors) < 1:
            raise DomainError("product density needs at least one factor")

    @property
    def dim(self) -> int:
        return len(self.factors)

    @property
    def label(self) -> str:
        return " x ".join(f.label for f in self.factors)


# ---------------------------------------------------------------------------
# Catalog entries
# ---------------------------------------------------------------------------

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def normal() -> DensitySpec:
    return DensitySpec(
        name="normal",
        pdf=lambda x: np.exp(-0.5 * np.asarray(x, dtype=float) ** 2) / _SQRT_2PI,
        cf=lambda t: np.exp(-0.5 * np.asarray(t, dtype=float) ** 2),
        sup_bound=1.0 / _SQRT_2PI,
    )


def laplace() -> DensitySpec:
    return DensitySpec(
        name="laplace",
        pdf=lambda x: 0.5 * np.exp(-np.abs(np.asarray(x, dtype=float))),
        cf=lambda t: 1.0 / (1.0 + np.asarray(t, dtype=float) ** 2),
        sup_bound=0.5,
    )


def uniform() -> DensitySpec:
    def _pdf(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= 1.0, 0.5, 0.0)

    def _cf(t):
        t = np.asarray(t, dtype=float)
        return np.sinc(t / np.pi)  # sin(t)/t with cf(0) = 1 exactly

    return DensitySpec(
        name="uniform",
        pdf=_pdf,
        cf=_cf,
        support=(-1.0, 1.0),
        sup_bound=0.5,
    )


def cauchy() -> DensitySpec:
    return DensitySpec(
        name="cauchy",
        pdf=lambda x: 1.0 / (math.pi * (1.0 + np.asarray(x, dtype=float) ** 2)),
        cf=lambda t: np.exp(-np.abs(np.asarray(t, dtype=float))),
        sup_bound=1.0 / math.pi,
        tail_exponent=2.0,
        p_max=3.0,
    )


def student_t_cf(nu: float, t) -> float | np.ndarray:
    """Characteristic function of Student-t(nu) at frequency t.

    phi(t) = K_{nu/2}(sqrt(nu)|t|) (sqrt(nu)|t|)^{nu/2}
             / (Gamma(nu/2) 2^{nu/2 - 1}),  phi(0) = 1.

    Deep in the tail the Bessel factor underflows; those values are
    returned as exact zeros.
    """
    if not (isinstance(nu, (int, float)) and math.isfinite(nu)) or nu <= 0:
        raise DomainError(f"student_t requires nu > 0, got {nu}")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.ones_like(t_arr)
    nz = t_arr != 0.0
    if np.any(nz):
        z = math.sqrt(nu) * np.abs(t_arr[nz])
        half = 0.5 * nu
        log_norm = math.lgamma(half) + (half - 1.0) * math.log(2.0)
        log_phi = _log_bessel_k_vec(half, z) + half * np.log(z) - log_norm
        vals = np.zeros_like(z)
        ok = log_phi > -745.0
        vals[ok] = np.exp(log_phi[ok])
        out[nz] = vals
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(out[0])
    return out


def student_t(nu: float) -> DensitySpec:
    if not (isinstance(nu, (int, float)) and math.isfinite(nu)) or nu <= 0:
        raise DomainError(f"student_t requires nu > 0, got {nu}")
    nu = float(nu)
    norm = math.gamma(0.5 * (nu + 1.0)) / (math.sqrt(nu * math.pi) * math.gamma(0.5 * nu))

    def _pdf(x, _c=norm, _nu=nu):
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore"):
            base = 1.0 + x * x / _nu
            out = _c * base ** (-0.5 * (_nu + 1.0))
        return np.where(np.isfinite(base), out, 0.0)

    return DensitySpec(
        name="student_t",
        params={"nu": nu},
        pdf=_pdf,
        cf=lambda t, _nu=nu: student_t_cf(_nu, t),
        sup_bound=norm,
        tail_exponent=nu + 1.0,
        p_max=2.0 * nu + 1.0,
    )


def catalog() -> list[DensitySpec]:
    """Reference densities: light tails, compact support, heavy tails."""
    return [
        normal(),
        laplace(),
        uniform(),
        cauchy(),
        student_t(0.4),
        student_t(0.5),
        student_t(1.0),
        student_t(3.0),
    ]


_DENSITY_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")
_FACTORIES = {
    "normal": normal,
    "laplace": laplace,
    "uniform": uniform,
    "cauchy": cauchy,
    "student_t": student_t,
}


def get_density(name: str, **params: float) -> DensitySpec:
    if name not in _FACTORIES:
        known = ", ".join(sorted(_FACTORIES))
        raise DomainError(f"unknown density {name!r}; known: {known}")
    try:
        return _FACTORIES[name](**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name!r}: {exc}") from exc


def parse_density(spec: str) -> DensitySpec:
    """Parse 'name' or 'name(key=value,...)', e.g. 'student_t(nu=0.4)'."""
    m = _DENSITY_RE.match(spec)
    if not m:
        raise DomainError(f"cannot parse density spec {spec!r}")
    name, args = m.group(1), m.group(2)
    params: dict[str, float] = {}
    if args:
        for part in args.split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise DomainError(f"density parameter {part!r} must be key=value")
            key, _, val = part.partition("=")
            try:
                params[key.strip()] = float(val)
            except ValueError as exc:
                raise DomainError(f"density parameter {part!r} is not numeric") from exc
    return get_density(name, **params)


# ---------------------------------------------------------------------------
# Weighted moments
# ---------------------------------------------------------------------------

def _check_p_valid(f: DensitySpec, p: float) -> None:
    if f.p_max is not None and p >= f.p_max:
        extra = ""
        if f.name == "student_t":
            extra = f" (threshold 2*nu+1 for nu = {f.params['nu']:g})"
        raise DivergenceError(
            f"int |x|^p f^2 diverges on {f.label}: p must be < {f.p_max:g}{extra}; "
            f"got p = {p:g}",
            threshold=f.p_max,
        )


def weighted_moment(f: DensitySpec, p: float, tol: float | None = None) -> float:
    """int over R of |x|^p f(x)^2 dx."""
    if not (isinstance(p, (int, float)) and math.isfinite(p)) or p < 0:
        raise DomainError(f"moment order must be finite and >= 0, got {p}")
    _check_p_valid(f, p)
    return tail_weighted_moment(f, p, 0.0, tol=tol)


def tail_weighted_moment(f: DensitySpec, p: float, L: float,
                         tol: float | None = None) -> float:
    """int over |x| > L of |x|^p f(x)^2 dx."""
    if not (isinstance(p, (int, float)) and math.isfinite(p)) or p < 0:
        raise DomainError(f"moment order must be finite and >= 0, got {p}")
    if not (isinstance(L, (int, float)) and math.isfinite(L)) or L < 0:
        raise DomainError(f"truncation half-width must be finite and >= 0, got {L}")
    _check_p_valid(f, p)
    tol = default_quad_tol("moment") if tol is None else tol
    lo, hi = f.support

    def g(x):
        # |x|^(p/2) f, squared: avoids overflowing the bare |x|^p factor
        # at the extreme nodes of the unbounded-tail map.
        half = np.abs(x) ** (0.5 * p) * f.pdf(x)
        return half * half

    total = 0.0
    if hi > L:
        total += integrate(g, max(L, lo), hi, 0.5 * tol, target_rel_err=1e-9).value
    if lo < -L:
        total += integrate(g, lo, min(-L, hi), 0.5 * tol, target_rel_err=1e-9).value
    return total


def first_abs_moment(f: DensitySpec, q: float, tol: float | None = None) -> float:
    """m = int |x|^q f(x) dx, the weighted absolute moment of the pdf."""
    if not (isinstance(q, (int, float)) and math.isfinite(q)) or q < 0:
        raise DomainError(f"moment order must be finite and >= 0, got {q}")
    if f.tail_exponent is not None and q >= f.tail_exponent - 1.0:
        raise DivergenceError(
            f"int |x|^q f diverges for q >= {f.tail_exponent - 1.0:g} on {f.label}; "
            f"got q = {q:g}",
            threshold=f.tail_exponent - 1.0,
        )
    tol = default_quad_tol("moment") if tol is None else tol
    lo, hi = f.support
    g = lambda x: np.abs(x) ** q * f.pdf(x)
    return integrate(g, lo, hi, tol, target_rel_err=1e-9, points=[0.0]).value


def l2_norm_sq(f: DensitySpec, tol: float | None = None) -> float:
    """int f^2 over the whole line."""
    return tail_weighted_moment(f, 0.0, 0.0, tol=tol)


def interval_l2_norm_sq(f: DensitySpec, a: float, b: float,
                        tol: float | None = None) -> float:
    """int_a^b f^2."""
    tol = default_quad_tol("moment") if tol is None else tol
    lo, hi = max(a, f.support[0]), min(b, f.support[1])
    if lo >= hi:
        return 0.0
    g = lambda x: f.pdf(x) ** 2
    return integrate(g, lo, hi, tol, target_rel_err=1e-9).value


def tail_mass(f: DensitySpec, L: float, tol: float | None = None) -> float:
    """int over |x| > L of f, the pdf mass outside [-L, L]."""
    tol = default_quad_tol("moment") if tol is None else tol
    lo, hi = f.support
    total = 0.0
    if hi > L:
        total += integrate(f.pdf, max(L, lo), hi, 0.5 * tol, target_rel_err=1e-9).value
    if lo < -L:
        total += integrate(f.pdf, lo, min(-L, hi), 0.5 * tol, target_rel_err=1e-9).value
    return total
