"""Tail cosine energies and moment-based admissibility bounds.

``brute_force_B`` computes, from the pdf alone,

    B(L) = sum_{k<=k_max} (1/L) | int_{|x|>L} f(x) cos(k pi (x+L)/(2L)) dx |^2.

The tail integrals are evaluated blockwise over translates
I_j = [2jL - L, 2jL + L] (and their mirrors).  On a full block the phase
satisfies cos(k pi (x+L)/(2L)) = (-1)^{kj} cos(k pi (u+L)/(2L)) for
x = 2jL + u, so per-node quadrature contributions accumulate into two
parity aggregates and a single mode-sum kernel call covers every k; the
result is numerically identical to summing blocks one at a time.

Far-tail handling: block enumeration stops once the remaining L2 mass is
negligible or a block budget is hit.  The non-oscillatory k = 0 mode then
receives the exact remaining tail mass via unbounded quadrature, while
for k >= 1 the omitted remainder is bounded by integration by parts
(|int_X^inf f cos(w(x+L))| <= 2 f(X)/w for monotone tails) and charged to
``quad_error``.  A literal mass-based stop cannot terminate for tails as
heavy as Student-t(nu <= 1/2).

The bound side (``bound_report``) uses the characteristic-function-free
moment integrals of the densities module, so brute force and bounds share
no computational route.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import (
    box_complement_sum_2d,
    box_complement_sum_3d,
    cosine_mode_sums,
    cosine_mode_sums_parity,
)
from .cos_engine import _composite_gl_nodes
from .densities import (
    DensitySpec,
    ProductDensitySpec,
    first_abs_moment,
    interval_l2_norm_sq,
    l2_norm_sq,
    tail_weighted_moment,
    weighted_moment,
)
from .errors import DegenerateDataError, DivergenceError, DomainError, UnsupportedDimensionError
from .numerics import default_quad_tol, integrate, lattice_sum, zeta

__all__ = [
    "TailEnergyResult",
    "BoundReport",
    "RateFit",
    "brute_force_B",
    "bound_report",
    "brute_force_Bd",
    "bound_report_d",
    "fit_rate",
    "block_mode_sums",
]

_GL_ORDER = 6
_BLOCK_CAP = 1024
_BLOCK_SQ_CUTOFF = 1e-14


def _fmt(v):
    return v


@dataclass(frozen=True)
class TailEnergyResult:
    """Brute-force tail cosine energy with truncation diagnostics."""

    value: float
    k_max: int
    k_tail_estimate: float
    quad_error: float
    blocks_used: int

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value >= 0):
            raise DomainError(f"invalid tail energy {self.value}")
        if self.k_tail_estimate < 0 or self.quad_error < 0:
            raise DomainError("error terms must be >= 0")

    def to_json(self) -> str:
        return json.dumps(
            {
                "value": self.value,
                "k_max": self.k_max,
                "k_tail_estimate": self.k_tail_estimate,
                "quad_error": self.quad_error,
                "blocks_used": self.blocks_used,
            },
            sort_keys=True,
        )


@dataclass(frozen=True)
class BoundReport:
    """Moment-based admissibility bounds and their ingredients."""

    p: float
    zeta_p: float
    main_bound: float
    tail_rate_bound: float
    uniform_bound: float
    moments: dict[str, float]
    corollary_bound: float | None = None
    dim: int = 1
    s_dp: float | None = None
    c_dp: float | None = None
    moment_upper_estimate: bool = False

    def __post_init__(self):
        for name in ("main_bound", "tail_rate_bound", "uniform_bound"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"invalid {name}: {v}")

    def to_json(self) -> str:
        payload = {
            "p": self.p,
            "zeta_p": self.zeta_p,
            "main_bound": self.main_bound,
            "tail_rate_bound": self.tail_rate_bound,
            "uniform_bound": self.uniform_bound,
            "corollary_bound": self.corollary_bound,
            "moments": self.moments,
            "dim": self.dim,
            "s_dp": self.s_dp,
            "c_dp": self.c_dp,
            "moment_upper_estimate": self.moment_upper_estimate,
        }
        return json.dumps(payload, sort_keys=True)


@dataclass(frozen=True)
class RateFit:
    """Least-squares power-law fit of B against L on log-log axes."""

    slope: float
    intercept: float
    r_squared: float
    points: tuple[tuple[float, float], ...]


# ---------------------------------------------------------------------------
# Blockwise tail mode integrals
# ---------------------------------------------------------------------------

def block_mode_sums(f: DensitySpec, lo: float, hi: float, L: float,
                    k_max: int) -> np.ndarray:
    """int over [lo, hi] of f(x) cos(k pi (x+L)/(2L)) dx for k <= k_max.

    Composite GL panels no wider than a quarter period of the top mode.
    Used directly for the blockwise orthogonality diagnostics.
    """
    if hi <= lo:
        return np.zeros(k_max + 1)
    panels = max(int(math.ceil((hi - lo) / (L / max(k_max, 1)))), 8)
    nodes, weights = _composite_gl_nodes(lo, hi, panels, _GL_ORDER)
    wf = weights * f.pdf(nodes)
    phase = math.pi / (2.0 * L)
    return cosine_mode_sums(wf, nodes + L, phase, k_max + 1)


class _TailModes:
    """Tail cosine integrals of one density beyond [-L, L], per mode.

    ``sqrt_cap`` accumulates sum_j sqrt(2 int_{I_j} f^2); by blockwise
    orthogonality and the triangle inequality in l2 over modes,
    sum_k I_k^2 / L <= sqrt_cap^2.  (The naive whole-sum cap
    2 int_{|x|>L} f^2 is false once several blocks contribute: the k = 0
    integrals add coherently across blocks.)
    """

    def __init__(self, I: np.ndarray, quad_err: np.ndarray, blocks: int,
                 tail_sq: float, tail_sq_err: float, sqrt_cap: float):
        self.I = I
        self.quad_err = quad_err
        self.blocks = blocks
        self.tail_sq = tail_sq
        self.tail_sq_err = tail_sq_err
        self.sqrt_cap = sqrt_cap


def _tail_mode_integrals(f: DensitySpec, L: float, k_max: int,
                         block_cap: int = _BLOCK_CAP) -> _TailModes:
    phase = math.pi / (2.0 * L)
    n_modes = k_max + 1
    supp_lo, supp_hi = f.support
    tail_tol = default_quad_tol("tail")

    # Reference tail L2 mass for the block stopping rule and Parseval cap.
    tail_sq = 0.0
    tail_sq_err = 0.0
    for a, b in (( L, supp_hi), (supp_lo, -L)):
        if b > a:
            r = integrate(lambda x: f.pdf(x) ** 2, a, b, 0.5 * tail_tol,
                          target_rel_err=1e-9)
            tail_sq += r.value
            tail_sq_err += r.abs_error_estimate

    panels = max(2 * k_max, 64)
    u_full, w_full = _composite_gl_nodes(-L, L, panels, _GL_ORDER)
    u_half, w_half = _composite_gl_nodes(-L, L, max(panels // 2, 8), _GL_ORDER)

    s_even = np.zeros_like(u_full)
    s_odd = np.zeros_like(u_full)
    s_even_h = np.zeros_like(u_half)
    s_odd_h = np.zeros_like(u_half)
    I_direct = np.zeros(n_modes)
    I_direct_h = np.zeros(n_modes)

    blocks = 0
    sqrt_cap = 0.0
    remainders: list[tuple[float, float, int]] = []  # (X, orientation, unused)

    for sign in (+1.0, -1.0):
        if sign > 0 and supp_hi <= L:
            continue
        if sign < 0 and supp_lo >= -L:
            continue
        exhausted = False
        last_j = 0
        for j in range(1, block_cap + 1):
            c = sign * 2.0 * j * L
            blo, bhi = c - L, c + L
            cl, ch = max(blo, supp_lo), min(bhi, supp_hi)
            if cl >= ch:
                exhausted = True  # past the support
                break
            parity = 1.0 if j % 2 == 0 else -1.0
            if cl == blo and ch == bhi:
                fx = f.pdf(c + u_full)
                g = w_full * fx
                s_even += g
                s_odd += parity * g
                gh = w_half * f.pdf(c + u_half)
                s_even_h += gh
                s_odd_h += parity * gh
                block_sq = float(g @ fx)
            else:
                # Partial overlap with the support: integrate the clipped
                # range directly (no parity shortcut available).
                I_direct += block_mode_sums(f, cl, ch, L, k_max)
                pnl = max(int(math.ceil((ch - cl) / (L / max(k_max, 1)))) // 2, 8)
                nodes_h, wts_h = _composite_gl_nodes(cl, ch, pnl, _GL_ORDER)
                I_direct_h += cosine_mode_sums(
                    wts_h * f.pdf(nodes_h), nodes_h + L, phase, n_modes)
                fx = f.pdf(np.linspace(cl, ch, 64))
                block_sq = float(np.mean(fx * fx) * (ch - cl))
            blocks += 1
            last_j = j
            sqrt_cap += math.sqrt(2.0 * max(block_sq, 0.0))
            if block_sq <= _BLOCK_SQ_CUTOFF * max(tail_sq, 1e-300):
                break
        if not exhausted and last_j > 0:
            remainders.append((sign * (2.0 * last_j * L + L), sign, 0))

    I = cosine_mode_sums_parity(s_even, s_odd, u_full + L, phase, n_modes) + I_direct
    I_h = cosine_mode_sums_parity(s_even_h, s_odd_h, u_half + L, phase, n_modes) + I_direct_h
    quad_err = np.abs(I - I_h)

    # Far tail beyond the last block: exact for k = 0, integration-by-parts
    # bound for the oscillatory modes (monotone tails: every catalog
    # density decreases beyond its mode).
    ks = np.arange(n_modes, dtype=float)
    for X, sign, _ in remainders:
        if sign > 0:
            rem = integrate(f.pdf, X, supp_hi, 0.01 * tail_tol, target_rel_err=1e-9)
        else:
            rem = integrate(f.pdf, supp_lo, X, 0.01 * tail_tol, target_rel_err=1e-9)
        f_at_x = float(f.pdf(np.array([X]))[0])
        I[0] += rem.value
        quad_err[0] += rem.abs_error_estimate
        with np.errstate(divide="ignore", invalid="ignore"):
            ibp = 2.0 * f_at_x / (ks * phase)
        quad_err[1:] += ibp[1:]  # k = 0 is handled exactly above
        # Far blocks' contribution to the triangle-inequality cap:
        # sum_j sqrt(2 int f^2) <= 2 sqrt(L) f(X) + rem / sqrt(L).
        sqrt_cap += 2.0 * math.sqrt(L) * f_at_x + rem.value / math.sqrt(L)

    return _TailModes(I, quad_err, blocks, tail_sq, tail_sq_err, sqrt_cap)


def _k_tail_estimate(terms: np.ndarray, value: float, cap: float) -> float:
    """Omitted-mode estimate for the sum over k > k_max.

    When the last 10% of modes contribute less than 1e-6 of the running
    sum, extrapolate that increment (factor 10 covers per-term decay as
    slow as 1/k^2); otherwise fall back on the triangle-inequality cap
    minus the summed portion, clamped at zero.
    """
    k_max = terms.size - 1
    cut = max(int(math.floor(0.9 * k_max)), 1)
    last_decade = float(np.sum(terms[cut:]))
    if value > 0 and last_decade < 1e-6 * value:
        extrapolated = 10.0 * last_decade
    else:
        extrapolated = math.inf
    return float(min(extrapolated, max(cap, 0.0)))


def brute_force_B(f: DensitySpec, L: float, k_max: int,
                  block_cap: int = _BLOCK_CAP) -> TailEnergyResult:
    """Tail cosine energy B(L) summed over modes k = 0 .. k_max."""
    if not (isinstance(L, (int, float)) and math.isfinite(L)) or L <= 0:
        raise DomainError(f"truncation half-width must be finite and > 0, got {L}")
    if k_max < 16:
        raise DomainError(f"k_max must be >= 16, got {k_max}")
    if f.support_within(L):
        return TailEnergyResult(0.0, k_max, 0.0, 0.0, 0)

    core = _tail_mode_integrals(f, L, k_max, block_cap)
    terms = core.I * core.I / L
    value = float(np.sum(terms))

    # d(B)/d(I_k) = 2 I_k / L, plus the second-order term in the per-mode
    # quadrature error bound.
    quad_error = float(
        np.sum((2.0 * np.abs(core.I) + core.quad_err) * core.quad_err) / L
    )

    cap = core.sqrt_cap**2 - value
    k_tail = _k_tail_estimate(terms, value, cap)
    return TailEnergyResult(
        value=value,
        k_max=k_max,
        k_tail_estimate=k_tail,
        quad_error=quad_error,
        blocks_used=core.blocks,
    )


# ---------------------------------------------------------------------------
# One-dimensional bounds
# ---------------------------------------------------------------------------

def bound_report(f: DensitySpec, L: float, p: float) -> BoundReport:
    """Moment-based bounds on B(L) at weight order p.

    main:      2 zeta(p) (L^-p int_{|x|>L} |x|^p f^2 + int_{|x|>L} f^2)
    tail rate: 4 zeta(p) L^-p int_{|x|>L} |x|^p f^2
    uniform:   4 zeta(p) L^-p int_R |x|^p f^2
    corollary: 4 zeta(p) M m L^-p for bounded f with m = int |x|^p f < inf
    """
    if not (isinstance(L, (int, float)) and math.isfinite(L)) or L <= 0:
        raise DomainError(f"truncation half-width must be finite and > 0, got {L}")
    if not (isinstance(p, (int, float)) and math.isfinite(p)) or p <= 1.0:
        raise DomainError(f"moment bound requires p > 1, got p = {p}")
    zp = zeta(p)
    mom_full = weighted_moment(f, p)
    mom_tail = tail_weighted_moment(f, p, L)
    tail_plain = tail_weighted_moment(f, 0.0, L)
    lp = L ** (-p)
    main = 2.0 * zp * (lp * mom_tail + tail_plain)
    tail_rate = 4.0 * zp * lp * mom_tail
    uniform_b = 4.0 * zp * lp * mom_full

    corollary = None
    if f.sup_bound is not None:
        valid_q = f.tail_exponent is None or p < f.tail_exponent - 1.0
        if valid_q:
            m1 = first_abs_moment(f, p)
            corollary = 4.0 * zp * f.sup_bound * m1 * lp

    return BoundReport(
        p=p,
        zeta_p=zp,
        main_bound=main,
        tail_rate_bound=tail_rate,
        uniform_bound=uniform_b,
        corollary_bound=corollary,
        moments={"full": mom_full, "tail": mom_tail, "tail_plain": tail_plain},
    )


# ---------------------------------------------------------------------------
# d-dimensional tensor machinery (product densities, d <= 3)
# ---------------------------------------------------------------------------

def _axis_arrays(f: DensitySpec, L: float, k_max: int, block_cap: int):
    """Per-axis full-line (a) and inside (b) cosine integrals plus errors."""
    n_modes = k_max + 1
    phase = math.pi / (2.0 * L)
    lo = max(-L, f.support[0])
    hi = min(L, f.support[1])
    panels = max(2 * k_max, 64)
    nodes, wts = _composite_gl_nodes(lo, hi, panels, _GL_ORDER)
    b = cosine_mode_sums(wts * f.pdf(nodes), nodes + L, phase, n_modes)
    nodes_h, wts_h = _composite_gl_nodes(lo, hi, max(panels // 2, 8), _GL_ORDER)
    b_h = cosine_mode_sums(wts_h * f.pdf(nodes_h), nodes_h + L, phase, n_modes)
    b_err = np.abs(b - b_h)

    if f.support_within(L):
        tail_I = np.zeros(n_modes)
        tail_err = np.zeros(n_modes)
        blocks = 0
        tail_cap = 0.0
    else:
        core = _tail_mode_integrals(f, L, k_max, block_cap)
        tail_I, tail_err, blocks, tail_cap = (
            core.I, core.quad_err, core.blocks, core.sqrt_cap)
    a = b + tail_I
    a_err = b_err + tail_err
    inside_sq = interval_l2_norm_sq(f, -L, L)
    # l2-over-modes caps, normalized by sqrt(L): blockwise orthogonality
    # bounds the inside vector, the 1-D triangle cap bounds the tail one.
    inside_cap = math.sqrt(2.0 * max(inside_sq, 0.0))
    return a, b, a_err, b_err, blocks, tail_cap, inside_sq, inside_cap


def _validate_product(fd: ProductDensitySpec, dims_max: int = 3) -> int:
    if not isinstance(fd, ProductDensitySpec):
        raise DomainError("d-dimensional operations require a ProductDensitySpec")
    d = fd.dim
    if d > dims_max:
        raise UnsupportedDimensionError(
            f"tensor brute force supports d <= {dims_max}, got d = {d}")
    return d


def brute_force_Bd(fd: ProductDensitySpec, L, k_max_per_axis: int,
                   block_cap: int = _BLOCK_CAP) -> TailEnergyResult:
    """Tail cosine energy over the complement of a box, for products.

    Each multi-index integral over the box complement factorizes by
    inclusion-exclusion into per-axis full-line and inside-interval 1-D
    cosine integrals; the sum over the k grid is taken directly.
    Per-axis half-widths may differ (rectangular truncation).
    """
    d = _validate_product(fd)
    Ls = [float(v) for v in (L if isinstance(L, (list, tuple, np.ndarray)) else [L] * d)]
    if len(Ls) != d:
        raise DomainError(f"expected {d} half-widths, got {len(Ls)}")
    for v in Ls:
        if not math.isfinite(v) or v <= 0:
            raise DomainError(f"half-widths must be finite and > 0, got {v}")
    if k_max_per_axis < 8:
        raise DomainError(f"k_max_per_axis must be >= 8, got {k_max_per_axis}")

    if all(f.support_within(l) for f, l in zip(fd.factors, Ls)):
        return TailEnergyResult(0.0, k_max_per_axis, 0.0, 0.0, 0)

    axes = [_axis_arrays(f, l, k_max_per_axis, block_cap)
            for f, l in zip(fd.factors, Ls)]
    a = [ax[0] for ax in axes]
    b = [ax[1] for ax in axes]
    blocks = sum(ax[4] for ax in axes)
    vol = float(np.prod(Ls))

    def _raw_sum(arrays_a, arrays_b):
        if d == 1:
            diff = arrays_a[0] - arrays_b[0]
            return float(diff @ diff)
        if d == 2:
            return box_complement_sum_2d(arrays_a[0], arrays_a[1],
                                         arrays_b[0], arrays_b[1])
        return box_complement_sum_3d(arrays_a[0], arrays_a[1], arrays_a[2],
                                     arrays_b[0], arrays_b[1], arrays_b[2])

    value = _raw_sum(a, b) / vol

    # Triangle-inequality cap: expanding prod(a) - prod(b) over subsets of
    # axes carrying a tail factor, tensor l2 norms factorize per axis, so
    # sqrt(sum_k I_k^2 / vol) <= sum over nonempty S of
    # prod_{i in S} tail_cap_i * prod_{i not in S} inside_cap_i.
    tail_caps = [ax[5] for ax in axes]
    inside_caps = [ax[7] for ax in axes]
    cap_root = 0.0
    for mask in range(1, 1 << d):
        term = 1.0
        for i in range(d):
            term *= tail_caps[i] if (mask >> i) & 1 else inside_caps[i]
        cap_root += term
    cap = cap_root**2 - value

    # Boundary-shell stagnation from prefix sums.
    cut = max(int(math.floor(0.9 * k_max_per_axis)), 1)
    inner = _raw_sum([v[: cut + 1] for v in a], [v[: cut + 1] for v in b]) / vol
    shell = max(value - inner, 0.0)
    extrapolated = 10.0 * shell if (value > 0 and shell < 1e-6 * value) else math.inf
    k_tail = float(min(extrapolated, max(cap, 0.0)))

    # Crude but honest first-order error propagation through the tensor
    # products: |delta I_k| <= sum_i err_i(k_i) prod_{j!=i} max(|a_j|,|b_j|).
    amp = [float(max(np.max(np.abs(ai)), np.max(np.abs(bi))))
           for ai, bi in zip(a, b)]
    n_modes = k_max_per_axis + 1
    delta = 0.0
    for i in range(d):
        err_i = float(np.max(axes[i][2] + axes[i][3]))
        others = math.prod(amp[j] for j in range(d) if j != i)
        delta += err_i * others
    sum_abs_sq = _raw_sum(a, b)
    sum_abs = math.sqrt(sum_abs_sq * (n_modes ** d))
    quad_error = (2.0 * delta * sum_abs + (n_modes ** d) * delta * delta) / vol

    return TailEnergyResult(
        value=value,
        k_max=k_max_per_axis,
        k_tail_estimate=k_tail,
        quad_error=float(quad_error),
        blocks_used=blocks,
    )


def bound_report_d(fd: ProductDensitySpec, L: float, p: float) -> BoundReport:
    """Weighted d-dimensional bound with constant
    C_{d,p} = 2^(d-1) (1 + d^(p/2)) S_{d,p}.

    The d-dimensional weighted tail moment is bounded above through
    |x|^p <= d^(p/2-1) sum_i |x_i|^p, reducing every term to 1-D
    integrals over the axis factorization; the reported moment is an
    upper estimate for d >= 2 (exact at d = 1).

    Validity gates conservatively per factor: each factor must satisfy
    p < p_max of that factor, since a single heavy axis already makes
    the d-dimensional moment diverge along its axis strip.
    """
    d = _validate_product(fd)
    if not (isinstance(L, (int, float)) and math.isfinite(L)) or L <= 0:
        raise DomainError(f"truncation half-width must be finite and > 0, got {L}")
    if not (isinstance(p, (int, float)) and math.isfinite(p)) or p <= d:
        raise DomainError(
            f"d-dimensional moment bound requires p > d; got p = {p}, d = {d}")
    for f in fd.factors:
        if f.p_max is not None and p >= f.p_max:
            raise DivergenceError(
                f"axis factor {f.label} makes the d-dimensional moment diverge "
                f"for p >= {f.p_max:g}; got p = {p:g}",
                threshold=f.p_max,
            )

    target = 1e-13 if d == 1 else 1e-8
    s_dp = lattice_sum(d, p, target).value
    c_dp = 2.0 ** (d - 1) * (1.0 + d ** (0.5 * p)) * s_dp

    full_sq = [l2_norm_sq(f) for f in fd.factors]
    inside_sq = [interval_l2_norm_sq(f, -L, L) for f in fd.factors]
    mom_full_ax = [weighted_moment(f, p) for f in fd.factors]
    mom_inside_ax = [mom_full_ax[i] - tail_weighted_moment(fd.factors[i], p, L)
                     for i in range(d)]

    scale = d ** (0.5 * p - 1.0)
    full_est = 0.0
    tail_est = 0.0
    for i in range(d):
        others_full = math.prod(full_sq[j] for j in range(d) if j != i)
        others_inside = math.prod(inside_sq[j] for j in range(d) if j != i)
        full_est += scale * mom_full_ax[i] * others_full
        tail_est += scale * (mom_full_ax[i] * others_full
                             - mom_inside_ax[i] * others_inside)
    tail_est = max(tail_est, 0.0)

    lp = L ** (-p)
    bound_tail = c_dp * lp * tail_est
    bound_full = c_dp * lp * full_est
    tail_plain = max(float(np.prod(full_sq) - np.prod(inside_sq)), 0.0)

    return BoundReport(
        p=p,
        zeta_p=zeta(p) if p > 1 else math.nan,
        main_bound=bound_tail,
        tail_rate_bound=bound_tail,
        uniform_bound=bound_full,
        corollary_bound=None,
        moments={"full": full_est, "tail": tail_est, "tail_plain": tail_plain},
        dim=d,
        s_dp=s_dp,
        c_dp=c_dp,
        moment_upper_estimate=d > 1,
    )


# ---------------------------------------------------------------------------
# Decay-rate fitting
# ---------------------------------------------------------------------------

def fit_rate(points) -> RateFit:
    """Least-squares line through (ln L, ln B); the slope estimates the
    decay exponent of B(L)."""
    pts = [(float(L), float(B)) for L, B in points]
    if len(pts) < 3:
        raise DomainError(f"rate fit needs >= 3 points, got {len(pts)}")
    Ls = [L for L, _ in pts]
    if any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise DomainError("L values must be strictly increasing")
    if any(B <= 0 for _, B in pts):
        raise DegenerateDataError("rate fit requires B > 0 (log undefined)")
    x = np.log([L for L, _ in pts])
    y = np.log([B for _, B in pts])
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    slope = sxy / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return RateFit(
        slope=slope,
        intercept=intercept,
        r_squared=min(r2, 1.0),
        points=tuple(zip(x.tolist(), y.tolist())),
    )
