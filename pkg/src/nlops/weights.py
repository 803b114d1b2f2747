"""Radial weight profiles and their Fourier multipliers.

A weight is a nonnegative radial profile rhohat on (0, infinity); its mass is
the full-space integral int_0^inf n omega_n r^(n-1) rhohat(r) dr.  The module
computes masses and tails by composite Gauss-Legendre panels (with a
power-law substitution taming integrable singularities at the origin), the
oscillatory Bessel multiplier

    mu_hat(xi) = |xi|^(-n/2) int_0^inf n r^(n/2-1) rhohat(r) J_{n/2}(2 pi r |xi|) dr,

and the superposition measure n omega_n rhohat(r) r^(n-1) dr that expresses
the radial operator as an average of sphere-scale operators.

Shipped presets: ``fractional`` (indicator of the unit ball over |x|^(n-s)),
``gaussian`` (|x|^2 times a normal density), ``annulus`` (uniform on
[eps, 2*eps], n=1), and a smooth compactly supported ``bump``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import gamma, pi, sqrt
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaincc

from nlops.bessel import bessel_j, unit_ball_volume
from nlops.quadrature import graded_boundaries, panel_rule

#: Unbounded supports are truncated where the declared analytic tail falls
#: below this absolute threshold.
TAIL_CUTOFF = 1e-10

#: Default Gauss-Legendre nodes per quadrature panel.
PANEL_NODES = 16


class WeightError(ValueError):
    """Raised for non-integrable profiles or missing tail certificates."""


@dataclass(frozen=True)
class RadialWeight:
    """Radial weight with cached mass.

    Attributes
    ----------
    n : int
        Ambient dimension.
    profile : callable
        Vectorized map r -> rhohat(r) for r > 0 (ndarray in, ndarray out).
    support_radius : float or None
        Finite support bound, or None for unbounded support (then
        ``tail_bound`` must be supplied).
    singularity_exponent : float
        Exponent a with rhohat(r) ~ r^a as r -> 0; must satisfy a > -n.
    breakpoints : tuple of float
        Radii where the profile is non-smooth; quadrature panels split there.
    tail_bound : callable or None
        Analytic map delta -> integral of the weight outside B_delta.
    profile_mp : callable or None
        mpmath-compatible profile for the high-precision multiplier path.
    """

    n: int
    profile: Callable[[np.ndarray], np.ndarray]
    support_radius: Optional[float]
    singularity_exponent: float = 0.0
    breakpoints: tuple[float, ...] = ()
    tail_bound: Optional[Callable[[float], float]] = None
    profile_mp: Optional[Callable] = None
    name: str = field(default="custom", compare=False)
    params: dict = field(default_factory=dict, compare=False)
    mass: float = field(init=False, compare=False)

    def __post_init__(self):
        if self.singularity_exponent <= -self.n:
            raise WeightError(
                f"singularity exponent {self.singularity_exponent} is not integrable "
                f"in dimension {self.n} (need a > -n)"
            )
        if self.support_radius is None and self.tail_bound is None:
            raise WeightError(
                "unbounded support requires an analytic tail bound; "
                "custom profiles must declare a support radius"
            )
        object.__setattr__(self, "mass", _radial_integral(self, 0.0))
        if not np.isfinite(self.mass) or self.mass <= 0.0:
            raise WeightError(f"weight mass must be finite and positive, got {self.mass}")


def truncation_radius(w: RadialWeight, threshold: float = TAIL_CUTOFF) -> float:
    """Radius beyond which the weight is ignored (declared tail < threshold).

    Compact supports return the support radius; unbounded supports bisect
    the analytic tail bound.
    """
    if w.support_radius is not None:
        return float(w.support_radius)
    lo, hi = 1e-6, 1.0
    while w.tail_bound(hi) >= threshold:
        hi *= 2.0
        if hi > 1e9:
            raise WeightError("tail bound does not reach the truncation threshold")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if w.tail_bound(mid) < threshold:
            hi = mid
        else:
            lo = mid
    return hi


_truncation_radius = truncation_radius


def _substitution_beta(w: RadialWeight) -> float:
    """Power-law substitution r = u^beta regularizing the radial integrand.

    For a singular profile rhohat ~ r^a with a < 0, the radial integrand
    n omega_n r^(n-1+a) transforms to ~ u^(beta*(n+a)-1).  Choosing
    beta = k/(n+a) with the integer k = ceil(1+|a|) makes that exponent the
    nonnegative integer k-1, so pure power profiles become polynomials in u
    and Gauss-Legendre panels integrate them exactly.
    """
    a = w.singularity_exponent
    if a >= 0.0:
        return 1.0
    k = int(np.ceil(1.0 + abs(a)))
    return k / (w.n + a)


def _segment_boundaries(w: RadialWeight, lo: float, hi: float) -> list[float]:
    pts = [lo] + [b for b in sorted(w.breakpoints) if lo < b < hi] + [hi]
    return pts


def _radial_integral(w: RadialWeight, delta: float, r_max: Optional[float] = None) -> float:
    """int_delta^R n omega_n r^(n-1) rhohat(r) dr with singularity handling."""
    nodes, weights = superposition_measure(w, delta=delta, r_max=r_max)
    return float(np.sum(weights))


def superposition_measure(
    w: RadialWeight,
    boundaries: Optional[np.ndarray] = None,
    *,
    delta: float = 0.0,
    r_max: Optional[float] = None,
    nodes_per_panel: int = PANEL_NODES,
) -> tuple[np.ndarray, np.ndarray]:
    """Discrete measure approximating n omega_n rhohat(r) r^(n-1) dr.

    Returns (radii, weights); the weights sum to the weight's mass on
    (delta, R] to within the quadrature tolerance (1e-8 relative for the
    shipped presets).  Explicit panel ``boundaries`` override the default
    graded construction, which splits at profile breakpoints and applies the
    origin substitution when the profile is singular.
    """
    R = _truncation_radius(w) if r_max is None else float(r_max)
    if delta >= R:
        return np.array([]), np.array([])
    front = unit_ball_volume(w.n) * w.n

    if boundaries is not None:
        r_nodes, r_weights = panel_rule(np.asarray(boundaries, float), nodes_per_panel)
        vals = front * r_nodes ** (w.n - 1) * w.profile(r_nodes)
        return r_nodes, r_weights * vals

    segments = _segment_boundaries(w, max(delta, 0.0), R)
    all_nodes = []
    all_weights = []
    beta = _substitution_beta(w)
    for seg_lo, seg_hi in zip(segments[:-1], segments[1:]):
        if seg_lo == 0.0 and beta != 1.0:
            # substituted panel block: r = u^beta turns the integrand into
            # ~ u^|a| times a smooth factor; grade toward u = 0 anyway.
            u_hi = seg_hi ** (1.0 / beta)
            u_bounds = graded_boundaries(0.0, u_hi, 24, power=2.0)
            u_nodes, u_weights = panel_rule(u_bounds, nodes_per_panel)
            r_nodes = u_nodes**beta
            jac = beta * u_nodes ** (beta - 1.0)
            vals = front * r_nodes ** (w.n - 1) * w.profile(r_nodes)
            all_nodes.append(r_nodes)
            all_weights.append(u_weights * jac * vals)
        else:
            count = max(8, int(np.ceil(32.0 * (seg_hi - seg_lo) / R)))
            seg_bounds = np.linspace(seg_lo, seg_hi, count + 1)
            r_nodes, r_weights = panel_rule(seg_bounds, nodes_per_panel)
            vals = front * r_nodes ** (w.n - 1) * w.profile(r_nodes)
            all_nodes.append(r_nodes)
            all_weights.append(r_weights * vals)
    return np.concatenate(all_nodes), np.concatenate(all_weights)


def mass(w: RadialWeight) -> float:
    """Total mass, i.e. the L1 norm of the weight on R^n (cached at init)."""
    return w.mass


def tail(w: RadialWeight, delta: float) -> float:
    """Mass outside the ball of radius delta (same quadrature, restricted)."""
    if delta <= 0:
        raise ValueError("tail requires delta > 0")
    return _radial_integral(w, delta)


def normalize(w: RadialWeight) -> RadialWeight:
    """Scale the profile to unit mass; idempotent up to rounding."""
    m = w.mass
    if not np.isfinite(m) or m <= 0.0:
        raise WeightError("cannot normalize a weight of zero or infinite mass")
    prof = w.profile
    new_tail = None if w.tail_bound is None else (lambda d, _t=w.tail_bound, _m=m: _t(d) / _m)
    new_mp = None
    if w.profile_mp is not None:
        import mpmath as mp

        new_mp = lambda r, _p=w.profile_mp, _m=m: _p(r) / mp.mpf(_m)
    return replace(
        w,
        profile=lambda r, _p=prof, _m=m: _p(r) / _m,
        tail_bound=new_tail,
        profile_mp=new_mp,
        name=f"{w.name}/normalized",
    )


# ---------------------------------------------------------------------------
# Fourier multiplier


def _mu_hat_quad(w: RadialWeight, xi: float, nodes_per_panel: int) -> float:
    """Panel quadrature of the oscillatory multiplier integral at xi > 0."""
    R = _truncation_radius(w)
    half = w.n / 2.0
    beta = _substitution_beta(w)
    osc_width = 1.0 / (4.0 * xi)

    def integrand(r):
        return w.n * r ** (half - 1.0) * w.profile(r) * bessel_j(half, 2.0 * pi * r * xi)

    total = 0.0
    # near-origin block: substituted if singular, capped so the phase stays
    # below ~pi/2 across it
    r_sing = min(R, osc_width) if beta != 1.0 else 0.0
    if beta != 1.0:
        keep = [b for b in sorted(w.breakpoints) if b < r_sing]
        r_sing = keep[0] if keep else r_sing
        u_hi = r_sing ** (1.0 / beta)
        u_nodes, u_weights = panel_rule(graded_boundaries(0.0, u_hi, 24, 2.0), nodes_per_panel)
        r_nodes = u_nodes**beta
        jac = beta * u_nodes ** (beta - 1.0)
        total += float(np.sum(u_weights * jac * integrand(r_nodes)))
    if r_sing < R:
        for seg_lo, seg_hi in zip(*(lambda s: (s[:-1], s[1:]))(_segment_boundaries(w, r_sing, R))):
            width = seg_hi - seg_lo
            count = max(4, int(np.ceil(width / min(osc_width, max(R / 32.0, 1e-12)))))
            bounds = np.linspace(seg_lo, seg_hi, count + 1)
            r_nodes, r_weights = panel_rule(bounds, nodes_per_panel)
            total += float(np.sum(r_weights * integrand(r_nodes)))
    return total / xi**half


def mu_hat(w: RadialWeight, xi_norm: float) -> float:
    """Multiplier of the radial operator at frequency magnitude xi_norm.

    At zero frequency the value is the weight's mass (exactly 1 for
    normalized weights, up to the 1e-8 mass quadrature tolerance).  The
    quadrature uses panels no wider than 1/(4 xi) so each panel sees at most
    a quarter period of the Bessel oscillation.
    """
    if xi_norm < 0:
        raise ValueError("frequency magnitude must be nonnegative")
    if xi_norm == 0.0:
        return w.mass
    return _mu_hat_quad(w, float(xi_norm), PANEL_NODES)


def mu_hat_scan(w: RadialWeight, xi_grid) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate mu_hat on a grid, with a per-point error estimate.

    The estimate is the difference between the default rule and a lower
    order rule on the same panels (plus an ulp-level floor).
    """
    xi_grid = np.asarray(xi_grid, dtype=float)
    vals = np.empty_like(xi_grid)
    errs = np.empty_like(xi_grid)
    for i, xi in enumerate(xi_grid):
        if xi == 0.0:
            vals[i] = w.mass
            errs[i] = 1e-8 * abs(vals[i])
        else:
            vals[i] = _mu_hat_quad(w, xi, PANEL_NODES)
            coarse = _mu_hat_quad(w, xi, PANEL_NODES // 2)
            errs[i] = abs(vals[i] - coarse) + 1e-15
    return vals, errs


def mu_hat_highprec(w: RadialWeight, xi_norm: float, dps: int = 35):
    """Arbitrary-precision multiplier evaluation (n=1 profiles only).

    Uses the half-order reduction of the defining integral,
    mu_hat(xi) = (1/(pi xi)) int_0^inf rhohat(r) sin(2 pi r xi) / r dr,
    integrated with mpmath between consecutive zeros of the sine factor.
    Needed where the double-precision oscillatory quadrature cannot resolve
    exponentially small values (deep Gaussian tails).  Returns an mpmath
    float.
    """
    import mpmath as mp

    if w.n != 1:
        raise ValueError("high-precision multiplier path is implemented for n=1 only")
    if w.profile_mp is None:
        raise WeightError("weight does not declare an mpmath-compatible profile")
    if xi_norm <= 0:
        raise ValueError("high-precision path requires xi_norm > 0")
    with mp.workdps(dps):
        x = mp.mpf(xi_norm)
        R = mp.mpf(_truncation_radius(w))
        if w.support_radius is None:
            R = R + 12  # generous pad; the mp path targets far smaller tails
        f = lambda r: w.profile_mp(r) * mp.sin(2 * mp.pi * r * x) / r
        zeros = [mp.mpf(k) / (2 * x) for k in range(1, int(2 * x * R) + 1)]
        points = [mp.mpf(0)] + zeros[::3] + [R]
        val = mp.quad(f, points, maxdegree=6)
        return val / (mp.pi * x)


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of a multiplier sign scan over a frequency grid."""

    min_value: float
    argmin_xi: float
    sign_changes: tuple[tuple[float, float], ...]
    verdict: str


def positivity_scan(w: RadialWeight, xi_grid, highprec: bool = False) -> PositivityReport:
    """Scan mu_hat over a sorted grid and report minimum and sign changes.

    A sign change between adjacent grid points is a candidate zero of the
    multiplier (relevant to kernel equivalence); the verdict is grid-relative.
    ``highprec`` routes each evaluation through the arbitrary-precision path,
    which resolves multiplier values far below the double-precision
    quadrature noise floor (deep Gaussian tails).
    """
    xi_grid = np.asarray(xi_grid, dtype=float)
    if xi_grid.size == 0:
        raise ValueError("positivity scan requires a nonempty grid")
    if np.any(np.diff(xi_grid) < 0):
        raise ValueError("positivity scan requires a sorted grid")
    if highprec:
        vals = np.array([float(mu_hat_highprec(w, xi)) if xi > 0 else w.mass for xi in xi_grid])
    else:
        vals, _ = mu_hat_scan(w, xi_grid)
    changes = []
    for i in range(len(vals) - 1):
        if vals[i] * vals[i + 1] < 0.0:
            changes.append((float(xi_grid[i]), float(xi_grid[i + 1])))
    imin = int(np.argmin(vals))
    verdict = "positivity certificate on grid" if not changes and vals[imin] > 0 else "zero crossing detected"
    return PositivityReport(
        min_value=float(vals[imin]),
        argmin_xi=float(xi_grid[imin]),
        sign_changes=tuple(changes),
        verdict=verdict,
    )


# ---------------------------------------------------------------------------
# Presets


def fractional(n: int, s: float) -> RadialWeight:
    """Indicator of the unit ball over |x|^(n-s); mass n*omega_n/s."""
    if not 0.0 < s < 1.0:
        raise ValueError("fractional exponent s must lie in (0, 1)")

    def prof(r):
        r = np.asarray(r, float)
        return np.where(r <= 1.0, np.power(np.maximum(r, 1e-300), s - n), 0.0)

    return RadialWeight(
        n=n,
        profile=prof,
        support_radius=1.0,
        singularity_exponent=s - n,
        breakpoints=(1.0,),
        name="fractional",
        params={"s": s},
    )


def gaussian_modification(n: int, sigma: float) -> RadialWeight:
    """|x|^2 G_sigma(|x|) with G_sigma the 1D normal density (variance sigma^2).

    Unbounded support with an exact incomplete-gamma tail; in n=1 the mass is
    sigma^2 exactly.  Declares an mpmath profile for the high-precision
    multiplier path.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    norm_c = 1.0 / (sigma * sqrt(2.0 * pi))

    def prof(r):
        r = np.asarray(r, float)
        return r**2 * norm_c * np.exp(-(r**2) / (2.0 * sigma**2))

    def tail_exact(delta):
        # int_delta^inf n omega_n r^(n+1) G_sigma(r) dr via the upper
        # incomplete gamma function (exact, not just a bound)
        shape = n / 2.0 + 1.0
        return (
            n
            * unit_ball_volume(n)
            * norm_c
            * sigma ** (n + 2)
            * 2.0 ** (n / 2.0)
            * gammaincc(shape, delta**2 / (2.0 * sigma**2))
            * gamma(shape)
        )

    def prof_mp(r):
        import mpmath as mp

        s = mp.mpf(sigma)
        return r**2 * mp.e ** (-(r**2) / (2 * s**2)) / (s * mp.sqrt(2 * mp.pi))

    return RadialWeight(
        n=n,
        profile=prof,
        support_radius=None,
        singularity_exponent=2.0,
        tail_bound=tail_exact,
        profile_mp=prof_mp,
        name="gaussian",
        params={"sigma": sigma},
    )


def annulus(eps: float) -> RadialWeight:
    """Uniform probability weight on the annulus eps <= |t| <= 2*eps (n=1)."""
    if eps <= 0:
        raise ValueError("eps must be positive")

    def prof(r):
        r = np.asarray(r, float)
        return np.where((r >= eps) & (r <= 2.0 * eps), 1.0 / (2.0 * eps), 0.0)

    return RadialWeight(
        n=1,
        profile=prof,
        support_radius=2.0 * eps,
        singularity_exponent=0.0,
        breakpoints=(eps, 2.0 * eps),
        name="annulus",
        params={"eps": eps},
    )


def bump(n: int, radius: float = 0.3) -> RadialWeight:
    """Smooth compactly supported profile exp(-1/(1-(r/R)^2)) on [0, R)."""
    if radius <= 0:
        raise ValueError("radius must be positive")

    def prof(r):
        r = np.asarray(r, float)
        z = (r / radius) ** 2
        out = np.zeros_like(r)
        inside = z < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - z[inside]))
        return out

    return RadialWeight(
        n=n,
        profile=prof,
        support_radius=radius,
        singularity_exponent=0.0,
        name="bump",
        params={"radius": radius},
    )


def annulus_family() -> "ConcentratingFamily":
    """The family eps -> uniform annulus weight (already probability mass)."""
    return ConcentratingFamily(generator=annulus, name="annulus")


def rescaled_family(base: RadialWeight) -> "ConcentratingFamily":
    """Family eps -> eps^(-n) rhohat(r/eps) built from a normalized base weight."""
    base = normalize(base)

    def gen(eps: float) -> RadialWeight:
        if eps <= 0:
            raise ValueError("eps must be positive")
        prof = lambda r, _e=eps: base.profile(np.asarray(r, float) / _e) / _e**base.n
        new_tail = None
        if base.tail_bound is not None:
            new_tail = lambda d, _e=eps: base.tail_bound(d / _e)
        return RadialWeight(
            n=base.n,
            profile=prof,
            support_radius=None if base.support_radius is None else base.support_radius * eps,
            singularity_exponent=base.singularity_exponent,
            breakpoints=tuple(b * eps for b in base.breakpoints),
            tail_bound=new_tail,
            name=f"{base.name}@{eps:g}",
            params=dict(base.params, eps=eps),
        )

    return ConcentratingFamily(generator=gen, name=f"rescaled-{base.name}")


@dataclass(frozen=True)
class ConcentratingFamily:
    """Family eps -> probability weight concentrating at the origin.

    Members must have unit mass and tails vanishing as eps -> 0; both
    properties are exercised by the test suite on a grid of (eps, delta).
    """

    generator: Callable[[float], RadialWeight]
    name: str = "family"

    def __call__(self, eps: float) -> RadialWeight:
        return self.generator(eps)


WEIGHT_PRESETS = {
    "fractional": lambda n=1, s=0.5: fractional(n, s),
    "gaussian": lambda n=1, sigma=1.0: gaussian_modification(n, sigma),
    "annulus": lambda n=1, eps=0.1: annulus(eps),
    "bump": bump,
}
