"""Decaying bound wave via the reduction-of-order (Wronskian) integral.

The second solution is

    u_-(r) = u_+(r) * { FP int_0^r dr'/u_+(r')^2      (r < r_o)
                        FP int_r^inf dr'/u_+(r')^2    (r > r_o) }

The integrand has a double pole at every zero of u_+.  Around each zero z we
subtract the principal part c2/(r'-z)^2 + c1/(r'-z) (Taylor coefficients of
u_+^2 at z), integrate the analytic remainder with Gauss-Legendre panels, and
add the subtracted parts back in closed form.  Using the antiderivative
-c2/(r'-z) + c1*ln|r'-z| straight through the pole is the finite-part
prescription; it reproduces the analytic second solution on both sides.

At interior zeros (ordinary points of the ODE) u_+'' vanishes, so c1 = 0 and
u_- continues smoothly through them.  At r_o the ODE coefficient has a pole,
c1 != 0, and u_- has genuinely opposite one-sided limits -/+ 1/u_+'(r_o); no
continuity repair is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator

from .series import SeriesSolution, interior_zeros, u_plus as _u_plus_series, u_plus_prime
from .units import AtomSpec, StateParams


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing sample radii avoiding all singular neighborhoods."""

    samples: np.ndarray
    exclusion_zones: tuple[tuple[float, float], ...]
    r_max: float

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or len(s) < 2:
            raise ValueError("grid needs at least 2 samples")
        if not np.all(np.diff(s) > 0.0) or s[0] <= 0.0:
            raise ValueError("samples must be strictly increasing and positive")
        for lo, hi in self.exclusion_zones:
            inside = (s > lo) & (s < hi)
            if inside.any():
                raise ValueError(f"samples fall inside exclusion zone ({lo}, {hi})")
        object.__setattr__(self, "samples", s)

    def segments(self) -> list[np.ndarray]:
        """Maximal runs of samples not separated by an exclusion zone."""
        if not self.exclusion_zones:
            return [self.samples]
        cuts = sorted(0.5 * (lo + hi) for lo, hi in self.exclusion_zones)
        idx = np.searchsorted(self.samples, cuts)
        return [seg for seg in np.split(self.samples, idx) if len(seg)]


def make_radial_grid(
    sol: SeriesSolution,
    r_max_factor: float = 3.0,
    samples: int = 1000,
    exclusion: float = 1e-3,
) -> RadialGrid:
    """Uniform grid on (0, r_max_factor*r_o] minus exclusion neighborhoods.

    ``exclusion`` is the half-width in units of r_o applied around r_o and
    around every interior zero of u_+.
    """
    r_o = sol.state.r_o
    r_max = r_max_factor * r_o
    half = exclusion * r_o
    zones = tuple(
        (z - half, z + half) for z in sorted(interior_zeros(sol) + [r_o])
    )
    raw = np.linspace(r_max / samples, r_max, samples)
    keep = np.ones(len(raw), dtype=bool)
    for lo, hi in zones:
        keep &= ~((raw > lo) & (raw < hi))
    return RadialGrid(samples=raw[keep], exclusion_zones=zones, r_max=r_max)


@lru_cache(maxsize=16)
def _gauss_legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


@dataclass(frozen=True)
class _PoleData:
    z: float
    window: float  # half-width of the subtraction window
    c2: float
    c1: float
    d1: float  # u_+'(z)


class WronskianEvaluator:
    """Evaluates u_- for one series solution, with cached panel integrals."""

    def __init__(self, sol: SeriesSolution, quad_order: int = 32):
        self.sol = sol
        self.quad_order = quad_order
        st = sol.state
        self.k_o = st.k_o
        self.r_o = st.r_o
        self._zeros = sorted(interior_zeros(sol) + [st.r_o])
        self._poles = [self._pole_data(z) for z in self._zeros]
        self._r_cut = self._find_cutoff()
        self._breaks = self._build_breakpoints()
        self._panel_cum, self._panel_cum_back = self._integrate_panels()

    # -- local pole structure ------------------------------------------------

    def _pole_data(self, z: float) -> _PoleData:
        st = self.sol.state
        d1 = float(u_plus_prime(z, self.sol))
        if z == self.r_o:
            # u_+'' at r_o from the ODE: the coefficient pole gives
            # u_+'' -> k_o^2 * r_o * u_+'(r_o).
            d2 = 0.5 * st.k_o**2 * st.r_o * d1
        else:
            # ordinary point: u_+'' = -Q*u_+ = 0 at the zero
            d2 = 0.0
        c2 = 1.0 / d1**2
        c1 = -2.0 * d2 / d1**3
        neighbors = [0.0] + [x for x in self._zeros if x != z]
        window = 0.45 * min(abs(z - x) for x in neighbors)
        return _PoleData(z=z, window=window, c2=c2, c1=c1, d1=d1)

    def _find_cutoff(self) -> float:
        """Truncation radius where the integrand is 1e-16 of its value at 2*r_o."""
        ref = self._raw_integrand(np.array([2.0 * self.r_o]))[0]
        step = 0.5 / self.k_o
        r = 2.0 * self.r_o
        while self._raw_integrand(np.array([r]))[0] > 1e-16 * ref:
            r += step
        return r

    # -- integrand -----------------------------------------------------------

    def _u_plus(self, r: np.ndarray) -> np.ndarray:
        return np.asarray(_u_plus_series(r, self.sol))

    def _raw_integrand(self, r: np.ndarray) -> np.ndarray:
        return 1.0 / self._u_plus(r) ** 2

    def _regularized_integrand(self, r: np.ndarray) -> np.ndarray:
        """1/u_+^2 minus the principal parts inside each subtraction window."""
        g = self._raw_integrand(r)
        for p in self._poles:
            s = r - p.z
            inside = np.abs(s) < p.window
            if inside.any():
                si = s[inside]
                g[inside] -= p.c2 / si**2 + p.c1 / si
        return g

    def _singular_between(self, a: float, b: float) -> float:
        """Closed-form integral of the subtracted parts over [a, b].

        Clipped to each subtraction window and differenced pole by pole, so
        poles whose window lies entirely outside [a, b] contribute exactly
        zero (a global antiderivative difference would drown the tiny panel
        sums in rounding noise).
        """
        total = 0.0
        for p in self._poles:
            lo, hi = p.z - p.window, p.z + p.window
            xa = min(max(a, lo), hi)
            xb = min(max(b, lo), hi)
            if xa == xb:
                continue
            sa, sb = xa - p.z, xb - p.z
            # sa/sb == 0 only if an endpoint is exactly a pole; callers reject that
            total += (-p.c2 / sb + p.c1 * math.log(abs(sb))) - (
                -p.c2 / sa + p.c1 * math.log(abs(sa))
            )
        return total

    # -- panel quadrature ----------------------------------------------------

    def _build_breakpoints(self) -> np.ndarray:
        pts = {0.0, self._r_cut}
        for p in self._poles:
            pts.update((p.z - p.window, p.z, p.z + p.window))
        pts = sorted(pts)
        # subdivide long stretches so a single Gauss panel stays accurate
        max_len = 1.0 / self.k_o
        out = [pts[0]]
        for a, b in zip(pts, pts[1:]):
            k = max(1, math.ceil((b - a) / max_len))
            out.extend(a + (b - a) * i / k for i in range(1, k + 1))
        return np.array(out)

    def _panel_integral(self, a: float, b: float) -> float:
        x, w = _gauss_legendre(self.quad_order)
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        return half * float(np.dot(w, self._regularized_integrand(mid + half * x)))

    def _integrate_panels(self) -> tuple[np.ndarray, np.ndarray]:
        """Forward and backward cumulative integrals of the regularized integrand.

        forward[i] = int_0^breaks[i]; backward[i] = int_breaks[i]^r_cut.  The
        backward sums keep deep-tail evaluations free of the catastrophic
        cancellation a forward difference would incur.
        """
        panels = np.array(
            [self._panel_integral(a, b) for a, b in zip(self._breaks, self._breaks[1:])]
        )
        forward = np.concatenate([[0.0], np.cumsum(panels)])
        backward = np.concatenate([np.cumsum(panels[::-1])[::-1], [0.0]])
        return forward, backward

    def _panel_index(self, r: float) -> int:
        i = int(np.searchsorted(self._breaks, r, side="right")) - 1
        return min(max(i, 0), len(self._breaks) - 2)

    def _partial_from_far_end(self, r: float, i: int) -> tuple[float, bool]:
        """Partial-panel integral toward r from the endpoint farther from any pole.

        Quadrature nodes cluster at the partial panel's endpoints, and the
        regularized integrand loses accuracy right at a pole center (u_+ is
        evaluated by cancellation there), so the partial is anchored at
        whichever breakpoint sits farther from the nearest pole.  Returns
        (integral, anchored_at_left).
        """
        a, b = float(self._breaks[i]), float(self._breaks[i + 1])
        da = min(abs(a - p.z) for p in self._poles)
        db = min(abs(b - p.z) for p in self._poles)
        if da >= db:
            return self._panel_integral(a, r), True
        return self._panel_integral(r, b), False

    def _cumulative(self, r: float) -> float:
        """int_0^r of the regularized integrand."""
        i = self._panel_index(r)
        part, from_left = self._partial_from_far_end(r, i)
        if from_left:
            return self._panel_cum[i] + part
        return self._panel_cum[i + 1] - part

    def _cumulative_back(self, r: float) -> float:
        """int_r^r_cut of the regularized integrand (tail-stable form)."""
        i = self._panel_index(r)
        part, from_left = self._partial_from_far_end(r, i)
        if from_left:
            return self._panel_cum_back[i] - part
        return part + self._panel_cum_back[i + 1]

    def _finite_part(self, a: float, b: float) -> float:
        """FP int_a^b dr'/u_+^2 (a <= b), valid across any number of poles."""
        return self._cumulative(b) - self._cumulative(a) + self._singular_between(a, b)

    @property
    def _tail(self) -> float:
        # pure-exponential estimate of the integral beyond the cutoff
        return self._raw_integrand(np.array([self._r_cut]))[0] / (2.0 * self.k_o)

    # -- public surface ------------------------------------------------------

    def nearest_admissible(self, r: float, margin: float = 1e-9) -> float:
        eps = margin * self.r_o
        for z in self._zeros:
            if abs(r - z) < eps:
                # 2*eps so rounding in z + offset cannot land back inside the
                # rejected neighborhood
                return z + math.copysign(2.0 * eps, r - z if r != z else 1.0)
        return r

    def u_minus(self, r: float) -> float:
        """Evaluate the decaying branch at a single admissible radius."""
        if r <= 0.0:
            raise ValueError("r must be positive")
        eps = 1e-9 * self.r_o
        for z in self._zeros:
            if abs(r - z) < eps:
                raise ValueError(
                    f"r={r} is a singular point of the construction; "
                    f"nearest admissible r is {self.nearest_admissible(r)}"
                )
        if r < self.r_o:
            integral = self._finite_part(0.0, r)
        elif r >= self._r_cut:
            integral = float(self._raw_integrand(np.array([r]))[0]) / (2.0 * self.k_o)
        else:
            integral = (
                self._cumulative_back(r)
                + self._singular_between(r, self._r_cut)
                + self._tail
            )
        return float(self._u_plus(np.array([r]))[0]) * integral

    def u_minus_many(self, r: np.ndarray) -> np.ndarray:
        return np.array([self.u_minus(float(x)) for x in r])

    def limits_at_ro(self, eps_factor: float = 1e-4) -> tuple[float, float]:
        """One-sided limits of u_- at r_o by s*log(s)-model extrapolation.

        Near r_o: u_-(r_o + s) = L + a*s*ln|s| + b*s + O(s^2 ln s); three
        sample offsets determine L to ~1e-7 relative.
        """

        def extrapolate(side: int) -> float:
            ss = np.array([1.0, 0.5, 0.25]) * eps_factor * self.r_o * side
            vals = np.array([self.u_minus(self.r_o + s) for s in ss])
            m = np.column_stack([np.ones(3), ss * np.log(np.abs(ss)), ss])
            return float(np.linalg.solve(m, vals)[0])

        return extrapolate(-1), extrapolate(+1)


@lru_cache(maxsize=32)
def _evaluator(sol: SeriesSolution, quad_order: int) -> WronskianEvaluator:
    return WronskianEvaluator(sol, quad_order=quad_order)


def u_minus(r, sol: SeriesSolution, quad_order: int = 32):
    """Decaying branch u_- at r (scalar or array)."""
    ev = _evaluator(sol, quad_order)
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    out = ev.u_minus_many(r_arr)
    return out if np.ndim(r) else float(out[0])


@dataclass
class BoundWave:
    """Sampled bound wave of one stationary state."""

    atom: AtomSpec
    state: StateParams
    grid: RadialGrid
    u_minus: np.ndarray
    u_plus_vals: np.ndarray
    r_vals: np.ndarray  # R = u_- / r
    left_limit_at_ro: float
    right_limit_at_ro: float
    _interp: list = field(default_factory=list, repr=False)

    def segment_interpolators(self):
        """Monotone-safe cubic interpolants of R, one per smooth segment."""
        if not self._interp:
            start = 0
            for seg in self.grid.segments():
                sl = slice(start, start + len(seg))
                self._interp.append(PchipInterpolator(seg, self.r_vals[sl]))
                start += len(seg)
        return self._interp

    def r_of(self, r: float) -> float:
        """Interpolated R at radius r; rejects radii outside the sampled domain."""
        segs = self.grid.segments()
        for seg, itp in zip(segs, self.segment_interpolators()):
            if seg[0] <= r <= seg[-1]:
                return float(itp(r))
        raise ValueError(f"r={r} outside the sampled domain or inside an exclusion zone")


def sample_wave(sol: SeriesSolution, grid: RadialGrid, quad_order: int = 32) -> BoundWave:
    """Sample u_-, u_+ and R = u_-/r on a grid respecting exclusion zones."""
    from .series import u_plus as _u_plus

    ev = _evaluator(sol, quad_order)
    um = ev.u_minus_many(grid.samples)
    up = np.asarray(_u_plus(grid.samples, sol))
    left, right = ev.limits_at_ro()
    return BoundWave(
        atom=sol.atom,
        state=sol.state,
        grid=grid,
        u_minus=um,
        u_plus_vals=up,
        r_vals=um / grid.samples,
        left_limit_at_ro=left,
        right_limit_at_ro=right,
    )


def wave_full(r: float, t: float, wave: BoundWave) -> float:
    """Time-dependent wave V(r, t) = u_-(r) * cos(omega*t) / r."""
    return wave.r_of(r) * math.cos(wave.state.omega * t)


def superpose(waves: list[BoundWave], weights: list[float], r: float, t: float) -> float:
    """Weighted sum of full waves sharing one nucleus."""
    if not waves or len(waves) != len(weights):
        raise ValueError("need equally many waves and weights, at least one each")
    zs = {w.atom.z for w in waves}
    if len(zs) > 1:
        raise ValueError(f"waves mix nuclear charges {sorted(zs)}")
    return sum(c * wave_full(r, t, w) for c, w in zip(weights, waves))


def tail_decay_rate(wave: BoundWave, lo_factor: float = 1.5, hi_factor: float = 3.0) -> float:
    """Least-squares slope of log|u_-| over [lo_factor*r_o, hi_factor*r_o].

    Note: the decaying branch carries an exact algebraic factor
    (r - r_o)^(-n) on top of exp(-k_o*r), so on this near-field window the
    fitted slope is systematically steeper than -k_o.
    """
    r_o = wave.state.r_o
    mask = (wave.grid.samples >= lo_factor * r_o) & (wave.grid.samples <= hi_factor * r_o)
    r = wave.grid.samples[mask]
    y = np.log(np.abs(wave.u_minus[mask]))
    slope = np.polyfit(r, y, 1)[0]
    return float(slope)
