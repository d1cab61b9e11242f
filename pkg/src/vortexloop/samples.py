"""Deterministic fixtures and seeded generators for tests and verify suites.

Everything here is reproducible: generators take a numpy Generator and never
touch global random state.  The analytic fixtures carry their exact invariants
in closed form so downstream checks can pin expected values.
"""

from __future__ import annotations

import numpy as np

from .circle_forms import TWO_PI, CircleForm, find_zeros, partial_vorticities
from .errors import VortexLoopError
from .flow import PlanarBump, PlanarHamiltonian
from .loops import DecoratedLoop, LoopEmbedding


def standard_form(name: str) -> CircleForm:
    """Named analytic densities used across the test corpus."""
    if name == "sin2t":
        return CircleForm.trig(sin=(0.0, 1.0))
    if name == "sin3t":
        return CircleForm.trig(sin=(0.0, 0.0, 1.0))
    if name == "mixed":
        # sin 2t + 0.3 cos t: four zeros, all four partial vorticities distinct
        return CircleForm.trig(cos=(0.3,), sin=(0.0, 1.0))
    if name == "volume":
        return CircleForm.trig(a0=1.0)
    raise ValueError(f"unknown standard form {name!r}")


def symmetric_form(eps: float = 0.05, b: float = 0.2, theta: float = 0.0) -> CircleForm:
    """Morse density with exact two-step symmetry but no rigid symmetry.

    beta(t) = (1 + b sin 2t + eps (3 sin t - 5 sin 3t)) sin 2t, rotated by
    theta.  Zeros stay at the sin 2t zeros, the profile is exactly
    (1 + b pi/4, -(1 - b pi/4), 1 + b pi/4, -(1 - b pi/4)), and for eps != 0
    no rigid rotation preserves the density, so the stabilizer generator is a
    genuinely nonlinear circle map.
    """
    if abs(b) + 8.0 * abs(eps) >= 1.0:
        raise ValueError("amplitude budget violated; zeros would move")

    def fn(t):
        s = t + theta
        amp = 1.0 + b * np.sin(2.0 * s) + eps * (3.0 * np.sin(s) - 5.0 * np.sin(3.0 * s))
        return amp * np.sin(2.0 * s)

    return CircleForm.from_function(fn, degree=5)


def symmetric_form_profile(b: float = 0.2) -> np.ndarray:
    hi = 1.0 + b * np.pi / 4.0
    lo = -(1.0 - b * np.pi / 4.0)
    return np.array([hi, lo, hi, lo])


def near_degenerate_form(flatness: float = 1e-9) -> CircleForm:
    """Morse-in-principle density whose zero at t = 0 is nearly degenerate.

    The factor 1 - (1 - flatness) ((1 + cos t)/2)^8 crushes the derivative at
    t = 0 down to 2 * flatness while leaving the other three zeros healthy,
    so zero finding must reject it under the default Morse tolerance.
    """

    def fn(t):
        window = ((1.0 + np.cos(t)) / 2.0) ** 8
        return np.sin(2.0 * t) * (1.0 - (1.0 - flatness) * window)

    return CircleForm.from_function(fn, degree=10)


def random_morse_form(rng: np.random.Generator, max_degree: int = 3,
                      min_zeros: int = 2) -> CircleForm:
    """Random low-degree trig density with verified Morse zero structure."""
    for _ in range(200):
        a0 = 0.3 * rng.standard_normal()
        cos = 0.8 * rng.standard_normal(max_degree)
        sin = 0.8 * rng.standard_normal(max_degree)
        form = CircleForm.trig(a0=a0, cos=tuple(cos), sin=tuple(sin))
        try:
            zs = find_zeros(form)
            prof = partial_vorticities(form, zs)
        except VortexLoopError:
            continue
        if prof.k >= min_zeros:
            return form
    raise RuntimeError("failed to draw a Morse density; generator misconfigured")


def random_loop(rng: np.random.Generator, n: int = 256) -> LoopEmbedding:
    """Random star-shaped analytic curve, positively oriented and simple."""
    base = rng.uniform(0.8, 1.4)
    center = rng.uniform(-0.5, 0.5, size=2)
    degree = 4
    amps = rng.uniform(-1.0, 1.0, size=2 * degree)
    budget = 0.35 * rng.uniform(0.4, 1.0)
    total = np.sum(np.abs(amps))
    if total > 0.0:
        amps *= budget / total
    t = np.arange(n) * (TWO_PI / n)
    r = np.ones(n)
    for j in range(degree):
        r += amps[2 * j] * np.cos((j + 1) * t) + amps[2 * j + 1] * np.sin((j + 1) * t)
    r *= base
    pts = center + np.column_stack([r * np.cos(t), r * np.sin(t)])
    return LoopEmbedding(pts)


def random_decorated_loop(rng: np.random.Generator, n: int = 256) -> DecoratedLoop:
    return DecoratedLoop(random_loop(rng, n), random_morse_form(rng))


def random_hamiltonian(rng: np.random.Generator, bbox, n_bumps: int = 2,
                       amplitude: float = 0.3) -> PlanarHamiltonian:
    """Random bump Hamiltonian whose support covers the given box."""
    (xlo, xhi), (ylo, yhi) = bbox
    bumps = []
    for _ in range(n_bumps):
        cx = rng.uniform(xlo, xhi)
        cy = rng.uniform(ylo, yhi)
        sigma = rng.uniform(0.6, 1.2)
        amp = rng.uniform(0.3, 1.0) * amplitude * rng.choice([-1.0, 1.0])
        bumps.append(PlanarBump((cx, cy), sigma, amp))
    return PlanarHamiltonian(bumps)


def loop_bbox(*loops, margin: float = 0.5):
    pts = np.vstack([lp.samples for lp in loops])
    return ((float(pts[:, 0].min() - margin), float(pts[:, 0].max() + margin)),
            (float(pts[:, 1].min() - margin), float(pts[:, 1].max() + margin)))


def bump_dictionary(bbox, count: int = 50) -> list[PlanarHamiltonian]:
    """Deterministic dictionary of single-bump test Hamiltonians over a box.

    A near-square grid of narrow bumps plus broad bumps at the box center,
    padded to exactly the requested count.
    """
    (xlo, xhi), (ylo, yhi) = bbox
    side = int(np.floor(np.sqrt(count)))
    xs = np.linspace(xlo, xhi, side)
    ys = np.linspace(ylo, yhi, side)
    pitch = max((xhi - xlo) / max(side - 1, 1), (yhi - ylo) / max(side - 1, 1))
    out = []
    for y in ys:
        for x in xs:
            out.append(PlanarHamiltonian.single((x, y), 0.75 * pitch, 1.0))
    cx, cy = 0.5 * (xlo + xhi), 0.5 * (ylo + yhi)
    scale = 1.0
    while len(out) < count:
        out.append(PlanarHamiltonian.single((cx, cy), scale * max(xhi - xlo, yhi - ylo), 1.0))
        scale *= 0.5
    return out[:count]


class AnalyticDiffeo:
    """Circle diffeomorphism t + c + sum_j (a_j cos jt + b_j sin jt).

    Exact evaluation, derivative, and Newton inverse; used as ground truth
    when checking reconstructed reparametrizations.  The displacement slope
    must stay below 1 so the map is strictly monotone.
    """

    def __init__(self, offset: float, cos_coeffs=(), sin_coeffs=()):
        self._offset = float(offset)
        self._cos = np.asarray(cos_coeffs, dtype=float)
        self._sin = np.asarray(sin_coeffs, dtype=float)
        j_cos = np.arange(1, self._cos.size + 1)
        j_sin = np.arange(1, self._sin.size + 1)
        slope = np.sum(j_cos * np.abs(self._cos)) + np.sum(j_sin * np.abs(self._sin))
        if slope >= 1.0:
            raise ValueError("displacement slope must be below 1")
        self._slope = float(slope)

    def _displacement(self, t):
        out = np.zeros_like(np.asarray(t, dtype=float))
        for j, a in enumerate(self._cos, start=1):
            out += a * np.cos(j * t)
        for j, b in enumerate(self._sin, start=1):
            out += b * np.sin(j * t)
        return out

    def _displacement_derivative(self, t):
        out = np.zeros_like(np.asarray(t, dtype=float))
        for j, a in enumerate(self._cos, start=1):
            out -= a * j * np.sin(j * t)
        for j, b in enumerate(self._sin, start=1):
            out += b * j * np.cos(j * t)
        return out

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return t + self._offset + self._displacement(t)

    def derivative(self, t):
        return 1.0 + self._displacement_derivative(np.asarray(t, dtype=float))

    def inverse_eval(self, s):
        s = np.asarray(s, dtype=float)
        t = s - self._offset
        for _ in range(60):
            resid = self(t) - s
            t = t - resid / self.derivative(t)
            if np.max(np.abs(resid)) < 1e-14:
                break
        return t


def random_monotone_diffeo(rng: np.random.Generator, max_harmonic: int = 3,
                           strength: float = 0.6) -> AnalyticDiffeo:
    cos = rng.uniform(-1.0, 1.0, size=max_harmonic)
    sin = rng.uniform(-1.0, 1.0, size=max_harmonic)
    j = np.arange(1, max_harmonic + 1)
    slope = np.sum(j * (np.abs(cos) + np.abs(sin)))
    target = strength * rng.uniform(0.3, 1.0)
    cos *= target / slope
    sin *= target / slope
    return AnalyticDiffeo(rng.uniform(0.0, TWO_PI), cos, sin)


def pullback_through(diffeo, form: CircleForm, degree: int | None = None) -> CircleForm:
    """Analytic pullback (form o diffeo) * diffeo' as a fresh trig density."""

    def fn(t):
        return form(diffeo(t)) * diffeo.derivative(t)

    return CircleForm.from_function(fn, degree=degree)
