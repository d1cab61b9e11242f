"""Shared oracles for the test suite.

Everything here recomputes expected values by routes independent of the
package internals: dense scanning plus brentq for zeros, QUADPACK for
integrals, analytic derivatives for areas, and plain loops for cyclic
matching.
"""

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

TWO_PI = 2.0 * np.pi


def oracle_zeros(f, n=16384):
    """Zeros of a periodic callable via dense sign scan plus brentq."""
    t = np.linspace(0.0, TWO_PI, n, endpoint=False)
    vals = f(t)
    out = []
    for i in range(n):
        a, b = t[i], t[i] + TWO_PI / n
        fa, fb = vals[i], vals[(i + 1) % n]
        if fa == 0.0:
            out.append(a)
        elif fa * fb < 0.0:
            out.append(brentq(f, a, b, xtol=1e-15, rtol=8.9e-16))
    return np.array(sorted(np.mod(out, TWO_PI)))


def oracle_integral(f, a, b):
    val, _ = quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=400)
    return val


def oracle_profile(f, zeros):
    """Partial vorticities by QUADPACK between consecutive oracle zeros."""
    ext = np.append(zeros, zeros[0] + TWO_PI)
    return np.array([oracle_integral(f, ext[i], ext[i + 1]) for i in range(len(zeros))])


def brute_circular_match(p, q, rel_tol=1e-9):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.size != q.size:
        return []
    tol = rel_tol * np.max(np.abs(p))
    hits = []
    for j in range(p.size):
        if all(abs(p[i] - q[(i + j) % p.size]) <= tol for i in range(p.size)):
            hits.append(j)
    return hits


class StarCurve:
    """Analytic star-shaped curve with exact derivatives.

    radius(t) = base + sum_j a_j cos((j+1)t) + b_j sin((j+1)t), offset by a
    fixed center.  Exposes the map and its parameter derivative so tests can
    compute areas spectrally without touching package quadrature.
    """

    def __init__(self, rng, harmonics=4, budget=0.3):
        self.base = rng.uniform(0.9, 1.3)
        self.center = rng.uniform(-0.4, 0.4, size=2)
        coefs = rng.uniform(-1.0, 1.0, size=2 * harmonics)
        scale = budget * rng.uniform(0.4, 1.0)
        self.coefs = coefs * scale / max(np.sum(np.abs(coefs)), 1e-12)
        self.harmonics = harmonics

    def radius(self, t):
        r = np.full_like(np.asarray(t, dtype=float), self.base)
        for j in range(self.harmonics):
            r = r + self.coefs[2 * j] * np.cos((j + 1) * t)
            r = r + self.coefs[2 * j + 1] * np.sin((j + 1) * t)
        return r

    def radius_prime(self, t):
        r = np.zeros_like(np.asarray(t, dtype=float))
        for j in range(self.harmonics):
            r = r - (j + 1) * self.coefs[2 * j] * np.sin((j + 1) * t)
            r = r + (j + 1) * self.coefs[2 * j + 1] * np.cos((j + 1) * t)
        return r

    def __call__(self, t):
        r = self.radius(t)
        return np.stack([self.center[0] + r * np.cos(t),
                         self.center[1] + r * np.sin(t)], axis=-1)

    def area(self, n=1 << 16):
        # trapezoid rule on a smooth periodic integrand is spectrally exact
        t = np.linspace(0.0, TWO_PI, n, endpoint=False)
        r = self.radius(t)
        rp = self.radius_prime(t)
        x = self.center[0] + r * np.cos(t)
        y = self.center[1] + r * np.sin(t)
        dx = rp * np.cos(t) - r * np.sin(t)
        dy = rp * np.sin(t) + r * np.cos(t)
        return float(np.sum(x * dy - y * dx) * 0.5 * (TWO_PI / n))


def fd_gradient(h, p, step=1e-6):
    p = np.asarray(p, dtype=float)
    out = np.empty(2)
    for i in range(2):
        e = np.zeros(2)
        e[i] = step
        out[i] = (h((p + e)[None, :])[0] - h((p - e)[None, :])[0]) / (2 * step)
    return out
