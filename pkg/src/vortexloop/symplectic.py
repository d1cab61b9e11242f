"""Symplectic structure on area-constrained loops and the momentum map.

Tangent data lives on the loop's native parameter grid; full-period integrals
of smooth periodic integrands use the trapezoidal rule there, which is
spectrally accurate.  Derivative checks (closedness, exactness) use central
finite differences on constant vector-field extensions, whose brackets
vanish, so no connection is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import svdvals

from .circle_forms import CircleForm, FloatArray
from .errors import ConstraintViolation
from .loops import DecoratedLoop, LoopEmbedding
from .quadrature import TWO_PI, periodic_trapezoid

AREA_CONSTRAINT_TOL = 1e-10
PROJECTION_LIMIT = 1e-6
FD_STEP = 1e-4
DEFAULT_PAIRING_RESOLUTION = 4096


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _as_vectors(u, n: int) -> FloatArray:
    vec = u.vectors if isinstance(u, TangentVector) else np.asarray(u, dtype=float)
    if vec.shape != (n, 2):
        raise ValueError(f"expected an ({n}, 2) vector field, got {vec.shape}")
    return vec


def _constraint_gradient(embedding: LoopEmbedding) -> FloatArray:
    d = embedding.derivative(embedding.grid)
    return np.column_stack([d[:, 1], -d[:, 0]])


def area_constraint_residual(embedding: LoopEmbedding, u) -> float:
    """Relative size of the area-variation integral for the field ``u``."""
    vec = _as_vectors(u, embedding.size)
    g = _constraint_gradient(embedding)
    raw = periodic_trapezoid(np.sum(vec * g, axis=1))
    scale = np.sqrt(periodic_trapezoid(np.sum(vec * vec, axis=1))
                    * periodic_trapezoid(np.sum(g * g, axis=1)))
    return abs(raw) / max(scale, 1e-300)


def project_area_constraint(embedding: LoopEmbedding, u) -> FloatArray:
    """Project a vector field onto the area-preserving constraint."""
    vec = _as_vectors(u, embedding.size).copy()
    g = _constraint_gradient(embedding)
    raw = periodic_trapezoid(np.sum(vec * g, axis=1))
    gg = periodic_trapezoid(np.sum(g * g, axis=1))
    return vec - (raw / gg) * g


def _enforced(embedding: LoopEmbedding, u) -> FloatArray:
    """Apply the evaluation-time constraint policy: project small violations,
    reject anything beyond the projection limit."""
    vec = _as_vectors(u, embedding.size)
    violation = area_constraint_residual(embedding, vec)
    if violation > PROJECTION_LIMIT:
        raise ConstraintViolation(
            f"area constraint violated at {violation:.3e}, beyond {PROJECTION_LIMIT:g}")
    if violation == 0.0:
        return vec
    return project_area_constraint(embedding, vec)


class TangentVector:
    """Per-sample variation field along a loop embedding."""

    def __init__(self, embedding: LoopEmbedding, vectors):
        vec = np.asarray(vectors, dtype=float)
        if vec.shape != (embedding.size, 2):
            raise ValueError("vectors must match the embedding's sample count")
        if not np.all(np.isfinite(vec)):
            raise ValueError("tangent vectors must be finite")
        violation = area_constraint_residual(embedding, vec)
        if violation > AREA_CONSTRAINT_TOL:
            raise ConstraintViolation(
                f"area constraint violated at {violation:.3e}; "
                "project the field before wrapping it")
        self._embedding = embedding
        self._vectors = vec.copy()

    @classmethod
    def from_split(cls, embedding: LoopEmbedding, rho, lam, *,
                   project: bool = False) -> "TangentVector":
        """Assemble ``rho * T + lam * N`` from frame coefficients.

        ``rho`` must have zero mean on the parameter circle; ``lam`` is
        projected onto the area constraint when ``project`` is set, otherwise
        the constraint is validated as-is.
        """
        grid = embedding.grid
        rho_v = np.asarray(rho(grid) if callable(rho) else rho, dtype=float)
        lam_v = np.asarray(lam(grid) if callable(lam) else lam, dtype=float)
        if rho_v.shape != grid.shape or lam_v.shape != grid.shape:
            raise ValueError("rho and lam must give one value per sample")
        scale = max(float(np.max(np.abs(rho_v))), 1.0)
        if abs(float(np.mean(rho_v))) > AREA_CONSTRAINT_TOL * scale:
            raise ConstraintViolation("tangential coefficient rho must have zero mean")
        tangent, normal = embedding.frame(grid)
        vec = rho_v[:, None] * tangent + lam_v[:, None] * normal
        if project:
            vec = project_area_constraint(embedding, vec)
        return cls(embedding, vec)

    @property
    def embedding(self) -> LoopEmbedding:
        return self._embedding

    @property
    def vectors(self) -> FloatArray:
        return self._vectors.copy()


def tangent_decompose(embedding: LoopEmbedding, u) -> tuple[FloatArray, FloatArray]:
    """Frame coefficients (rho, lam) of ``u`` in the unit tangent/normal frame.

    The reconstruction ``rho * T + lam * N`` reproduces ``u`` exactly at the
    samples.  Raises ConstraintViolation when ``u`` breaks the area
    constraint.  The mean of ``rho`` is returned untouched; it is the
    caller's business whether to quotient it away.
    """
    vec = _as_vectors(u, embedding.size)
    violation = area_constraint_residual(embedding, vec)
    if violation > AREA_CONSTRAINT_TOL:
        raise ConstraintViolation(f"area constraint violated at {violation:.3e}")
    tangent, normal = embedding.frame(embedding.grid)
    rho = np.sum(vec * tangent, axis=1)
    lam = np.sum(vec * normal, axis=1)
    return rho, lam


def pairing(rho, lam, form: CircleForm, resolution: int = DEFAULT_PAIRING_RESOLUTION) -> float:
    """Weighted pairing ``integral(rho * lam * form)`` over one period.

    ``rho`` and ``lam`` may be callables or arrays sampled uniformly; ``rho``
    is expected to have zero mean (not enforced here).
    """
    if callable(rho) or callable(lam):
        grid = np.linspace(0.0, TWO_PI, resolution, endpoint=False)
        rho_v = np.asarray(rho(grid) if callable(rho) else np.resize(rho, resolution), dtype=float)
        lam_v = np.asarray(lam(grid) if callable(lam) else np.resize(lam, resolution), dtype=float)
    else:
        rho_v = np.asarray(rho, dtype=float)
        lam_v = np.asarray(lam, dtype=float)
        if rho_v.shape != lam_v.shape:
            raise ValueError("sampled rho and lam must share a grid")
        grid = np.linspace(0.0, TWO_PI, rho_v.size, endpoint=False)
    return periodic_trapezoid(rho_v * lam_v * np.asarray(form(grid), dtype=float))


def pairing_matrix(form: CircleForm, n: int = 16,
                   resolution: int | None = None) -> tuple[FloatArray, float]:
    """Gram matrix of the pairing over truncated Fourier bases.

    Rows run over the zero-mean modes cos(jt), sin(jt) for j = 1..n; columns
    over the modes of degree below n including the constant.  All basis
    functions are L2-normalized.  Returns the matrix and its smallest
    singular value; a near-zero value signals a direction annihilated by the
    pairing, which is exactly what happens on the constant for a density
    without zeros.
    """
    if resolution is None:
        resolution = max(4096, 16 * n)
    grid = np.linspace(0.0, TWO_PI, resolution, endpoint=False)
    beta = np.asarray(form(grid), dtype=float)
    rho_basis = []
    for j in range(1, n + 1):
        rho_basis.append(np.cos(j * grid) / np.sqrt(np.pi))
        rho_basis.append(np.sin(j * grid) / np.sqrt(np.pi))
    lam_basis = [np.full(resolution, 1.0 / np.sqrt(TWO_PI))]
    for j in range(1, n):
        lam_basis.append(np.cos(j * grid) / np.sqrt(np.pi))
        lam_basis.append(np.sin(j * grid) / np.sqrt(np.pi))
    rho_arr = np.array(rho_basis)
    lam_arr = np.array(lam_basis)
    weighted = lam_arr * beta
    matrix = (rho_arr @ weighted.T) * (TWO_PI / resolution)
    sigma = svdvals(matrix)
    return matrix, float(sigma[-1])


def omega_eval(embedding: LoopEmbedding, u, v, form: CircleForm) -> float:
    """The two-form ``integral(omega(u, v) * form)`` at the loop."""
    uu = _enforced(embedding, u)
    vv = _enforced(embedding, v)
    beta = np.asarray(form(embedding.grid), dtype=float)
    return periodic_trapezoid(_cross(uu, vv) * beta)


@dataclass(frozen=True)
class PointedDecoration:
    """Weights attached to marked parameter values (evaluation couplings)."""

    weights: FloatArray
    marked: FloatArray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        m = np.asarray(self.marked, dtype=float)
        if w.ndim != 1 or w.shape != m.shape:
            raise ValueError("weights and marked parameters must be 1-d and match")
        if np.any(np.diff(m) <= 0.0) or np.any(m < 0.0) or np.any(m >= TWO_PI):
            raise ValueError("marked parameters must be strictly increasing in [0, 2*pi)")
        object.__setattr__(self, "weights", w.copy())
        object.__setattr__(self, "marked", m.copy())


def _interp_field(embedding: LoopEmbedding, vec: FloatArray, at: FloatArray) -> FloatArray:
    grid = np.linspace(0.0, TWO_PI, embedding.size + 1)
    closed = np.vstack([vec, vec[:1]])
    sx = CubicSpline(grid, closed[:, 0], bc_type="periodic")
    sy = CubicSpline(grid, closed[:, 1], bc_type="periodic")
    at = np.mod(at, TWO_PI)
    return np.column_stack([sx(at), sy(at)])


def pointed_omega_eval(embedding: LoopEmbedding, u, v, form: CircleForm,
                       pointed: PointedDecoration) -> float:
    """Two-form plus weighted evaluation couplings at the marked parameters."""
    uu = _enforced(embedding, u)
    vv = _enforced(embedding, v)
    beta = np.asarray(form(embedding.grid), dtype=float)
    base = periodic_trapezoid(_cross(uu, vv) * beta)
    u_at = _interp_field(embedding, uu, pointed.marked)
    v_at = _interp_field(embedding, vv, pointed.marked)
    return base + float(np.sum(pointed.weights * _cross(u_at, v_at)))


def primitive_one_form_eval(embedding: LoopEmbedding, u, form: CircleForm) -> float:
    """The primitive ``alpha(u) = integral(nu_f(u) * form)`` with
    ``nu = (x dy - y dx) / 2``."""
    uu = _enforced(embedding, u)
    beta = np.asarray(form(embedding.grid), dtype=float)
    return periodic_trapezoid(0.5 * _cross(embedding.samples, uu) * beta)


def momentum_map_eval(embedding: LoopEmbedding, h, form: CircleForm) -> float:
    """Momentum pairing ``integral((h o f) * form)`` against a test Hamiltonian."""
    vals = np.asarray(h(embedding.samples), dtype=float)
    beta = np.asarray(form(embedding.grid), dtype=float)
    return periodic_trapezoid(vals * beta)


def momentum_separation(first: DecoratedLoop, second: DecoratedLoop, dictionary) -> float:
    """Largest momentum discrepancy over a dictionary of test Hamiltonians."""
    best = 0.0
    for h in dictionary:
        a = momentum_map_eval(first.embedding, h, first.decoration)
        b = momentum_map_eval(second.embedding, h, second.decoration)
        best = max(best, abs(a - b))
    return best


# -- finite-difference checks of the structural identities -------------------


def _raw_omega(u: FloatArray, v: FloatArray, beta: FloatArray) -> float:
    return periodic_trapezoid(_cross(u, v) * beta)


def _raw_primitive(samples: FloatArray, u: FloatArray, beta: FloatArray) -> float:
    return periodic_trapezoid(0.5 * _cross(samples, u) * beta)


def _omega_at(samples: FloatArray, u: FloatArray, v: FloatArray,
              beta: FloatArray) -> float:
    # the coefficients of the two-form are independent of the basepoint in
    # these linear coordinates; the samples argument fixes the evaluation
    # point of the constant extensions
    del samples
    return periodic_trapezoid(_cross(u, v) * beta)


def closedness_residual(embedding: LoopEmbedding, u, v, w, form: CircleForm,
                        step: float = FD_STEP) -> float:
    """Central-difference exterior derivative of the two-form on constant
    extensions of three constrained fields.

    Constant extensions have vanishing brackets, so the exterior derivative
    reduces to the cyclic sum of directional derivatives of ``omega_f(a, b)``
    along the third field.
    """
    n = embedding.size
    fields = [_as_vectors(x, n) for x in (u, v, w)]
    beta = np.asarray(form(embedding.grid), dtype=float)
    base = embedding.samples
    total = 0.0
    sign = 1.0
    for i in range(3):
        a, b = (x for j, x in enumerate(fields) if j != i)
        x = fields[i]
        plus = _omega_at(base + step * x, a, b, beta)
        minus = _omega_at(base - step * x, a, b, beta)
        total += sign * (plus - minus) / (2.0 * step)
        sign = -sign
    return abs(total)


def exactness_residual(embedding: LoopEmbedding, u, v, form: CircleForm,
                       step: float = FD_STEP) -> float:
    """Residual of ``d(primitive) == Omega`` via central differences on
    constant extensions."""
    n = embedding.size
    uu = _as_vectors(u, n)
    vv = _as_vectors(v, n)
    beta = np.asarray(form(embedding.grid), dtype=float)
    base = embedding.samples
    d_alpha_v = (_raw_primitive(base + step * uu, vv, beta)
                 - _raw_primitive(base - step * uu, vv, beta)) / (2.0 * step)
    d_alpha_u = (_raw_primitive(base + step * vv, uu, beta)
                 - _raw_primitive(base - step * vv, uu, beta)) / (2.0 * step)
    return abs((d_alpha_v - d_alpha_u) - _raw_omega(uu, vv, beta))
