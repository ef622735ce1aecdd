"""Theta functions with characteristics on the Siegel upper half space.

theta_m(z, tau) = sum_{n in Z^g} exp(pi i [(n+eps/2)^T tau (n+eps/2)
                                           + 2 (n+eps/2)^T (z+delta/2)])

Evaluation truncates the lattice sum to the box max_i |n_i| <= R and
certifies the discarded mass: a term in the sup-norm shell s has modulus
at most exp(-pi lambda_min (s-1/2)^2 + 2 pi (s-1/2) |Im z|), so

    tail(R) = sum_{s >= R} [(2s+1)^g - (2s-1)^g]
              * exp(-pi lambda_min (s-1/2)^2 + 2 pi (s-1/2) |Im z|)

bounds the truncation error of the box sum (the shell count starts at the
outermost included shell, a deliberate overcount that keeps the bound
elementary).  lambda_min is the smallest eigenvalue of Im tau, computed by
cyclic Jacobi rotations with a Gershgorin pre-check.

Arithmetic is double precision; the tail bound covers truncation only,
not the ~1e-15-per-term floating point floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chars import Characteristic, all_characteristics
from .errors import CapExceededError
from .symplectic import SymplecticInteger

__all__ = [
    "SiegelPoint",
    "ThetaValue",
    "validate_siegel",
    "min_im_eigenvalue",
    "jacobi_smallest_eigenvalue",
    "gershgorin_lower_bound",
    "truncation_tail_bound",
    "truncation_radius",
    "theta_function",
    "theta_constant",
    "even_theta_constants",
    "block_diag",
    "siegel_action",
    "random_siegel_point",
    "generic_siegel_point",
    "point_to_json",
    "point_from_json",
]

DEFAULT_RADIUS_CAP = 64
IM_Z_CAP = 10.0
_DET_FLOOR = 1e-8
_CHUNK_POINTS = 1 << 21


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """A g x g complex symmetric matrix with positive definite imaginary
    part, with lambda_min(Im tau) certified at construction."""

    genus: int
    tau: np.ndarray
    lambda_min: float

    def __repr__(self):
        return f"SiegelPoint(genus={self.genus}, lambda_min={self.lambda_min:.6g})"


@dataclass(frozen=True)
class ThetaValue:
    """A theta value with its certified truncation error bound and the
    box radius used."""

    value: complex
    tail_bound: float
    radius: int


def gershgorin_lower_bound(matrix: np.ndarray) -> float:
    """min_i (a_ii - sum_{j != i} |a_ij|); positive certifies PD cheaply."""
    a = np.asarray(matrix, dtype=float)
    off = np.abs(a).sum(axis=1) - np.abs(np.diag(a))
    return float((np.diag(a) - off).min())


def jacobi_smallest_eigenvalue(matrix: np.ndarray, tol: float = 1e-13, max_sweeps: int = 60) -> float:
    """Smallest eigenvalue of a real symmetric matrix by cyclic Jacobi
    rotations; intended for small dense matrices (g <= 8)."""
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    a = (a + a.T) / 2
    if n == 1:
        return float(a[0, 0])
    scale = float(np.linalg.norm(a)) or 1.0
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float((a * a).sum() - (np.diag(a) ** 2).sum())))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a = (a + a.T) / 2
    return float(np.diag(a).min())


def validate_siegel(matrix, *, sym_tol: float = 1e-12) -> SiegelPoint:
    """Symmetrize and certify a matrix as a point of the Siegel upper half
    space; rejects asymmetry beyond sym_tol and non-positive-definite
    imaginary part (reporting lambda_min)."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = float(np.abs(m - m.T).max())
    if asym > sym_tol:
        raise ValueError(f"matrix not symmetric: max |tau - tau^T| = {asym:.3e} > {sym_tol:.1e}")
    tau = (m + m.T) / 2
    imag = tau.imag.copy()
    # Pre-check: lambda_min <= min diagonal entry, so a non-positive
    # diagonal rejects before any iteration.
    diag_min = float(np.diag(imag).min())
    if diag_min <= 0:
        raise ValueError(f"Im tau not positive definite: lambda_min <= {diag_min:.3e}")
    lam = jacobi_smallest_eigenvalue(imag)
    if lam <= 0:
        raise ValueError(f"Im tau not positive definite: lambda_min = {lam:.3e}")
    tau.setflags(write=False)
    return SiegelPoint(tau.shape[0], tau, lam)


def min_im_eigenvalue(point: SiegelPoint) -> float:
    """lambda_min(Im tau), as certified at construction."""
    return point.lambda_min


def truncation_tail_bound(g: int, lambda_min: float, radius: int, z_im_norm: float = 0.0) -> float:
    """Certified bound on the lattice mass outside the box |n|_inf < radius.

    Valid while (radius - 1/2) lambda_min >= |Im z|, where the shell bound
    is monotone; a small pad makes the float result a true upper bound.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if lambda_min <= 0:
        raise ValueError("lambda_min must be positive")
    if (radius - 0.5) * lambda_min < z_im_norm:
        raise ValueError("radius too small for this |Im z|; shell bound not monotone yet")
    total = 0.0
    s = radius
    while True:
        shell = (2 * s + 1) ** g - (2 * s - 1) ** g
        t = s - 0.5
        term = shell * math.exp(-math.pi * lambda_min * t * t + 2 * math.pi * t * z_im_norm)
        total += term
        if term == 0.0 or term < total * 1e-17:
            break
        s += 1
        if s > radius + 100000:
            break
    return total * (1 + 1e-12) + 1e-320


def truncation_radius(
    point: SiegelPoint,
    target: float,
    z_im_norm: float = 0.0,
    radius_cap: int = DEFAULT_RADIUS_CAP,
) -> int:
    """Smallest box radius whose certified tail bound is below target."""
    if target <= 0:
        raise ValueError(f"target must be positive, got {target}")
    lam = point.lambda_min
    radius = max(1, math.ceil(z_im_norm / lam + 0.5 + 1e-9))
    while True:
        if radius > radius_cap:
            raise CapExceededError(
                f"truncation radius cap {radius_cap} exceeded for target {target:.1e} "
                f"at lambda_min {lam:.3e}"
            )
        if truncation_tail_bound(point.genus, lam, radius, z_im_norm) < target:
            return radius
        radius += 1


def _lattice_slabs(g: int, radius: int, limit: int = _CHUNK_POINTS):
    """Yield the integer box [-radius, radius]^g as (n_pts, g) arrays in
    lexicographic order, slabbed along leading axes to bound memory."""
    if (2 * radius + 1) ** g <= limit or g == 1:
        axes = [np.arange(-radius, radius + 1)] * g
        yield np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, g)
        return
    for n1 in range(-radius, radius + 1):
        for sub in _lattice_slabs(g - 1, radius, limit):
            lead = np.full((sub.shape[0], 1), n1)
            yield np.concatenate([lead, sub], axis=1)


def theta_function(
    m: Characteristic,
    z,
    point: SiegelPoint,
    target: float,
    radius_cap: int = DEFAULT_RADIUS_CAP,
) -> ThetaValue:
    """theta_m(z, tau) with certified truncation error below target."""
    g = point.genus
    if m.genus != g:
        raise ValueError(f"genus mismatch: characteristic {m.genus}, point {g}")
    zv = np.asarray(z, dtype=complex).reshape(-1)
    if zv.shape != (g,):
        raise ValueError(f"z must have length {g}")
    z_im = float(np.linalg.norm(zv.imag))
    if z_im > IM_Z_CAP:
        raise ValueError(f"|Im z| = {z_im:.3g} exceeds cap {IM_Z_CAP}")
    radius = truncation_radius(point, target, z_im, radius_cap)
    tail = truncation_tail_bound(g, point.lambda_min, radius, z_im)
    eps = np.array(m.eps, dtype=float) / 2
    shift = zv + np.array(m.delta, dtype=float) / 2
    value = 0j
    for grid in _lattice_slabs(g, radius):
        p = grid + eps
        quad = ((p @ point.tau) * p).sum(axis=1)
        lin = p @ shift
        value += complex(np.exp(1j * np.pi * (quad + 2 * lin)).sum())
    return ThetaValue(value, tail, radius)


def theta_constant(
    m: Characteristic,
    point: SiegelPoint,
    target: float,
    radius_cap: int = DEFAULT_RADIUS_CAP,
) -> ThetaValue:
    """theta_m(0, tau); identically zero (within the bound) for odd m."""
    return theta_function(m, np.zeros(point.genus), point, target, radius_cap)


def even_theta_constants(
    point: SiegelPoint,
    target: float,
    radius_cap: int = DEFAULT_RADIUS_CAP,
) -> dict[Characteristic, ThetaValue]:
    """All even theta constants at one point, sharing a single lattice pass
    per eps class.

    For fixed eps the delta dependence is a root-of-unity weight:
    exp(pi i p^T delta) = (-1)^{n . delta} i^{eps . delta}, so the box sum
    collapses onto the 2^g residue classes of n mod 2.
    """
    g = point.genus
    radius = truncation_radius(point, target, 0.0, radius_cap)
    tail = truncation_tail_bound(g, point.lambda_min, radius)
    evens = all_characteristics(g, "even")
    by_eps: dict[tuple[int, ...], list[Characteristic]] = {}
    for m in evens:
        by_eps.setdefault(m.eps, []).append(m)

    coord_bit = 1 << np.arange(g)
    n_classes = 1 << g
    partials = {eps: np.zeros(n_classes, dtype=complex) for eps in by_eps}
    for grid in _lattice_slabs(g, radius):
        cls = (grid % 2) @ coord_bit
        masks = [cls == r for r in range(n_classes)]
        for eps in by_eps:
            p = grid + np.array(eps, dtype=float) / 2
            quad = ((p @ point.tau) * p).sum(axis=1)
            w = np.exp(1j * np.pi * quad)
            partials[eps] += np.array([w[mask].sum() for mask in masks])

    out: dict[Characteristic, ThetaValue] = {}
    for m in evens:
        dmask = sum(1 << j for j, bit in enumerate(m.delta) if bit)
        signs = np.array([1 - 2 * ((r & dmask).bit_count() % 2) for r in range(n_classes)])
        phase = 1j ** (sum(e * d for e, d in zip(m.eps, m.delta)) % 4)
        value = phase * (signs * partials[m.eps]).sum()
        out[m] = ThetaValue(complex(value), tail, radius)
    return out


def block_diag(point1: SiegelPoint, point2: SiegelPoint) -> SiegelPoint:
    """Block-diagonal join; the genera add and lambda_min is the minimum
    of the factors'."""
    g1, g2 = point1.genus, point2.genus
    tau = np.zeros((g1 + g2, g1 + g2), dtype=complex)
    tau[:g1, :g1] = point1.tau
    tau[g1:, g1:] = point2.tau
    return validate_siegel(tau)


def siegel_action(gamma: SymplecticInteger, point: SiegelPoint, *, sym_tol: float = 1e-9) -> SiegelPoint:
    """gamma o tau = (A tau + B)(C tau + D)^{-1}, re-certified.

    Raises ValueError when |det(C tau + D)| < 1e-8 (near-singular).
    """
    if gamma.genus != point.genus:
        raise ValueError(f"genus mismatch: gamma has {gamma.genus}, point has {point.genus}")
    a = np.array(gamma.a, dtype=complex)
    b = np.array(gamma.b, dtype=complex)
    c = np.array(gamma.c, dtype=complex)
    d = np.array(gamma.d, dtype=complex)
    denom = c @ point.tau + d
    det = complex(np.linalg.det(denom))
    if abs(det) < _DET_FLOOR:
        raise ValueError(f"C tau + D near-singular: |det| = {abs(det):.3e}")
    numer = a @ point.tau + b
    # tau' = numer @ denom^{-1}, via a solve on the transposed system
    tau_new = np.linalg.solve(denom.T, numer.T).T
    return validate_siegel(tau_new, sym_tol=sym_tol)


def random_siegel_point(g: int, rng, re_scale: float = 0.4, im_spread: float = 0.5):
    """A seeded random point with Re uniform and Im = 1_g plus a symmetric
    perturbation scaled to keep lambda_min >= 1 - im_spread."""
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    w = rng.uniform(-1.0, 1.0, size=(g, g))
    re = re_scale * (w + w.T) / 2
    v = rng.uniform(-1.0, 1.0, size=(g, g))
    im = np.eye(g) + (im_spread / g) * (v + v.T) / 2
    return validate_siegel(re + 1j * im)


def generic_siegel_point(g: int, rng):
    """A seeded random point kept away from the special loci where the
    stratifying forms degenerate.

    Every Re entry is drawn with modulus in [0.22, 0.28]: period matrices
    with Re tau near 0 or near half-integers carry a real structure on
    which the Schottky form is empirically vanishingly small, so generic
    draws stay near quarter-integers.  Im is a Haar-rotated spectrum
    confined to [0.55, 0.9], well conditioned, away from block-diagonal
    (decomposable) shapes and -- since cusp forms decay exponentially in
    tr(Im tau) -- away from the cusp.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    a = rng.normal(size=(g, g))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    im = q @ np.diag(rng.uniform(0.55, 0.9, size=g)) @ q.T
    re = np.zeros((g, g))
    for i in range(g):
        for j in range(i, g):
            re[i, j] = re[j, i] = rng.uniform(0.22, 0.28) * rng.choice([-1.0, 1.0])
    return validate_siegel(re + 1j * im)


def point_to_json(point: SiegelPoint) -> dict:
    """{"genus": g, "tau": [[[re, im], ...], ...]}"""
    return {
        "genus": point.genus,
        "tau": [[[float(x.real), float(x.imag)] for x in row] for row in point.tau],
    }


def point_from_json(obj: dict) -> SiegelPoint:
    g = int(obj["genus"])
    rows = obj["tau"]
    if len(rows) != g or any(len(row) != g for row in rows):
        raise ValueError(f"tau must be a {g}x{g} matrix of [re, im] pairs")
    tau = np.array([[complex(x[0], x[1]) for x in row] for row in rows])
    return validate_siegel(tau)
