"""Reduced root systems, their Gram data and the dual-basis positivity checks.

Vectors are plain numpy arrays. A :class:`RootSystem` stores its roots in
ambient coordinates together with an orthonormal basis of ``span(R)``; all
chamber and simulation work happens in the restricted (span) coordinates,
where the simple roots form a square invertible matrix.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.integrate
import scipy.linalg

TOL = 1e-10
COND_MAX = 1e12

FAMILIES = ("orth", "A", "B", "I2")


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True)
class RootSystemSpec:
    """Family name plus its parameter.

    ``n`` is the rank for ``orth``, ``A`` and ``B`` (so ``A`` with ``n = 2``
    lives in R^3) and the dihedral order ``m`` for ``I2``.
    """

    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise RootSystemError(f"unknown family {self.family!r}")
        if self.family == "I2" and self.n < 2:
            raise RootSystemError(f"dihedral order must be >= 2, got {self.n}")
        if self.n < 1:
            raise RootSystemError(f"rank must be >= 1, got {self.n}")
        if self.family == "B" and self.n < 2:
            raise RootSystemError("B(n) needs n >= 2")

    def __str__(self):
        if self.family == "I2":
            return f"I2({self.n})"
        return f"{self.family}{self.n}"

    @classmethod
    def parse(cls, text: str) -> "RootSystemSpec":
        """Parse compact names such as ``A3``, ``B2``, ``I2(5)``, ``orth4``."""
        s = text.strip()
        m = re.fullmatch(r"(?i)I2\((\d+)\)", s) or re.fullmatch(r"(?i)dihedral\((\d+)\)", s)
        if m:
            return cls("I2", int(m.group(1)))
        m = re.fullmatch(r"(?i)(orth|orthogonal)\(?(\d+)\)?", s)
        if m:
            return cls("orth", int(m.group(2)))
        m = re.fullmatch(r"([AaBb])\(?(\d+)\)?", s)
        if m:
            return cls(m.group(1).upper(), int(m.group(2)))
        raise RootSystemError(f"cannot parse root system {text!r}")


@dataclass(frozen=True, eq=False)
class RootSystem:
    spec: RootSystemSpec
    roots: np.ndarray          # (N, ambient_dim)
    simple: np.ndarray         # (rank, ambient_dim)
    positives: np.ndarray      # (N/2, ambient_dim)
    span_basis: np.ndarray     # (rank, ambient_dim), orthonormal rows

    @property
    def ambient_dim(self) -> int:
        return self.roots.shape[1]

    @property
    def rank(self) -> int:
        return self.simple.shape[0]

    def to_span(self, v):
        return np.asarray(v, dtype=float) @ self.span_basis.T

    def from_span(self, y):
        return np.asarray(y, dtype=float) @ self.span_basis

    @cached_property
    def simple_span(self) -> np.ndarray:
        return self.to_span(self.simple)

    @cached_property
    def roots_span(self) -> np.ndarray:
        return self.to_span(self.roots)

    @cached_property
    def positives_span(self) -> np.ndarray:
        return self.to_span(self.positives)

    def simple_coefficients(self, v_span):
        """Coordinates of span vectors in the simple basis."""
        return np.linalg.solve(self.simple_span.T, np.asarray(v_span, dtype=float).T).T


def reflect(alpha, v):
    """Reflect ``v`` (or a stack of vectors, last axis) through the hyperplane orthogonal to ``alpha``."""
    alpha = np.asarray(alpha, dtype=float)
    v = np.asarray(v, dtype=float)
    if alpha.shape[-1] != v.shape[-1]:
        raise ValueError(f"dimension mismatch: {alpha.shape[-1]} vs {v.shape[-1]}")
    nrm2 = alpha @ alpha
    if nrm2 == 0.0:
        raise ValueError("cannot reflect through the zero vector")
    return v - (2.0 * (v @ alpha) / nrm2)[..., None] * alpha


def reflection_matrix(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    return np.eye(alpha.size) - 2.0 * np.outer(alpha, alpha) / (alpha @ alpha)


def _gram_schmidt(rows: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(rows.T)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return (q * signs).T


def _split_positive(simple_span: np.ndarray, roots_span: np.ndarray) -> np.ndarray:
    coeffs = np.linalg.solve(simple_span.T, roots_span.T).T
    return np.all(coeffs >= -TOL, axis=1)


def build_root_system(spec: RootSystemSpec | str) -> RootSystem:
    if isinstance(spec, str):
        spec = RootSystemSpec.parse(spec)
    fam, n = spec.family, spec.n
    eye = np.eye

    if fam == "orth":
        e = eye(n)
        roots = np.vstack([e, -e])
        simple = e.copy()
        basis = e.copy()
    elif fam == "A":
        d = n + 1
        e = eye(d)
        roots = np.array([e[i] - e[j] for i in range(d) for j in range(d) if i != j])
        simple = np.array([e[i] - e[i + 1] for i in range(n)])
        basis = _gram_schmidt(simple)
    elif fam == "B":
        e = eye(n)
        rs = [s * e[i] for i in range(n) for s in (1, -1)]
        for i in range(n):
            for j in range(i + 1, n):
                for a in (1, -1):
                    for b in (1, -1):
                        rs.append(a * e[i] + b * e[j])
        roots = np.array(rs, dtype=float)
        simple = np.array([e[i] - e[i + 1] for i in range(n - 1)] + [e[n - 1]])
        basis = e.copy()
    else:  # dihedral I2(m)
        m = n
        ang = -np.pi / 2 + np.arange(1, m + 1) * np.pi / m
        half = np.column_stack([np.cos(ang), np.sin(ang)])
        half[np.abs(half) < 1e-15] = 0.0
        roots = np.vstack([half, -half])
        simple = np.array([half[0], half[-1]])
        basis = eye(2)

    simple_span = simple @ basis.T
    pos_mask = _split_positive(simple_span, roots @ basis.T)
    return RootSystem(spec=spec, roots=roots, simple=simple,
                      positives=roots[pos_mask], span_basis=basis)


def _contains(vectors: np.ndarray, v: np.ndarray, tol=TOL) -> bool:
    return bool(np.any(np.max(np.abs(vectors - v), axis=1) <= tol))


@dataclass
class RootSystemReport:
    closed: bool
    reduced: bool
    sign_consistent: bool
    positive_split: bool
    rank_ok: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.closed and self.reduced and self.sign_consistent and self.positive_split and self.rank_ok


def verify_root_system(rs: RootSystem, tol: float = TOL) -> RootSystemReport:
    """Check the root system axioms; never raises, failures are listed in the report."""
    failures = []
    roots = rs.roots

    closed = True
    for a in roots:
        images = reflect(a, roots)
        for img in images:
            if not _contains(roots, img, tol):
                closed = False
                failures.append(f"reflection in {a} maps a root to {img}, not a root")
                break
        if not closed:
            break

    # parallel roots must be exactly +-a
    unit = roots / np.linalg.norm(roots, axis=1, keepdims=True)
    cos = unit @ unit.T
    i_idx, j_idx = np.nonzero(np.triu(np.abs(cos) > 1.0 - 1e-12, k=1))
    bad = [(i, j) for i, j in zip(i_idx, j_idx)
           if not np.allclose(roots[j], -roots[i], atol=tol)]
    reduced = not bad
    if bad:
        i, j = bad[0]
        failures.append(f"non-reduced pair {roots[i]}, {roots[j]}")

    rank_ok = True
    try:
        coeffs = rs.simple_coefficients(rs.roots_span)
        back = coeffs @ rs.simple_span
        if not np.allclose(back, rs.roots_span, atol=1e-8):
            rank_ok = False
            failures.append("simple roots do not span the roots")
    except np.linalg.LinAlgError:
        rank_ok = False
        coeffs = np.zeros((len(roots), rs.rank))
        failures.append("simple system is not a basis of span(R)")
    expected = rs.ambient_dim - 1 if rs.spec.family == "A" else rs.ambient_dim
    if rs.rank != expected or np.linalg.matrix_rank(rs.roots, tol=1e-9) != rs.rank:
        rank_ok = False
        failures.append(f"rank {rs.rank} does not match span(R)")

    nonneg = np.all(coeffs >= -tol, axis=1)
    nonpos = np.all(coeffs <= tol, axis=1)
    sign_consistent = bool(np.all(nonneg | nonpos))
    if not sign_consistent:
        failures.append("some root has mixed-sign simple coordinates")

    pos = rs.positives
    split = len(pos) * 2 == len(roots)
    split = split and all(_contains(roots, p, tol) and _contains(roots, -p, tol) for p in pos)
    split = split and not any(_contains(pos, -p, tol) for p in pos)
    if not split:
        failures.append("positives and their negatives do not partition the roots")

    return RootSystemReport(closed, reduced, sign_consistent, split, rank_ok, failures)


@dataclass(frozen=True, eq=False)
class GramData:
    """Simple-root matrix (rows = simple roots in span coordinates), its Gram matrix and dual basis."""

    lam: np.ndarray
    gram: np.ndarray
    gram_inv: np.ndarray
    dual: np.ndarray

    @property
    def rank(self) -> int:
        return self.lam.shape[0]

    @property
    def norms2(self) -> np.ndarray:
        return np.diag(self.gram).copy()


def gram_data(rs: RootSystem) -> GramData:
    lam = rs.simple_span
    cond = np.linalg.cond(lam)
    if not np.isfinite(cond) or cond > COND_MAX:
        raise RootSystemError(f"simple-root matrix is numerically singular (cond={cond:.3g})")
    gram = lam @ lam.T
    factor = scipy.linalg.cho_factor(gram)
    gram_inv = scipy.linalg.cho_solve(factor, np.eye(len(gram)))
    gram_inv = 0.5 * (gram_inv + gram_inv.T)
    dual = gram_inv @ lam
    return GramData(lam=lam, gram=gram, gram_inv=gram_inv, dual=dual)


def _offdiag(m: np.ndarray) -> np.ndarray:
    return m[~np.eye(len(m), dtype=bool)]


def lemma_nonneg_check(gd: GramData, tol: float = TOL) -> tuple[bool, float]:
    """Pairwise inner products of the dual basis are nonnegative.

    Returns ``(ok, min_offdiag)``; rank one systems have no off-diagonal entries
    and report ``inf``.
    """
    off = _offdiag(gd.gram_inv)
    if off.size == 0:
        return True, float("inf")
    low = float(off.min())
    return low >= -tol, low


@dataclass
class IntegralCheck:
    deviation: float
    min_entry: float
    tail_bound: float
    t_max: float
    steps: int

    @property
    def positive(self) -> bool:
        return self.min_entry >= -TOL


def lemma_integral_check(gd: GramData, t_max: float = 40.0, steps: int = 4000,
                         tol: float = 1e-6) -> IntegralCheck:
    """Compare the Gram inverse with the integral of exp(-tA) over [0, t_max].

    The exponential is evaluated once at the step size (scipy's scaling and
    squaring) and propagated by repeated multiplication; the integral uses
    composite Simpson. The omitted tail is bounded in spectral norm by
    ``exp(-lambda_min t_max) / lambda_min``.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if steps < 10:
        raise ValueError("steps must be >= 10")
    if steps % 2:
        steps += 1
    a = gd.gram
    h = t_max / steps
    step = scipy.linalg.expm(-h * a)
    samples = np.empty((steps + 1,) + a.shape)
    samples[0] = np.eye(len(a))
    for k in range(1, steps + 1):
        samples[k] = samples[k - 1] @ step
    integral = scipy.integrate.simpson(samples, dx=h, axis=0)

    lam_min = float(np.linalg.eigvalsh(a).min())
    tail = float(np.exp(-lam_min * t_max) / lam_min)
    if tail > tol:
        warnings.warn(f"truncation tail bound {tail:.2e} exceeds {tol:.0e}; "
                      f"t_max={t_max} is short for smallest eigenvalue {lam_min:.3g}",
                      RuntimeWarning, stacklevel=2)
    return IntegralCheck(deviation=float(np.max(np.abs(integral - gd.gram_inv))),
                         min_entry=float(samples.min()),
                         tail_bound=tail, t_max=t_max, steps=steps)


def wedge_angle(gd: GramData) -> float:
    """Opening angle of a rank-2 chamber, pi minus the angle between the simple roots."""
    if gd.rank != 2:
        raise ValueError("wedge angle is defined for rank-2 systems only")
    s1, s2 = gd.lam
    cos = s1 @ s2 / np.sqrt((s1 @ s1) * (s2 @ s2))
    return float(np.pi - np.arccos(np.clip(cos, -1.0, 1.0)))


def family_matrix():
    """The family/rank matrix used throughout the exact checks."""
    specs = [RootSystemSpec("orth", n) for n in range(1, 7)]
    specs += [RootSystemSpec("A", n) for n in range(1, 6)]
    specs += [RootSystemSpec("B", n) for n in range(2, 5)]
    specs += [RootSystemSpec("I2", m) for m in range(2, 9)]
    return specs
