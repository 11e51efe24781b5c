"""Reflection group enumeration, chamber projection and orbit geometry.

Everything here works in span coordinates of a :class:`~weylrbm.rootsys.RootSystem`:
the chamber is ``{x : <s_i, x> >= 0}`` with ``s_i`` the rows of ``rs.simple_span``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from weylrbm.rootsys import GramData, RootSystem, reflection_matrix

DEDUP_TOL = 1e-8
WALL_TOL = 1e-9
CHAMBER_TOL = 1e-10
DESCENT_TOL = 1e-12
DEFAULT_CAP = 40320


class GroupOrderError(RuntimeError):
    pass


class DescentError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Orthogonal matrix together with a shortest word in the simple reflections.

    ``matrix == R[word[0]] @ R[word[1]] @ ... @ R[word[-1]]`` where ``R[i]`` is
    the reflection in the i-th simple root.
    """

    matrix: np.ndarray
    word: tuple

    def __len__(self):
        return len(self.word)


def _key(m: np.ndarray) -> bytes:
    return (np.rint(m * 1e7) + 0.0).astype(np.int64).tobytes()


class WeylGroup:
    def __init__(self, elements: list[GroupElement], generators: np.ndarray):
        self.elements = elements
        self.generators = generators
        self.matrices = np.stack([g.matrix for g in elements])
        self._index = {_key(g.matrix): k for k, g in enumerate(elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index_of(self, matrix: np.ndarray) -> int | None:
        k = self._index.get(_key(matrix))
        if k is not None and np.allclose(self.matrices[k], matrix, atol=DEDUP_TOL):
            return k
        return None

    def contains(self, matrix: np.ndarray) -> bool:
        return self.index_of(matrix) is not None


def simple_reflections(rs: RootSystem) -> np.ndarray:
    return np.stack([reflection_matrix(s) for s in rs.simple_span])


def enumerate_group(rs: RootSystem, cap: int = DEFAULT_CAP) -> WeylGroup:
    """Breadth-first closure under right multiplication by simple reflections."""
    gens = simple_reflections(rs)
    ident = GroupElement(np.eye(rs.rank), ())
    elements = [ident]
    seen = {_key(ident.matrix)}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for i, r in enumerate(gens):
            m = g.matrix @ r
            k = _key(m)
            if k in seen:
                continue
            seen.add(k)
            h = GroupElement(m, g.word + (i,))
            elements.append(h)
            if len(elements) > cap:
                raise GroupOrderError(f"group order exceeds cap={cap} for {rs.spec}")
            queue.append(h)
    return WeylGroup(elements, gens)


def word_matrix(gens: np.ndarray, word) -> np.ndarray:
    m = np.eye(gens.shape[1])
    for i in word:
        m = m @ gens[i]
    return m


@dataclass(frozen=True, eq=False)
class ChamberProjection:
    point: np.ndarray
    element: GroupElement
    wall_hits: tuple


def _wall_hits(simple: np.ndarray, point: np.ndarray) -> tuple:
    return tuple(int(i) for i in np.nonzero(np.abs(simple @ point) <= WALL_TOL)[0])


def descent_cap(rs: RootSystem) -> int:
    return 4 * len(rs.positives) + 16


def project_descent(rs: RootSystem, x) -> ChamberProjection:
    """Fold ``x`` into the closed chamber by reflecting through the lowest violated wall."""
    simple = rs.simple_span
    n2 = np.einsum("ij,ij->i", simple, simple)
    y = np.array(x, dtype=float)
    m = np.eye(rs.rank)
    word = []
    for _ in range(descent_cap(rs)):
        prods = simple @ y
        neg = np.nonzero(prods < -DESCENT_TOL)[0]
        if neg.size == 0:
            return ChamberProjection(y, GroupElement(m, tuple(word)), _wall_hits(simple, y))
        i = int(neg[0])
        y = y - (2.0 * prods[i] / n2[i]) * simple[i]
        m = m @ reflection_matrix(simple[i])
        word.append(i)
    raise DescentError(f"descent did not terminate within {descent_cap(rs)} steps for x={x}")


def project_points(rs: RootSystem, x, return_steps: bool = False):
    """Vectorised descent for a stack of points (last axis = span coordinates)."""
    simple = rs.simple_span
    cap = descent_cap(rs)
    x = np.asarray(x, dtype=float)
    shape = x.shape
    y = x.reshape(-1, shape[-1]).copy()
    n2 = np.einsum("ij,ij->i", simple, simple)
    steps = np.zeros(len(y), dtype=np.int64)
    active = np.arange(len(y))
    for _ in range(cap + 1):
        if active.size == 0:
            break
        prods = y[active] @ simple.T
        neg = prods < -DESCENT_TOL
        hit = neg.any(axis=1)
        if not hit.any():
            break
        active = active[hit]
        first = np.argmax(neg[hit], axis=1)
        p = prods[hit, first]
        y[active] -= (2.0 * p / n2[first])[:, None] * simple[first]
        steps[active] += 1
    else:
        raise DescentError(f"vectorised descent exceeded {cap} steps")
    y = y.reshape(shape)
    if return_steps:
        return y, steps.reshape(shape[:-1])
    return y


def project_enumerated(group: WeylGroup, rs: RootSystem, x) -> ChamberProjection:
    """Brute-force projection: scan every ``w* x`` and keep the first one inside the chamber."""
    x = np.asarray(x, dtype=float)
    images = np.einsum("kji,j->ki", group.matrices, x)
    inside = np.all(images @ rs.simple_span.T >= -CHAMBER_TOL, axis=1)
    k = int(np.argmax(inside))
    if not inside[k]:
        raise DescentError(f"no group image of {x} lies in the chamber")
    pt = images[k]
    return ChamberProjection(pt, group.elements[k], _wall_hits(rs.simple_span, pt))


def project_points_enumerated(group: WeylGroup, simple: np.ndarray, x):
    """Batch form of :func:`project_enumerated`; returns points and element indices."""
    x = np.asarray(x, dtype=float)
    out = np.full_like(x, np.nan)
    which = np.full(len(x), -1, dtype=np.int64)
    todo = np.ones(len(x), dtype=bool)
    for k, m in enumerate(group.matrices):
        if not todo.any():
            break
        img = x[todo] @ m
        ok = np.all(img @ simple.T >= -CHAMBER_TOL, axis=1)
        rows = np.nonzero(todo)[0][ok]
        out[rows] = img[ok]
        which[rows] = k
        todo[rows] = False
    return out, which


@dataclass(frozen=True, eq=False)
class OrbitInfo:
    seed: int
    orbit: np.ndarray
    orbit_positives: np.ndarray
    simple_count: int
    simple_members: tuple


def _unique_rows(v: np.ndarray) -> np.ndarray:
    keys = {}
    for row in v:
        keys.setdefault(_key(row), row)
    return np.array(list(keys.values()))


def _row_in(rows: np.ndarray, v: np.ndarray, tol=1e-8) -> bool:
    return bool(np.any(np.max(np.abs(rows - v), axis=1) <= tol))


def orbit_of_simple(group: WeylGroup, rs: RootSystem, i: int) -> OrbitInfo:
    if not 0 <= i < rs.rank:
        raise IndexError(f"simple root index {i} out of range for rank {rs.rank}")
    orbit = _unique_rows(group.matrices @ rs.simple_span[i])
    pos = np.array([a for a in orbit if _row_in(rs.positives_span, a)])
    members = tuple(j for j, s in enumerate(rs.simple_span) if _row_in(orbit, s))
    return OrbitInfo(seed=i, orbit=orbit, orbit_positives=pos,
                     simple_count=len(members), simple_members=members)


def orbit_table(group: WeylGroup, rs: RootSystem) -> list[OrbitInfo]:
    """One entry per distinct orbit of simple roots, seeded by its lowest simple index."""
    table, covered = [], set()
    for i in range(rs.rank):
        if i in covered:
            continue
        info = orbit_of_simple(group, rs, i)
        covered.update(info.simple_members)
        table.append(info)
    return table


@dataclass(frozen=True)
class PropositionCounts:
    lhs_only: int
    rhs_only: int
    both: int
    samples: int

    @property
    def disagreements(self) -> int:
        return self.lhs_only + self.rhs_only


def proposition_indicators(rs: RootSystem, orbit: OrbitInfo, x, projected, epsilon: float):
    """Indicators of the folded slab and of the union of orbit slabs at each point.

    The folded slab ``U_w {0 <= <w s_i, x> <= eps, x in w C}`` equals
    ``{0 <= <s_i, pi(x)> <= eps}`` because ``w* x = pi(x)`` whenever ``x`` lies in ``w C``.
    """
    s = rs.simple_span[orbit.seed]
    p = projected @ s
    lhs = (p >= 0.0) & (p <= epsilon)
    rhs = np.any(np.abs(x @ orbit.orbit_positives.T) <= epsilon, axis=1)
    return lhs, rhs


def proposition_set_check(group: WeylGroup, rs: RootSystem, i: int, epsilon: float,
                          samples: int = 100_000, seed: int = 0,
                          points=None, projected=None) -> PropositionCounts:
    """Monte Carlo comparison of the two slab unions for simple root ``i``.

    ``points``/``projected`` may be supplied to reuse one sample (and its
    projection) across roots and bandwidths.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if points is None:
        points = np.random.default_rng(seed).standard_normal((samples, rs.rank))
    if projected is None:
        projected = project_points(rs, points)
    orbit = orbit_of_simple(group, rs, i)
    lhs, rhs = proposition_indicators(rs, orbit, points, projected, epsilon)
    return PropositionCounts(lhs_only=int(np.sum(lhs & ~rhs)),
                             rhs_only=int(np.sum(rhs & ~lhs)),
                             both=int(np.sum(lhs & rhs)),
                             samples=len(points))


def sample_chamber_points(gd: GramData, n: int, rng: np.random.Generator) -> np.ndarray:
    """Random points of the closed chamber as nonnegative combinations of the dual basis."""
    coeffs = rng.exponential(size=(n, gd.rank))
    # exercise the faces as well
    coeffs[rng.random((n, gd.rank)) < 0.2] = 0.0
    return coeffs @ gd.dual


@dataclass(frozen=True, eq=False)
class NormalDecomposition:
    index: int
    boundary_part: np.ndarray
    origin_part: np.ndarray
    coefficients: np.ndarray
    residual: float
    min_coefficient: float
    min_origin_product: float

    @property
    def ok(self) -> bool:
        return (self.residual <= 1e-10 and self.min_coefficient >= -1e-10
                and self.min_origin_product >= -1e-10)


def normal_decomposition(gd: GramData, i: int, n_check: int = 1000, seed: int = 0) -> NormalDecomposition:
    """Split the dual vector into a wall normal plus a vector pointing into the chamber from 0.

    ``xi_i = <xi_i, xi_i> s_i + sum_{j != i} <xi_i, xi_j> s_j``.
    """
    coeffs = gd.gram_inv[i].copy()
    boundary = coeffs[i] * gd.lam[i]
    others = coeffs.copy()
    others[i] = 0.0
    origin = others @ gd.lam
    residual = float(np.max(np.abs(boundary + origin - gd.dual[i])))
    pts = sample_chamber_points(gd, n_check, np.random.default_rng(seed))
    inward = float((pts @ origin).min()) if n_check else float("inf")
    return NormalDecomposition(index=i, boundary_part=boundary, origin_part=origin,
                               coefficients=coeffs, residual=residual,
                               min_coefficient=float(coeffs.min()),
                               min_origin_product=inward)
