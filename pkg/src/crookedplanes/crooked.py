r"""Crooked planes, halfspaces and fundamental domains in Minkowski space.

A crooked plane ``C(v, p)`` with vertex ``p`` and spacelike director ``v``
is the piecewise-linear surface made of a stem, the timelike bowtie

    p + { x : x . v = 0, x . x <= 0 },

and two null wings

    p + R x+(v) + R_+ v,        p + R x-(v) - R_+ v,

where ``x-(v), x+(v)`` are the future null directions orthogonal to ``v``,
labeled by the package orientation convention.  The complement of
``C(v, p)`` is the pair of crooked halfspaces ``H(v, p)`` and
``H(-v, p)``.

Two crooked planes with consistently oriented directors sharing a null
ray are disjoint exactly when their vertices sit strictly inside opposite
quadrants of the shared frame; that is the algebraic certificate used to
assemble Schottky-style fundamental domains whose four faces are paired
by the holonomy of a surface deformation.  An exact piecewise-linear
intersection test and a Monte Carlo sampling oracle corroborate the
certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (CoordinateError, DisjointnessUndecidedError,
                     GeometryError, KissingError)
from .holonomy import Holonomy, Word
from .invariants import (AffineDeformation, Cocycle, ConfigurationRays,
                         cocycle_from_vertices, configuration_rays,
                         mu_from_triple_formula)
from .lorentz import mdot, normalize_null, oriented_volume

#: Tolerance per unit distance on the membership equalities of stems/wings.
MEMBERSHIP_TOL = 1e-9

#: Strictness threshold on the quadrant coefficients of the disjointness
#: certificate; coefficients at or below it count as kissing.
COEFF_STRICT_TOL = 1e-10

#: Consistent-orientation slack on the nonstrict null inequalities.
ORIENT_TOL = 1e-10

#: Monte Carlo oracle defaults.
ORACLE_SAMPLES = 10_000
ORACLE_RADIUS = 10.0
ORACLE_TOL = 1e-7

WORD_BY_NAME = {"A": Word.from_string("A"), "X": Word.from_string("X"),
                "a": Word.from_string("a"), "x": Word.from_string("x")}


# ---------------------------------------------------------------------------
# Null frames of directors
# ---------------------------------------------------------------------------

def null_frame_of_director(v) -> tuple[np.ndarray, np.ndarray]:
    """The two future null directions orthogonal to a spacelike vector.

    Both are normalized to third coordinate 1 and labeled so that
    ``(x_minus, x_plus, v)`` is a right-handed frame; consequently
    negating the director swaps the labels.
    """
    v = np.asarray(v, dtype=float)
    r2 = v[0] * v[0] + v[1] * v[1]
    if r2 - v[2] * v[2] <= 0:
        raise CoordinateError("director must be spacelike")
    r = math.sqrt(r2)
    phi0 = math.atan2(v[1], v[0])
    psi = math.acos(max(-1.0, min(1.0, v[2] / r)))
    cand_a = np.array([math.cos(phi0 + psi), math.sin(phi0 + psi), 1.0])
    cand_b = np.array([math.cos(phi0 - psi), math.sin(phi0 - psi), 1.0])
    if oriented_volume(cand_a, cand_b, v) > 0:
        return cand_a, cand_b
    return cand_b, cand_a


# ---------------------------------------------------------------------------
# Planes and halfspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrookedPlane:
    """Crooked plane with the null frame of its director cached."""

    vertex: np.ndarray
    director: np.ndarray
    x_minus: np.ndarray = field(init=False, repr=False, compare=False)
    x_plus: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = np.array(self.vertex, dtype=float)
        v = np.array(self.director, dtype=float)
        xm, xp = null_frame_of_director(v)
        for name, arr in (("vertex", p), ("director", v),
                          ("x_minus", xm), ("x_plus", xp)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def flipped(self) -> "CrookedPlane":
        """Same point set, opposite director (wing labels swap)."""
        return CrookedPlane(self.vertex, -self.director)


@dataclass(frozen=True)
class CrookedHalfspace:
    """One closed complementary component of a crooked plane.

    ``H(v, p)`` and ``H(-v, p)`` are the two components; their shared
    boundary is the crooked plane itself.
    """

    vertex: np.ndarray
    director: np.ndarray

    def __post_init__(self):
        plane = CrookedPlane(self.vertex, self.director)
        object.__setattr__(self, "vertex", plane.vertex)
        object.__setattr__(self, "director", plane.director)
        object.__setattr__(self, "_plane", plane)

    @property
    def boundary(self) -> CrookedPlane:
        return self._plane

    def opposite(self) -> "CrookedHalfspace":
        return CrookedHalfspace(self.vertex, -self.director)


def _offsets(plane, q):
    q = np.asarray(q, dtype=float)
    d = q - plane.vertex
    scale = 1.0 + np.sqrt(np.sum(d * d, axis=-1))
    return d, scale


def crooked_contains(plane: CrookedPlane, q, tol: float = MEMBERSHIP_TOL):
    """Membership of one point or an array of points in the plane.

    Equality constraints are tested to ``tol`` per unit Euclidean distance
    from the vertex.
    """
    d, scale = _offsets(plane, q)
    slack = tol * scale
    dv = mdot(d, plane.director)
    on_stem = (np.abs(dv) <= slack) & (mdot(d, d) <= slack)
    on_wing_plus = (np.abs(mdot(d, plane.x_plus)) <= slack) & (dv >= -slack)
    on_wing_minus = (np.abs(mdot(d, plane.x_minus)) <= slack) & (dv <= slack)
    return on_stem | on_wing_plus | on_wing_minus


def halfspace_contains(hs: CrookedHalfspace, q, tol: float = MEMBERSHIP_TOL):
    """Closed-halfspace membership, vectorized like :func:`crooked_contains`.

    A point lies in ``H(v, p)`` when, writing ``d = q - p``, either
    ``d . v >= 0`` with ``d . x+(v) <= 0``, or ``d . v <= 0`` with
    ``d . x-(v) >= 0``.
    """
    plane = hs.boundary
    d, scale = _offsets(plane, q)
    slack = tol * scale
    dv = mdot(d, plane.director)
    side_plus = (dv >= -slack) & (mdot(d, plane.x_plus) <= slack)
    side_minus = (dv <= slack) & (mdot(d, plane.x_minus) >= -slack)
    return side_plus | side_minus


def transform_crooked(linear, translation, plane: CrookedPlane) -> CrookedPlane:
    """Image of a crooked plane under an affine map with Lorentz linear part:
    the director maps by the linear part, the vertex by the full map."""
    linear = np.asarray(linear, dtype=float)
    translation = np.asarray(translation, dtype=float)
    return CrookedPlane(linear @ plane.vertex + translation,
                        linear @ plane.director)


# ---------------------------------------------------------------------------
# Consistent orientation and the shared-ray disjointness certificate
# ---------------------------------------------------------------------------

def consistent_directors(directors, tol: float = ORIENT_TOL) -> bool:
    """Pairwise consistency of a family of spacelike directors: negative
    mutual products and nonpositive pairing against each other's null
    frames (the latter within ``tol``)."""
    vs = [np.asarray(v, dtype=float) for v in directors]
    frames = [null_frame_of_director(v) for v in vs]
    for i in range(len(vs)):
        for j in range(len(vs)):
            if i == j:
                continue
            if mdot(vs[i], vs[j]) >= 0:
                return False
            if mdot(vs[i], frames[j][0]) > tol or mdot(vs[i], frames[j][1]) > tol:
                return False
    return True


def frame_coefficients(plane: CrookedPlane, tol: float = 1e-9):
    """Coefficients (a, b) with vertex = a x_minus - b x_plus.

    Requires the vertex to lie in the director's orthogonal plane (within
    ``tol`` per unit vertex size); raises
    :class:`DisjointnessUndecidedError` otherwise.
    """
    p = plane.vertex
    xm, xp = plane.x_minus, plane.x_plus
    cross = float(mdot(xm, xp))
    a = float(mdot(p, xp)) / cross
    b = -float(mdot(p, xm)) / cross
    vv = float(mdot(plane.director, plane.director))
    c = float(mdot(p, plane.director)) / vv
    scale = 1.0 + float(np.linalg.norm(p))
    if abs(c) > tol * scale:
        raise DisjointnessUndecidedError(
            "vertex does not lie in the director's orthogonal plane "
            f"(off-plane component {c:.3e})")
    return a, b


def _same_ray(u, w, tol: float = 1e-8) -> bool:
    return bool(np.allclose(u, w, rtol=0.0, atol=tol))


def disjoint_sufficient(c1: CrookedPlane, c2: CrookedPlane,
                        strict_tol: float = COEFF_STRICT_TOL) -> bool:
    """Shared-ray sufficient disjointness criterion.

    Applies to consistently oriented, non-parallel directors with
    ``x-(v1) = x+(v2)`` (in either role order) and vertices in their
    directors' orthogonal planes: the planes are disjoint when all four
    quadrant coefficients are strictly positive.  Returns ``False`` when a
    coefficient vanishes or is negative (a kissing or crossing
    configuration); raises :class:`DisjointnessUndecidedError` when the
    hypotheses do not hold, which is indeterminate rather than false.
    """
    v1, v2 = c1.director, c2.director
    cross = np.cross(v1, v2)
    scale = float(np.linalg.norm(v1) * np.linalg.norm(v2))
    if float(np.linalg.norm(cross)) <= 1e-12 * scale:
        raise DisjointnessUndecidedError("directors are parallel")
    if not consistent_directors([v1, v2]):
        raise DisjointnessUndecidedError("directors are not consistently oriented")
    if _same_ray(c1.x_minus, c2.x_plus):
        first, second = c1, c2
    elif _same_ray(c2.x_minus, c1.x_plus):
        first, second = c2, c1
    else:
        raise DisjointnessUndecidedError("no shared null ray with matching labels")
    a1, b1 = frame_coefficients(first)
    a2, b2 = frame_coefficients(second)
    return min(a1, b1, a2, b2) > strict_tol


def lemma_margin(c1: CrookedPlane, c2: CrookedPlane) -> float:
    """Smallest quadrant coefficient entering the shared-ray certificate;
    positive margins certify disjointness, zero means kissing."""
    if _same_ray(c1.x_minus, c2.x_plus):
        first, second = c1, c2
    elif _same_ray(c2.x_minus, c1.x_plus):
        first, second = c2, c1
    else:
        raise DisjointnessUndecidedError("no shared null ray with matching labels")
    a1, b1 = frame_coefficients(first)
    a2, b2 = frame_coefficients(second)
    return float(min(a1, b1, a2, b2))


# ---------------------------------------------------------------------------
# Exact piecewise-linear disjointness
# ---------------------------------------------------------------------------

def _pieces(plane: CrookedPlane):
    """The four closed convex pieces of a crooked plane.

    Each piece is (origin, generator matrix G, signs) where signs[k] is
    +1 for a constrained coordinate (>= 0) and 0 for a free one; the piece
    is { origin + G @ lam : lam respects signs }.
    """
    p, v = plane.vertex, plane.director
    xm, xp = plane.x_minus, plane.x_plus
    return (
        (p, np.column_stack([xm, xp]), (1, 1)),          # stem, future half
        (p, np.column_stack([-xm, -xp]), (1, 1)),        # stem, past half
        (p, np.column_stack([xp, v]), (0, 1)),           # wing along x_plus
        (p, np.column_stack([xm, -v]), (0, 1)),          # wing along x_minus
    )


def _euclid_plane_normal(g) -> np.ndarray:
    n = np.cross(g[:, 0], g[:, 1])
    return n / np.linalg.norm(n)


def _interval_from_constraints(z0, z1, signs, tol):
    """Feasible tau-interval of lam(tau) = z0 + tau z1 with lam[k] >= -tol
    for constrained coordinates.  Returns (lo, hi), possibly infinite or
    empty (lo > hi)."""
    lo, hi = -np.inf, np.inf
    for k, sgn in enumerate(signs):
        if not sgn:
            continue
        a, b = z1[k], z0[k]
        if abs(a) < 1e-14:
            if b < -tol:
                return 1.0, 0.0
            continue
        bound = (-tol - b) / a
        if a > 0:
            lo = max(lo, bound)
        else:
            hi = min(hi, bound)
    return lo, hi


def _piece_pair_witness(p1, g1, s1, p2, g2, s2, tol):
    """Witness point of the intersection of two convex planar pieces in
    3-space, or None if they are disjoint."""
    n1, n2 = _euclid_plane_normal(g1), _euclid_plane_normal(g2)
    d = np.cross(n1, n2)
    dnorm = float(np.linalg.norm(d))
    offset = p2 - p1
    scale = 1.0 + float(np.linalg.norm(p1)) + float(np.linalg.norm(p2))
    if dnorm < 1e-12:
        # parallel carrier planes: distinct -> disjoint, coincident -> 2d case
        gap = abs(float(np.dot(offset, n1)))
        if gap > tol * scale:
            return None
        return _coplanar_pieces_witness(p1, g1, s1, p2, g2, s2, n1, tol)
    d = d / dnorm
    # point on both carrier planes: solve [n1; n2] q = [n1.p1, n2.p2]
    mat = np.vstack([n1, n2, d])
    rhs = np.array([float(np.dot(n1, p1)), float(np.dot(n2, p2)), 0.0])
    q0 = np.linalg.solve(mat, rhs)
    lo, hi = -np.inf, np.inf
    for (p, g, s) in ((p1, g1, s1), (p2, g2, s2)):
        # lam(tau) solving p + G lam = q0 + tau d, in the carrier plane
        gram = g.T @ g
        z0 = np.linalg.solve(gram, g.T @ (q0 - p))
        z1 = np.linalg.solve(gram, g.T @ d)
        plo, phi = _interval_from_constraints(z0, z1, s, tol)
        lo, hi = max(lo, plo), min(hi, phi)
    if lo > hi + tol * scale:
        return None
    if np.isinf(lo) and np.isinf(hi):
        tau = 0.0
    elif np.isinf(hi):
        tau = lo + 1.0
    elif np.isinf(lo):
        tau = hi - 1.0
    else:
        tau = (lo + hi) / 2.0
    return q0 + tau * d


def _coplanar_pieces_witness(p1, g1, s1, p2, g2, s2, normal, tol):
    """Witness of the intersection of two convex pieces lying in one common
    plane, or None."""
    # 2d coordinates in the plane
    e1 = g1[:, 0] / np.linalg.norm(g1[:, 0])
    e2 = np.cross(normal, e1)

    def to2d(vec):
        return np.array([float(np.dot(vec, e1)), float(np.dot(vec, e2))])

    halfplanes = []   # (normal2d, offset): feasible means n.x <= c
    for (p, g, s) in ((p1, g1, s1), (p2, g2, s2)):
        origin = to2d(p - p1)
        for k, sgn in enumerate(s):
            if not sgn:
                continue
            gen = to2d(g[:, k])
            other = to2d(g[:, 1 - k])
            # lam_k >= 0 translates to: points on the "gen" side of the
            # line through origin spanned by the other generator
            n = np.array([-other[1], other[0]])
            if float(np.dot(n, gen)) < 0:
                n = -n
            halfplanes.append((-n, float(np.dot(-n, origin)) + tol))
    # feasibility of { x : n_i . x <= c_i } via candidate vertices
    cands = [np.zeros(2)]
    for i in range(len(halfplanes)):
        n_i, c_i = halfplanes[i]
        cands.append(n_i * c_i / float(np.dot(n_i, n_i)))
        for j in range(i + 1, len(halfplanes)):
            n_j, c_j = halfplanes[j]
            mat = np.vstack([n_i, n_j])
            if abs(float(np.linalg.det(mat))) < 1e-12:
                continue
            cands.append(np.linalg.solve(mat, np.array([c_i, c_j])))
    scale = 1.0 + max(float(np.linalg.norm(c)) for c in cands)
    for cand in cands:
        if all(float(np.dot(n, cand)) <= c + 1e-9 * scale for n, c in halfplanes):
            return p1 + cand[0] * e1 + cand[1] * e2
    return None


def intersection_witness(c1: CrookedPlane, c2: CrookedPlane,
                         tol: float = 1e-9):
    """A common point of two crooked planes, or None when they are strictly
    disjoint.  Exact up to ``tol``: touching configurations produce a
    witness."""
    for (pa, ga, sa) in _pieces(c1):
        for (pb, gb, sb) in _pieces(c2):
            w = _piece_pair_witness(pa, ga, sa, pb, gb, sb, tol)
            if w is not None:
                return w
    return None


def planes_intersect(c1: CrookedPlane, c2: CrookedPlane,
                     tol: float = 1e-9) -> bool:
    """Exact piecewise-linear intersection test of two crooked planes.

    Decomposes each plane into its four convex pieces and intersects all
    pairs; touching within ``tol`` counts as intersecting, so a ``False``
    certifies strict disjointness.
    """
    return intersection_witness(c1, c2, tol) is not None


# ---------------------------------------------------------------------------
# Quadrants and the standard three-plane configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quadrant:
    """Nonnegative span of two rays anchored at the origin."""

    u: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        for name in ("u", "w"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def coefficients(self, p) -> tuple[float, float, float]:
        """Decompose ``p = r u + s w``; returns (r, s, residual) where the
        residual is the Euclidean distance to the span."""
        p = np.asarray(p, dtype=float)
        g = np.column_stack([self.u, self.w])
        sol, *_ = np.linalg.lstsq(g, p, rcond=None)
        residual = float(np.linalg.norm(g @ sol - p))
        return float(sol[0]), float(sol[1]), residual

    def contains(self, p, tol: float = 1e-10) -> bool:
        r, s, residual = self.coefficients(p)
        scale = 1.0 + float(np.linalg.norm(np.asarray(p, dtype=float)))
        return residual <= tol * scale and r >= -tol and s >= -tol


def mink_cross(u, w) -> np.ndarray:
    """Vector Minkowski-orthogonal to both arguments (eta times the
    Euclidean cross product)."""
    c = np.cross(np.asarray(u, dtype=float), np.asarray(w, dtype=float))
    return np.array([c[0], c[1], -c[2]])


@dataclass(frozen=True)
class StandardConfiguration:
    """Directors and quadrants modeled on the ideal-triangle decomposition.

    The three unit-spacelike directors are orthogonal to consecutive pairs
    of the null rays ``n1 = x-(A)``, ``n2 = X(-x+(B))``, ``n3 = A(x+(B))``
    and consistently oriented; each director's null frame consists of its
    two defining rays, in the order (x_minus, x_plus) = (n1, n2), (n3, n1)
    and (n2, n3) respectively.  Vertices chosen in the quadrants

        Q0 = span+{n1, -n2},  QA = span+{n3, -n1},  QX = span+{n2, -n3}

    give pairwise disjoint crooked planes as soon as all coefficients are
    strictly positive.
    """

    rays: ConfigurationRays
    v0: np.ndarray
    vA: np.ndarray
    vX: np.ndarray
    Q0: Quadrant
    QA: Quadrant
    QX: Quadrant

    def vertices(self, coefficients) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vertex triple (p0, pA, pX) of the quadrant coefficients
        (r0, s0, rA, sA, rX, sX)."""
        r0, s0, rA, sA, rX, sX = (float(c) for c in coefficients)
        n1, n2, n3 = self.rays.xm_A, self.rays.x_minus_xp_B, self.rays.a_xp_B
        return (r0 * n1 - s0 * n2, rA * n3 - sA * n1, rX * n2 - sX * n3)

    def planes(self, coefficients) -> tuple[CrookedPlane, CrookedPlane, CrookedPlane]:
        p0, pA, pX = self.vertices(coefficients)
        return (CrookedPlane(p0, self.v0), CrookedPlane(pA, self.vA),
                CrookedPlane(pX, self.vX))


def _unit_spacelike(v) -> np.ndarray:
    q = float(mdot(v, v))
    if q <= 0:
        raise GeometryError("expected a spacelike vector")
    return np.asarray(v, dtype=float) / math.sqrt(q)


def standard_configuration(h: Holonomy) -> StandardConfiguration:
    """Directors and quadrants attached to a holonomy.

    Raises :class:`GeometryError` if the consistent orientation or the
    null-frame labeling cannot be realized, which would indicate a broken
    holonomy construction.
    """
    rays = configuration_rays(h)
    n1, n2, n3 = rays.xm_A, rays.x_minus_xp_B, rays.a_xp_B
    v0 = _unit_spacelike(mink_cross(n1, n2))
    vA = _unit_spacelike(mink_cross(n3, n1))
    vX = _unit_spacelike(mink_cross(n2, n3))
    if float(mdot(v0, vA)) > 0:
        vA = -vA
    if float(mdot(v0, vX)) > 0:
        vX = -vX
    triple = [v0, vA, vX]
    if not consistent_directors(triple):
        triple = [-v for v in triple]
        if not consistent_directors(triple):
            raise GeometryError("directors cannot be consistently oriented")
    v0, vA, vX = triple
    expected = ((v0, n1, n2), (vA, n3, n1), (vX, n2, n3))
    for v, minus_ray, plus_ray in expected:
        xm, xp = null_frame_of_director(v)
        if not (_same_ray(xm, normalize_null(minus_ray))
                and _same_ray(xp, normalize_null(plus_ray))):
            raise GeometryError("null-frame labels disagree with the "
                                "configuration rays")
    return StandardConfiguration(
        rays=rays, v0=v0, vA=vA, vX=vX,
        Q0=Quadrant(n1, -n2), QA=Quadrant(n3, -n1), QX=Quadrant(n2, -n3))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_crooked_plane(plane: CrookedPlane, n: int = ORACLE_SAMPLES,
                         radius: float = ORACLE_RADIUS,
                         rng: np.random.Generator | None = None) -> np.ndarray:
    """Random points on a crooked plane within ``radius`` of its vertex
    (in the chart parameters), split evenly between stem halves and wings."""
    if rng is None:
        rng = np.random.default_rng(0)
    p, v = plane.vertex, plane.director
    xm, xp = plane.x_minus, plane.x_plus
    quarters = [n // 4, n // 4, n // 4, n - 3 * (n // 4)]
    chunks = []
    ab = rng.uniform(0.0, radius, size=(quarters[0], 2))
    chunks.append(p + ab[:, :1] * xm + ab[:, 1:] * xp)
    ab = rng.uniform(0.0, radius, size=(quarters[1], 2))
    chunks.append(p - ab[:, :1] * xm - ab[:, 1:] * xp)
    ts = np.column_stack([rng.uniform(-radius, radius, size=quarters[2]),
                          rng.uniform(0.0, radius, size=quarters[2])])
    chunks.append(p + ts[:, :1] * xp + ts[:, 1:] * v)
    ts = np.column_stack([rng.uniform(-radius, radius, size=quarters[3]),
                          rng.uniform(0.0, radius, size=quarters[3])])
    chunks.append(p + ts[:, :1] * xm - ts[:, 1:] * v)
    return np.vstack(chunks)


def intersection_witnesses(c1: CrookedPlane, c2: CrookedPlane,
                           n: int = ORACLE_SAMPLES,
                           radius: float = ORACLE_RADIUS,
                           tol: float = ORACLE_TOL,
                           rng: np.random.Generator | None = None) -> int:
    """Monte Carlo oracle: number of sampled points of either plane lying
    on the other (within ``tol``)."""
    if rng is None:
        rng = np.random.default_rng(0)
    pts1 = sample_crooked_plane(c1, n, radius, rng)
    pts2 = sample_crooked_plane(c2, n, radius, rng)
    w1 = int(np.count_nonzero(crooked_contains(c2, pts1, tol)))
    w2 = int(np.count_nonzero(crooked_contains(c1, pts2, tol)))
    return w1 + w2
