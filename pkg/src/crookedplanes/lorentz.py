r"""Minkowski 3-space and the adjoint Lorentz representation.

Minkowski space ``V`` carries the form ``u . v = u1 v1 + u2 v2 - u3 v3``.
A vector is spacelike, timelike or lightlike according to the sign of
``v . v``; causal vectors with positive third coordinate are
future-pointing.

Isometries of the hyperbolic plane act on ``V`` through conjugation on
traceless 2x2 matrices, using the fixed basis

    e1 = [[1, 0], [0, -1]],  e2 = [[0, 1], [1, 0]],  e3 = [[0, 1], [-1, 0]]

which is orthonormal for the form ``(1/2) tr(v w)`` with signature
``(+, +, -)``.  Both parities of :class:`~crookedplanes.holonomy.ExtSL2`
map to the same conjugation, so the image always lies in SO(2,1); glide
reflections are the elements that reverse time orientation.

Every non-elliptic isometry fixes a line in ``V``.  The neutral vector on
that line, together with the contracting and expanding null eigenvectors,
forms the frame computed by :func:`neutral_frame`.  Orientation
conventions are fixed once and for all by :func:`oriented_volume`; all
handedness rules in the package refer to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CoordinateError, EllipticElementError, GeometryError
from .holonomy import (ExtSL2, Holonomy, IsometryClass, Word, evaluate_word,
                       length_from_element)

#: Gram matrix of the Minkowski form in coordinates.
ETA = np.diag([1.0, 1.0, -1.0])

#: Basis of traceless 2x2 matrices identifying them with Minkowski space.
E_BASIS = (
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
)

LORENTZ_TOL = 1e-9          # residual for M^T eta M = eta and det M = 1
CLASSIFY_TRACE_TOL = 1e-7   # parabolic band around trace 3
LIGHTLIKE_TOL = 1e-9

#: Reference timelike vector for handedness decisions.
V_REF = np.array([0.0, 0.0, 1.0])


class LorentzClass(str, Enum):
    TRANSVECTION = "transvection"
    PARABOLIC = "parabolic"
    GLIDE = "glide"
    ELLIPTIC = "elliptic"
    IDENTITY = "identity"


# ---------------------------------------------------------------------------
# The form, orientation and causal structure
# ---------------------------------------------------------------------------

def mdot(u, v):
    """Minkowski inner product, vectorized over leading axes of (..., 3)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


def oriented_volume(u, v, w) -> float:
    """Orientation form of Minkowski space; right-handed frames are positive.

    The sign is pinned by two requirements that propagate through the whole
    package: the neutral vector of the standard transvection
    diag-lift -> [[1,0,0],[0,cosh,sinh],[0,sinh,cosh]] must be +(1,0,0), and
    invariants of deformation-tangent cocycles must equal length derivatives
    with a plus sign.  Both force the form to be minus the coordinate
    determinant.
    """
    return -float(np.linalg.det(np.column_stack([u, v, w])))


def causal_character(v, tol: float = LIGHTLIKE_TOL) -> str:
    """One of "spacelike", "timelike", "lightlike" (within tol of the cone)."""
    v = np.asarray(v, dtype=float)
    q = float(mdot(v, v))
    scale = max(1.0, float(np.dot(v, v)))
    if abs(q) <= tol * scale:
        if np.allclose(v, 0.0):
            raise CoordinateError("zero vector has no causal character")
        return "lightlike"
    return "spacelike" if q > 0 else "timelike"


def is_future_pointing(v) -> bool:
    """Future-pointing causal vector: on or inside the cone with v3 > 0."""
    v = np.asarray(v, dtype=float)
    return causal_character(v) in ("timelike", "lightlike") and v[2] > 0


def normalize_null(v) -> np.ndarray:
    """Scale a lightlike vector to the future-pointing representative with
    third coordinate 1."""
    v = np.asarray(v, dtype=float)
    if abs(v[2]) <= LIGHTLIKE_TOL * max(1.0, float(np.max(np.abs(v)))):
        raise CoordinateError("null normalization requires nonzero v3")
    return v / v[2]


# ---------------------------------------------------------------------------
# Adjoint representation
# ---------------------------------------------------------------------------

def sl2_to_coords(m) -> np.ndarray:
    """Coordinates of a traceless 2x2 matrix in the fixed basis."""
    m = np.asarray(m, dtype=float)
    return np.array([m[0, 0],
                     (m[0, 1] + m[1, 0]) / 2.0,
                     (m[0, 1] - m[1, 0]) / 2.0])


def coords_to_sl2(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v[0] * E_BASIS[0] + v[1] * E_BASIS[1] + v[2] * E_BASIS[2]


def ad_to_lorentz(g: ExtSL2) -> np.ndarray:
    """Conjugation action of a lift on traceless matrices, as a 3x3 matrix.

    Both lifts ``P`` and ``iP`` act by ``v -> P v P^-1``, so parity does not
    enter; the image is always in SO(2,1).
    """
    p = g.mat
    det = p[0, 0] * p[1, 1] - p[0, 1] * p[1, 0]
    pinv = np.array([[p[1, 1], -p[0, 1]], [-p[1, 0], p[0, 0]]]) / det
    cols = [sl2_to_coords(p @ e @ pinv) for e in E_BASIS]
    return np.column_stack(cols)


def lorentz_inv(m) -> np.ndarray:
    """Exact inverse of a Lorentz matrix: eta M^T eta."""
    m = np.asarray(m, dtype=float)
    return ETA @ m.T @ ETA


def is_lorentz(m, tol: float = LORENTZ_TOL) -> bool:
    """Check membership in SO(2,1): form preservation and unit determinant."""
    m = np.asarray(m, dtype=float)
    residual = m.T @ ETA @ m - ETA
    return (float(np.max(np.abs(residual))) < tol
            and abs(float(np.linalg.det(m)) - 1.0) < tol)


def axial_vector(gen) -> np.ndarray:
    """Vector ``w`` whose infinitesimal rotation ``L_w`` equals ``gen``.

    ``L_w u = -eta (w x u)`` (Euclidean cross product) is the generator of
    so(2,1) attached to ``w`` under the orientation of
    :func:`oriented_volume`; this inverts that correspondence, symmetrizing
    over the redundant entries.
    """
    gen = np.asarray(gen, dtype=float)
    return np.array([
        (gen[1, 2] + gen[2, 1]) / 2.0,
        -(gen[0, 2] + gen[2, 0]) / 2.0,
        (gen[0, 1] - gen[1, 0]) / 2.0,
    ])


def classify(m, parity: int | None = None,
             tol: float = CLASSIFY_TRACE_TOL) -> LorentzClass:
    """Conjugacy class of a Lorentz matrix from its trace.

    Transvections have trace above 3, parabolics exactly 3, glides below -1
    together with reversal of time orientation.  The identity is reported
    separately from parabolics.  When the parity of an originating lift is
    supplied it is checked against the time behaviour.
    """
    m = np.asarray(m, dtype=float)
    tr = float(np.trace(m))
    time_reversing = m[2, 2] < 0
    if parity is not None and parity not in (0, 1):
        raise ValueError(f"parity must be 0 or 1, got {parity}")
    if parity is not None and bool(parity) != time_reversing:
        raise GeometryError(
            f"parity {parity} inconsistent with time behaviour (m33 = {m[2, 2]:.3g})")
    if time_reversing:
        if tr < -1.0 - tol:
            return LorentzClass.GLIDE
        return LorentzClass.ELLIPTIC
    if np.allclose(m, np.eye(3), rtol=0.0, atol=tol):
        return LorentzClass.IDENTITY
    if tr > 3.0 + tol:
        return LorentzClass.TRANSVECTION
    if tr >= 3.0 - tol:
        return LorentzClass.PARABOLIC
    return LorentzClass.ELLIPTIC


# ---------------------------------------------------------------------------
# Neutral frames
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NeutralFrame:
    """Contracting / neutral / expanding frame of a non-elliptic isometry.

    ``x_minus`` and ``x_plus`` are future-pointing lightlike, normalized to
    third coordinate 1, and satisfy ``M^2 x_minus = lam^2 x_minus`` and
    ``M^2 x_plus = lam^-2 x_plus`` with ``0 < lam^2 < 1`` in the hyperbolic
    classes.  ``x_zero`` spans the fixed line: unit spacelike for
    transvections and glides, Euclidean-unit (and parallel to
    ``x_plus = x_minus`` up to sign) for parabolics.  Its direction makes
    ``(v, M^2 v, x_zero)`` right-handed for every timelike ``v``.
    """

    x_minus: np.ndarray
    x_zero: np.ndarray
    x_plus: np.ndarray
    klass: LorentzClass

    def __post_init__(self):
        for name in ("x_minus", "x_zero", "x_plus"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _kernel_vector(m) -> np.ndarray:
    """Kernel direction of a rank-2 3x3 matrix via the largest cross product
    of two rows (exact deflation, no iteration)."""
    rows = np.asarray(m, dtype=float)
    best = None
    best_norm = -1.0
    for i in range(3):
        for j in range(i + 1, 3):
            c = np.cross(rows[i], rows[j])
            n = float(np.dot(c, c))
            if n > best_norm:
                best_norm = n
                best = c
    if best is None or best_norm <= 0.0:
        raise GeometryError("matrix has no well-defined rank-2 kernel")
    return best / math.sqrt(best_norm)


def _handed_sign(m2, candidate) -> float:
    vol = oriented_volume(V_REF, m2 @ V_REF, candidate)
    if vol == 0.0:
        raise GeometryError("degenerate handedness test")
    return 1.0 if vol > 0 else -1.0


def element_neutral_frame(g: ExtSL2) -> NeutralFrame:
    """Neutral frame of a lift's Lorentz image, in closed form.

    The fixed line of the conjugation action is spanned by the traceless
    part ``g - (tr g / 2) I`` of the lift, whose Minkowski square is
    exactly ``tr^2/4 - det``; the null eigendirections come from the 2x2
    eigenvectors.  This avoids the ill-conditioned 3x3 kernel extraction
    near parabolic elements, so invariants stay accurate up to the cusp
    boundary.
    """
    klass_sl2, _ = length_from_element(g)  # rejects elliptic input
    if klass_sl2 is IsometryClass.IDENTITY:
        raise GeometryError("identity has no neutral frame")
    tr = g.trace
    fixed = sl2_to_coords(g.mat - (tr / 2.0) * np.eye(2))
    m = ad_to_lorentz(g)
    m2 = m @ m

    if klass_sl2 is IsometryClass.PARABOLIC:
        x_zero = fixed / float(np.linalg.norm(fixed))
        x_zero = _handed_sign(m2, x_zero) * x_zero
        null = normalize_null(fixed)
        return NeutralFrame(x_minus=null, x_zero=x_zero, x_plus=null,
                            klass=LorentzClass.PARABOLIC)

    det = 1.0 if g.parity == 0 else -1.0
    disc = math.sqrt(tr * tr / 4.0 - det)   # sinh(l/2) or cosh(l/2)
    x_zero = fixed / disc
    x_zero = _handed_sign(m2, x_zero) * x_zero
    lam_big = tr / 2.0 + math.copysign(disc, tr)
    lam_small = det / lam_big
    x_plus = _null_from_eigenvector(g.mat, lam_big)
    x_minus = _null_from_eigenvector(g.mat, lam_small)
    klass = (LorentzClass.TRANSVECTION if g.parity == 0
             else LorentzClass.GLIDE)
    return NeutralFrame(x_minus=x_minus, x_zero=x_zero, x_plus=x_plus,
                        klass=klass)


def _null_from_eigenvector(mat, lam: float) -> np.ndarray:
    """Future null fixed direction attached to a 2x2 eigenvalue.

    The eigenvector ``v = (p, q)`` spans a rank-one traceless matrix
    ``v (Jv)^T`` whose coordinate vector is ``(-pq, (p^2-q^2)/2,
    (p^2+q^2)/2)``, automatically future-pointing.
    """
    cand1 = np.array([mat[0, 1], lam - mat[0, 0]])
    cand2 = np.array([lam - mat[1, 1], mat[1, 0]])
    v = cand1 if float(np.dot(cand1, cand1)) >= float(np.dot(cand2, cand2)) else cand2
    p, q = float(v[0]), float(v[1])
    return normalize_null(np.array([-p * q, (p * p - q * q) / 2.0,
                                    (p * p + q * q) / 2.0]))


def neutral_frame(m) -> NeutralFrame:
    """Compute the neutral frame of a non-elliptic, non-identity matrix.

    Raises :class:`EllipticElementError` for elliptic input and
    :class:`GeometryError` for the identity.  Near-parabolic hyperbolic
    matrices are intrinsically ill-conditioned here; when the originating
    lift is available, :func:`element_neutral_frame` is preferred.
    """
    m = np.asarray(m, dtype=float)
    klass = classify(m)
    if klass is LorentzClass.ELLIPTIC:
        raise EllipticElementError("elliptic Lorentz matrix has no neutral frame",
                                   isometry_class=klass)
    if klass is LorentzClass.IDENTITY:
        raise GeometryError("identity has no neutral frame")
    m2 = m @ m

    fixed = _kernel_vector(m - np.eye(3))
    if klass is LorentzClass.PARABOLIC:
        x_zero = fixed / float(np.linalg.norm(fixed))
        x_zero = _handed_sign(m2, x_zero) * x_zero
        null = normalize_null(fixed)
        return NeutralFrame(x_minus=null, x_zero=x_zero, x_plus=null, klass=klass)

    # Hyperbolic: eigenvalues are 1, lam, 1/lam with lam = e^-l for
    # transvections and -e^-l for glides.
    tr = float(np.trace(m))
    if klass is LorentzClass.TRANSVECTION:
        cosh_l = (tr - 1.0) / 2.0
        sign = 1.0
    else:
        cosh_l = (1.0 - tr) / 2.0
        sign = -1.0
    ell = math.acosh(max(1.0, cosh_l))
    lam_contracting = sign * math.exp(-ell)
    x_minus = normalize_null(_kernel_vector(m - lam_contracting * np.eye(3)))
    x_plus = normalize_null(_kernel_vector(m - (1.0 / lam_contracting) * np.eye(3)))
    norm = math.sqrt(float(mdot(fixed, fixed)))
    x_zero = fixed / norm
    x_zero = _handed_sign(m2, x_zero) * x_zero
    return NeutralFrame(x_minus=x_minus, x_zero=x_zero, x_plus=x_plus, klass=klass)


# ---------------------------------------------------------------------------
# The ideal quadrilateral of a holonomy
# ---------------------------------------------------------------------------

def ideal_quadrilateral(h: Holonomy) -> np.ndarray:
    """Future null representatives of the four ideal vertices, as rows:

        x+(B),  x-(A),  A(x+(B)),  X(-x+(B)),

    each normalized to third coordinate 1.  For a cusped boundary the fixed
    null direction serves as both x+ and x-.  Consistency of the vertex
    identifications (A(x+B) is a positive multiple of X^2(x+B)) is verified.
    """
    ma = ad_to_lorentz(h.A)
    mx = ad_to_lorentz(h.X)
    xp_b = element_neutral_frame(h.B).x_plus
    xm_a = element_neutral_frame(h.A).x_minus
    a_xp_b = normalize_null(ma @ xp_b)
    x_minus_xp_b = normalize_null(mx @ (-xp_b))
    xx = normalize_null(mx @ (mx @ xp_b))
    if not np.allclose(a_xp_b, xx, rtol=0.0, atol=1e-8):
        raise GeometryError("vertex identification A(x+B) = X^2(x+B) failed")
    return np.vstack([xp_b, xm_a, a_xp_b, x_minus_xp_b])


def _ray_angles(rays) -> np.ndarray:
    rays = np.asarray(rays, dtype=float)
    return np.arctan2(rays[:, 1], rays[:, 0])


def _ccw_arc(start: float, end: float) -> float:
    """Width of the counterclockwise arc from angle start to angle end."""
    return (end - start) % (2 * math.pi)


def _outside_arc(angles, i: int, j: int):
    """The open boundary arc cut off by the geodesic (i, j) on the side away
    from the remaining two vertices, or None if the vertices straddle it."""
    others = [k for k in range(4) if k not in (i, j)]
    width_ij = _ccw_arc(angles[i], angles[j])
    inside_ij = [k for k in others
                 if 0 < _ccw_arc(angles[i], angles[k]) < width_ij]
    if not inside_ij:
        return (angles[i], width_ij)
    if len(inside_ij) == 2:
        return (angles[j], _ccw_arc(angles[j], angles[i]))
    return None


def _arcs_disjoint(a, b, tol: float = 1e-10) -> bool:
    """Whether two open circle arcs (start, width) have disjoint interiors."""
    start_a, width_a = a
    start_b, width_b = b
    # offset of b's start ccw from a's start
    off = _ccw_arc(start_a, start_b)
    if off < width_a - tol and width_a - off > tol:
        return False
    off2 = _ccw_arc(start_b, start_a)
    return not (off2 < width_b - tol and width_b - off2 > tol)


def halfplanes_disjoint(rays) -> bool:
    """Disjointness of the four halfplanes cut off by the quadrilateral sides.

    ``rays`` are the four ideal vertices in the order produced by
    :func:`ideal_quadrilateral`.  Each side bounds the halfplane on the side
    away from the quadrilateral; the test reduces to pairwise disjointness
    of the corresponding open boundary arcs (shared endpoints allowed).
    """
    angles = _ray_angles(rays)
    # sides as vertex index pairs: the A-side, its image under A^-1,
    # the X-side and its image under X^-1
    sides = [(1, 2), (1, 0), (3, 2), (0, 3)]
    arcs = []
    for i, j in sides:
        arc = _outside_arc(angles, i, j)
        if arc is None:
            return False
        arcs.append(arc)
    for i in range(4):
        for j in range(i + 1, 4):
            if not _arcs_disjoint(arcs[i], arcs[j]):
                return False
    return True


def halfplane_template_check(h: Holonomy) -> bool:
    """Whether the four halfplanes bounded by the sides of the ideal
    quadrilateral of ``h`` are pairwise disjoint."""
    return halfplanes_disjoint(ideal_quadrilateral(h))


def lorentz_generators(h: Holonomy) -> dict[str, np.ndarray]:
    """Adjoint images of the four generators."""
    return {letter: ad_to_lorentz(h.generator(letter)) for letter in "ABXY"}


def lorentz_word(h: Holonomy, word: Word) -> np.ndarray:
    """Adjoint image of a word (via the exact lift product)."""
    return ad_to_lorentz(evaluate_word(h, word))
