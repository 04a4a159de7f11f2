r"""Cocycles, Margulis invariants and the four-sided deformation cone.

An affine deformation of a holonomy assigns a translational part to every
group element through a cocycle ``u(gh) = u(g) + L(g) u(h)``, determined
by its values on the free generators ``A`` and ``X``.  The Margulis
invariant of a non-elliptic word ``w`` is the neutral projection

    alpha(w) = u(w) . w0

with ``w0`` the neutral vector of the Lorentz image of ``w``.  It is a
class function, vanishes on coboundaries, and as a function of the
cohomology class the triple ``(alpha_A, alpha_X, alpha_Y)`` is a linear
isomorphism onto R^3.  The four boundary/one-sided invariants satisfy one
linear relation with coefficients built from the surface lengths, and the
deformations whose four invariants share a strict sign form an open
four-sided cone with two opposite components.

Invariants of cocycles tangent to paths of hyperbolic structures equal the
time derivatives of geodesic length functions; :func:`tangent_cocycle`
realizes that identification by central differences.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CoordinateError
from .holonomy import FrickeCoords, Holonomy, Word, evaluate_word, fricke_to_holonomy
from .lorentz import (ad_to_lorentz, axial_vector, element_neutral_frame,
                      lorentz_inv, mdot)

#: Absolute tolerance on invariants normalized by the cocycle norm when
#: deciding the sign pattern of a deformation.
SIGN_ZERO_TOL = 1e-10

#: Default step and degeneracy threshold for tangent cocycles.
TANGENT_STEP = 1e-5
STATIONARY_TOL = 1e-13

WORD_A = Word.from_string("A")
WORD_B = Word.from_string("B")
WORD_X = Word.from_string("X")
WORD_Y = Word.from_string("Y")


class ConeClass(str, Enum):
    INTERIOR_PLUS = "interior_plus"
    INTERIOR_MINUS = "interior_minus"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


# ---------------------------------------------------------------------------
# Cocycles and affine deformations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cocycle:
    """Translational parts on the free generators A and X."""

    u_A: np.ndarray
    u_X: np.ndarray

    def __post_init__(self):
        for name in ("u_A", "u_X"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (3,):
                raise ValueError(f"{name} must be a 3-vector")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @staticmethod
    def zero() -> "Cocycle":
        return Cocycle(np.zeros(3), np.zeros(3))

    def norm(self) -> float:
        """Euclidean norm of the generator values."""
        return math.sqrt(float(np.dot(self.u_A, self.u_A)
                               + np.dot(self.u_X, self.u_X)))

    def scaled(self, c: float) -> "Cocycle":
        return Cocycle(c * self.u_A, c * self.u_X)

    def __add__(self, other: "Cocycle") -> "Cocycle":
        return Cocycle(self.u_A + other.u_A, self.u_X + other.u_X)

    def __neg__(self) -> "Cocycle":
        return self.scaled(-1.0)


def cocycle_from_vertices(p0, p_A, p_X) -> Cocycle:
    """The cocycle with u(A) = p_A - p0 and u(X) = p_X - p0.

    Vertices are points of Minkowski space relative to the fixed origin;
    equal vertices give the zero cocycle.
    """
    p0 = np.asarray(p0, dtype=float)
    return Cocycle(np.asarray(p_A, dtype=float) - p0,
                   np.asarray(p_X, dtype=float) - p0)


def coboundary(v, holonomy: Holonomy) -> Cocycle:
    """The coboundary of a vector: u(g) = v - L(g) v on each generator."""
    v = np.asarray(v, dtype=float)
    la = ad_to_lorentz(holonomy.A)
    lx = ad_to_lorentz(holonomy.X)
    return Cocycle(v - la @ v, v - lx @ v)


@dataclass(frozen=True)
class AffineDeformation:
    """A holonomy together with a cocycle, acting affinely on Minkowski space.

    Lorentz images of the four generators and their inverses are cached at
    construction.  The affine action of a word ``w`` is
    ``p -> L(w) p + u(w)`` with the origin at 0.
    """

    holonomy: Holonomy
    cocycle: Cocycle

    def __post_init__(self):
        cache: dict[str, np.ndarray] = {}
        for letter in "ABXY":
            m = ad_to_lorentz(self.holonomy.generator(letter))
            cache[letter] = m
            cache[letter.lower()] = lorentz_inv(m)
        object.__setattr__(self, "_lorentz_cache", cache)

    def lorentz(self, word: Word) -> np.ndarray:
        """Lorentz image of a word."""
        out = np.eye(3)
        cache = self._lorentz_cache
        for letter, sign in word.letters:
            out = out @ cache[letter if sign > 0 else letter.lower()]
        return out

    def translation(self, word: Word) -> np.ndarray:
        """Cocycle value on a word (its affine translational part)."""
        return evaluate_cocycle(self, word)

    def apply(self, word: Word, points) -> np.ndarray:
        """Affine image of one point or an (n, 3) array of points."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.lorentz(word).T + self.translation(word)


def evaluate_cocycle(d: AffineDeformation, word: Word) -> np.ndarray:
    """Extend the cocycle to an arbitrary word by the cocycle rule.

    The word is rewritten over {A, X}; inverses use
    u(g^-1) = -L(g)^-1 u(g).
    """
    cache = d._lorentz_cache
    values = {("A", 1): d.cocycle.u_A, ("X", 1): d.cocycle.u_X,
              ("A", -1): -(cache["a"] @ d.cocycle.u_A),
              ("X", -1): -(cache["x"] @ d.cocycle.u_X)}
    total = np.zeros(3)
    left = np.eye(3)
    for letter, sign in word.to_ax().letters:
        total = total + left @ values[(letter, sign)]
        left = left @ cache[letter if sign > 0 else letter.lower()]
    return total


# ---------------------------------------------------------------------------
# Margulis invariants
# ---------------------------------------------------------------------------

def margulis_invariant(d: AffineDeformation, word: Word) -> float:
    """Neutral projection of the translational part of a word.

    Raises :class:`~crookedplanes.errors.EllipticElementError` (carrying the
    classification) if the word's image is elliptic, and
    :class:`~crookedplanes.errors.GeometryError` for the identity.  For
    parabolic images only the sign is meaningful; the neutral vector's
    scale is conventional.
    """
    frame = element_neutral_frame(evaluate_word(d.holonomy, word))
    return float(mdot(d.translation(word), frame.x_zero))


@dataclass(frozen=True)
class MuCoords:
    """Invariants of the four distinguished curves.

    ``(alpha_A, alpha_X, alpha_Y)`` are linear coordinates on cohomology;
    ``alpha_B`` is computed directly from the word B and is redundant given
    the linear relation whenever the B-end is not a cusp.
    """

    alpha_A: float
    alpha_X: float
    alpha_Y: float
    alpha_B: float

    @property
    def triple(self) -> np.ndarray:
        return np.array([self.alpha_A, self.alpha_X, self.alpha_Y])

    @property
    def quadruple(self) -> np.ndarray:
        return np.array([self.alpha_A, self.alpha_B, self.alpha_X, self.alpha_Y])


def mu_coords(d: AffineDeformation) -> MuCoords:
    """Invariants of A, X, Y (the linear coordinates) plus B."""
    return MuCoords(
        alpha_A=margulis_invariant(d, WORD_A),
        alpha_X=margulis_invariant(d, WORD_X),
        alpha_Y=margulis_invariant(d, WORD_Y),
        alpha_B=margulis_invariant(d, WORD_B),
    )


def _lengths_of(d: AffineDeformation) -> FrickeCoords:
    fricke = d.holonomy.fricke
    if fricke is None:
        raise CoordinateError("deformation's holonomy carries no length data")
    return fricke


def relation_coefficients(fricke: FrickeCoords) -> np.ndarray:
    """Coefficients (c_A, c_B, c_X, c_Y) of the linear relation

        c_A alpha_A + c_B alpha_B = c_X alpha_X + c_Y alpha_Y

    obtained by differentiating the trace identity along deformations."""
    return np.array([
        math.sinh(fricke.ell_A / 2),
        math.sinh(fricke.ell_B / 2),
        2 * math.cosh(fricke.ell_X / 2) * math.sinh(fricke.ell_Y / 2),
        2 * math.sinh(fricke.ell_X / 2) * math.cosh(fricke.ell_Y / 2),
    ])


def relation_residual(d: AffineDeformation) -> float:
    """Absolute residual of the linear relation on the four invariants."""
    mu = mu_coords(d)
    c = relation_coefficients(_lengths_of(d))
    return abs(c[0] * mu.alpha_A + c[1] * mu.alpha_B
               - c[2] * mu.alpha_X - c[3] * mu.alpha_Y)


def cone_membership(d: AffineDeformation,
                    zero_tol: float = SIGN_ZERO_TOL) -> ConeClass:
    """Position of the deformation relative to the proper cone.

    Classifies by the strict signs of the four invariants, normalized by
    the cocycle norm: all positive / all negative gives an interior
    component, any vanishing invariant (with the rest of one sign) the
    boundary, mixed signs the outside.
    """
    scale = d.cocycle.norm()
    if scale == 0.0:
        return ConeClass.BOUNDARY
    values = mu_coords(d).quadruple / scale
    pos = bool(np.any(values > zero_tol))
    neg = bool(np.any(values < -zero_tol))
    if pos and neg:
        return ConeClass.OUTSIDE
    if bool(np.any(np.abs(values) <= zero_tol)):
        return ConeClass.BOUNDARY
    return ConeClass.INTERIOR_PLUS if pos else ConeClass.INTERIOR_MINUS


def classify_mu_by_signs(mu_triple, fricke: FrickeCoords) -> ConeClass:
    """Cone position of a candidate (alpha_A, alpha_X, alpha_Y) triple,
    computing alpha_B from the linear relation (requires ell_B > 0)."""
    a, x, y = (float(v) for v in mu_triple)
    c = relation_coefficients(fricke)
    if c[1] == 0.0:
        raise CoordinateError("alpha_B is not determined by the relation at a cusp")
    b = (c[2] * x + c[3] * y - c[0] * a) / c[1]
    values = np.array([a, b, x, y])
    pos = bool(np.any(values > 0.0))
    neg = bool(np.any(values < 0.0))
    if pos and neg:
        return ConeClass.OUTSIDE
    if bool(np.any(values == 0.0)):
        return ConeClass.BOUNDARY
    return ConeClass.INTERIOR_PLUS if pos else ConeClass.INTERIOR_MINUS


def classify_mu_by_inequality(mu_triple, fricke: FrickeCoords) -> ConeClass:
    """Cone position of a mu-triple by the eliminated-invariant inequality.

    With alpha_B eliminated through the relation, membership in the
    positive component reads

        0 < alpha_A < 2 csch(lA/2) (cosh(lX/2) sinh(lY/2) alpha_X
                                    + sinh(lX/2) cosh(lY/2) alpha_Y)

    together with alpha_X > 0 and alpha_Y > 0; the negative component is
    its image under negation.  Requires ell_A, ell_B > 0.
    """
    a, x, y = (float(v) for v in mu_triple)
    if fricke.ell_A == 0.0 or fricke.ell_B == 0.0:
        raise CoordinateError("the inequality form requires both ends non-cusped")
    csch_a = 1.0 / math.sinh(fricke.ell_A / 2)
    bound = (2 * csch_a * math.cosh(fricke.ell_X / 2) * math.sinh(fricke.ell_Y / 2) * x
             + 2 * csch_a * math.sinh(fricke.ell_X / 2) * math.cosh(fricke.ell_Y / 2) * y)
    if x > 0 and y > 0 and 0 < a < bound:
        return ConeClass.INTERIOR_PLUS
    if x < 0 and y < 0 and bound < a < 0:
        return ConeClass.INTERIOR_MINUS
    if (x >= 0 and y >= 0 and 0 <= a <= bound) or \
       (x <= 0 and y <= 0 and bound <= a <= 0):
        return ConeClass.BOUNDARY
    return ConeClass.OUTSIDE


# ---------------------------------------------------------------------------
# The four rays and the vertex-triple formula
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConfigurationRays:
    """Null rays and neutral vectors entering the vertex constructions.

    ``xp_B, xm_A, xp_A`` are future null with third coordinate 1;
    ``a_xp_B = A(x+B)`` and ``x_minus_xp_B = X(-x+B)`` are the literal
    (unrescaled) images, so that coefficient formulas written in terms of
    them hold exactly.  The neutral vectors belong to A, B, X, Y in the
    fixed handedness convention.
    """

    xp_B: np.ndarray
    xm_A: np.ndarray
    xp_A: np.ndarray
    a_xp_B: np.ndarray
    x_minus_xp_B: np.ndarray
    n_A: np.ndarray
    n_B: np.ndarray
    n_X: np.ndarray
    n_Y: np.ndarray
    lorentz_X: np.ndarray


def configuration_rays(h: Holonomy) -> ConfigurationRays:
    """Collect the fixed null rays and neutral vectors of a holonomy."""
    ma, mx = ad_to_lorentz(h.A), ad_to_lorentz(h.X)
    fa, fb = element_neutral_frame(h.A), element_neutral_frame(h.B)
    fx, fy = element_neutral_frame(h.X), element_neutral_frame(h.Y)
    return ConfigurationRays(
        xp_B=fb.x_plus,
        xm_A=fa.x_minus,
        xp_A=fa.x_plus,
        a_xp_B=ma @ fb.x_plus,
        x_minus_xp_B=mx @ (-fb.x_plus),
        n_A=fa.x_zero, n_B=fb.x_zero, n_X=fx.x_zero, n_Y=fy.x_zero,
        lorentz_X=mx,
    )


def ray_vertices(h: Holonomy, ray: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vertex triple (p0, p_A, p_X) generating the requested cone edge.

    The four edges of the positive cone are hit, with unit coefficient, by

        ray 1: (-X(-x+B), 0, 0)     alpha_Y = alpha_B = 0
        ray 2: (0, A(x+B), 0)       alpha_X = alpha_B = 0
        ray 3: (0, -x+A, 0)         alpha_A = alpha_X = 0
        ray 4: (x-A, 0, 0)          alpha_A = alpha_Y = 0
    """
    rays = configuration_rays(h)
    zero = np.zeros(3)
    if ray == 1:
        return -rays.x_minus_xp_B, zero, zero
    if ray == 2:
        return zero, rays.a_xp_B.copy(), zero
    if ray == 3:
        return zero, -rays.xp_A, zero
    if ray == 4:
        return rays.xm_A.copy(), zero, zero
    raise ValueError(f"ray index must be 1..4, got {ray}")


def ray_representative(h: Holonomy, ray: int) -> Cocycle:
    """Cocycle spanning one of the four edge rays of the positive cone."""
    return cocycle_from_vertices(*ray_vertices(h, ray))


def mu_from_triple_formula(h: Holonomy, coefficients) -> np.ndarray:
    """Invariant triple of a quadrant-coefficient cocycle, in closed form.

    ``coefficients = (r0, s0, rA, sA, rX, sX)`` are the nonnegative
    coefficients of the vertices

        p0 = r0 x-A - s0 X(-x+B)
        pA = rA A(x+B) - sA x-A
        pX = rX X(-x+B) - sX A(x+B)

    and the returned triple is (alpha_A, alpha_X, alpha_Y), evaluated
    without forming the cocycle.  Serves as an independent cross-check of
    :func:`mu_coords`.
    """
    r0, s0, rA, sA, rX, sX = (float(c) for c in coefficients)
    rays = configuration_rays(h)
    xbar_xm_A = lorentz_inv(rays.lorentz_X) @ rays.xm_A
    alpha_a = mdot(rA * rays.xp_B + s0 * rays.x_minus_xp_B, rays.n_A)
    alpha_x = mdot(-(rX + s0) * rays.xp_B - sX * rays.a_xp_B - r0 * rays.xm_A,
                   rays.n_X)
    alpha_y = mdot((rA + rX + sX) * rays.xp_B - sA * xbar_xm_A, rays.n_Y)
    return np.array([float(alpha_a), float(alpha_x), float(alpha_y)])


# ---------------------------------------------------------------------------
# Tangent cocycles of deformation paths
# ---------------------------------------------------------------------------

def tangent_cocycle(path, t0: float = 0.0, step: float = TANGENT_STEP) -> Cocycle:
    """Cocycle tangent to a path of hyperbolic structures.

    ``path`` maps a parameter to :class:`FrickeCoords`.  For each free
    generator the one-parameter family of Lorentz images gives a central
    difference generator ``(M(t0+h) - M(t0-h)) M(t0)^-1 / (2h)`` in
    so(2,1), converted to a vector by :func:`axial_vector`.  The invariant
    of the resulting cocycle on any word approximates the derivative of
    that word's geodesic length along the path.

    A stationary path (to machine precision) produces the zero cocycle and
    a warning.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    h_plus = fricke_to_holonomy(path(t0 + step))
    h_mid = fricke_to_holonomy(path(t0))
    h_minus = fricke_to_holonomy(path(t0 - step))
    values = {}
    moved = 0.0
    for letter in "AX":
        m_plus = ad_to_lorentz(h_plus.generator(letter))
        m_mid_inv = lorentz_inv(ad_to_lorentz(h_mid.generator(letter)))
        m_minus = ad_to_lorentz(h_minus.generator(letter))
        gen = (m_plus @ m_mid_inv - m_minus @ m_mid_inv) / (2 * step)
        moved = max(moved, float(np.max(np.abs(gen))))
        values[letter] = axial_vector(gen)
    if moved < STATIONARY_TOL:
        warnings.warn("stationary deformation path; tangent cocycle is zero",
                      stacklevel=2)
        return Cocycle.zero()
    return Cocycle(values["A"], values["X"])
