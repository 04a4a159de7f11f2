r"""Holonomy representations of the two-holed cross-surface.

The two-holed cross-surface (a projective plane minus two disjoint discs)
has free fundamental group of rank two.  Four distinguished curve classes
generate it redundantly: the boundary curves ``A`` and ``B`` and the two
one-sided curves ``X`` and ``Y``, subject to

    X Y = A,        Y^-1 X = B.

A hyperbolic structure sends ``X`` and ``Y`` to glide-reflections and
``A``, ``B`` to transvections (or parabolics, when the corresponding end
is a cusp).  Lifting to SL(2, C), orientation-preserving isometries become
real matrices and orientation-reversing ones purely imaginary matrices
``i P`` with ``det P = -1``.  This module works with the real matrix plus
a parity flag (:class:`ExtSL2`) so that all sign bookkeeping is exact.

Marked hyperbolic structures are coordinatized by the boundary lengths
``ell_A, ell_B >= 0`` and the one-sided geodesic lengths
``ell_X, ell_Y > 0``, constrained by the length identity

    cosh(ell_A/2) + cosh(ell_B/2) = 2 sinh(ell_X/2) sinh(ell_Y/2),

together with the angle ``theta`` at which the ``X`` and ``Y`` geodesics
cross.  :func:`fricke_complete` solves for ``ell_Y`` and ``theta`` from the
three free lengths, and :func:`fricke_to_holonomy` produces the explicit
matrix representatives, normalized so that the axis of ``Y`` is the
imaginary axis of the upper halfplane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CoordinateError, EllipticElementError

# Identity residuals: direct algebraic substitutions must hold to
# SUBSTITUTION_TOL, quantities that pass through a solve or an
# eigendecomposition to DERIVED_TOL.
SUBSTITUTION_TOL = 1e-12
DERIVED_TOL = 1e-9

# Trace-based classification margin (parabolic vs. hyperbolic).
TRACE_CLASS_TOL = 1e-7

GENERATOR_LETTERS = ("A", "B", "X", "Y")


class IsometryClass(str, Enum):
    """Conjugacy type of a non-elliptic isometry of the hyperbolic plane."""

    TRANSVECTION = "transvection"
    PARABOLIC = "parabolic"
    GLIDE = "glide"
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"


# ---------------------------------------------------------------------------
# Extended SL(2) elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtSL2:
    """A lift of a hyperbolic-plane isometry to SL(2, C).

    ``parity == 0`` means the element is the real matrix ``mat`` itself
    (``det = +1``); ``parity == 1`` means the element is ``i * mat`` with
    ``det mat = -1``.  Products track the sign exactly: the product of two
    odd elements is ``-(P @ Q)`` with even parity.
    """

    mat: np.ndarray
    parity: int

    def __post_init__(self):
        m = np.array(self.mat, dtype=float)
        m.flags.writeable = False
        object.__setattr__(self, "mat", m)
        if self.parity not in (0, 1):
            raise ValueError(f"parity must be 0 or 1, got {self.parity}")
        want = 1.0 if self.parity == 0 else -1.0
        det = float(np.linalg.det(m))
        if abs(det - want) > 1e-6 * max(1.0, abs(det)):
            raise CoordinateError(
                f"parity {self.parity} requires det {want:+.0f}, got {det!r}")

    @staticmethod
    def identity() -> "ExtSL2":
        return ExtSL2(np.eye(2), 0)

    @property
    def trace(self) -> float:
        """Trace of the real matrix part (the full trace is ``i*trace`` for
        odd parity)."""
        return float(self.mat[0, 0] + self.mat[1, 1])

    def __matmul__(self, other: "ExtSL2") -> "ExtSL2":
        sign = -1.0 if (self.parity and other.parity) else 1.0
        return ExtSL2(sign * (self.mat @ other.mat),
                      (self.parity + other.parity) % 2)

    def inv(self) -> "ExtSL2":
        det = float(np.linalg.det(self.mat))
        adj = np.array([[self.mat[1, 1], -self.mat[0, 1]],
                        [-self.mat[1, 0], self.mat[0, 0]]])
        minv = adj / det
        # (iP)^-1 = i(-P^-1): odd inverses pick up a sign.
        if self.parity:
            return ExtSL2(-minv, 1)
        return ExtSL2(minv, 0)

    def is_close(self, other: "ExtSL2", tol: float = SUBSTITUTION_TOL) -> bool:
        return (self.parity == other.parity
                and bool(np.allclose(self.mat, other.mat, rtol=0.0, atol=tol)))


# ---------------------------------------------------------------------------
# Words in the generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    """A word in the generators A, B, X, Y and their inverses.

    Compact string form uses one character per letter, lowercase for the
    inverse: ``"AXy"`` is ``A X Y^-1``.
    """

    letters: tuple[tuple[str, int], ...]

    @staticmethod
    def from_string(s: str) -> "Word":
        out = []
        for ch in s:
            if ch.isspace():
                continue
            up = ch.upper()
            if up not in GENERATOR_LETTERS:
                raise ValueError(f"unknown generator letter {ch!r}")
            out.append((up, 1 if ch.isupper() else -1))
        return Word(tuple(out))

    def __str__(self) -> str:
        return "".join(l if s > 0 else l.lower() for l, s in self.letters) or "1"

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((l, -s) for l, s in reversed(self.letters)))

    def reduced(self) -> "Word":
        """Freely reduce (cancel adjacent inverse pairs)."""
        out: list[tuple[str, int]] = []
        for letter in self.letters:
            if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
                out.pop()
            else:
                out.append(letter)
        return Word(tuple(out))

    def to_ax(self) -> "Word":
        """Rewrite over the free generating set {A, X} and reduce.

        Uses Y = X^-1 A and B = A^-1 X^2, which follow from the defining
        relations X Y = A and Y^-1 X = B.
        """
        subst = {
            "A": (("A", 1),),
            "X": (("X", 1),),
            "Y": (("X", -1), ("A", 1)),
            "B": (("A", -1), ("X", 1), ("X", 1)),
        }
        out: list[tuple[str, int]] = []
        for letter, sign in self.letters:
            piece = subst[letter]
            if sign < 0:
                piece = tuple((l, -s) for l, s in reversed(piece))
            out.extend(piece)
        return Word(tuple(out)).reduced()


def reduced_words(letters: tuple[str, ...], max_length: int):
    """Yield all nonempty freely reduced words over ``letters`` and inverses,
    of length at most ``max_length``, in breadth-first order."""
    frontier: list[Word] = [Word(())]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for letter in letters:
                for sign in (1, -1):
                    if w.letters and w.letters[-1] == (letter, -sign):
                        continue
                    nxt.append(Word(w.letters + ((letter, sign),)))
        yield from nxt
        frontier = nxt


# ---------------------------------------------------------------------------
# Fricke coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrickeCoords:
    """Length-and-angle coordinates of a marked hyperbolic structure.

    ``ell_A`` and ``ell_B`` are boundary lengths (0 means the end is a
    cusp), ``ell_X`` and ``ell_Y`` the lengths of the two one-sided
    geodesics, and ``theta`` in (0, pi) their crossing angle.
    """

    ell_A: float
    ell_B: float
    ell_X: float
    ell_Y: float
    theta: float

    def __post_init__(self):
        if self.ell_A < 0 or self.ell_B < 0:
            raise CoordinateError("boundary lengths must be >= 0")
        if self.ell_X <= 0 or self.ell_Y <= 0:
            raise CoordinateError("one-sided geodesic lengths must be > 0")
        if not (0.0 < self.theta < math.pi):
            raise CoordinateError(f"theta must lie in (0, pi), got {self.theta}")
        res = self.length_identity_residual()
        if res >= DERIVED_TOL:
            raise CoordinateError(
                f"length identity residual {res:.3e} exceeds {DERIVED_TOL}")

    def length_identity_residual(self) -> float:
        return abs(math.cosh(self.ell_A / 2) + math.cosh(self.ell_B / 2)
                   - 2 * math.sinh(self.ell_X / 2) * math.sinh(self.ell_Y / 2))


def fricke_complete(ell_A: float, ell_B: float, ell_X: float) -> FrickeCoords:
    """Complete the three free lengths to full coordinates.

    ``ell_Y`` is solved from the length identity and ``theta`` from the
    difference of the boundary traces ``a = -2 cosh(ell_A/2)`` and
    ``b = -2 cosh(ell_B/2)``:

        cos(theta) = (b - a) / (4 cosh(ell_X/2) cosh(ell_Y/2)).

    Raises :class:`CoordinateError` if the inputs are out of range or if
    the solved angle is degenerate (``|cos theta| >= 1``).
    """
    if ell_A < 0 or ell_B < 0:
        raise CoordinateError("boundary lengths must be >= 0")
    if ell_X <= 0:
        raise CoordinateError("ell_X must be > 0")
    sinh_y2 = (math.cosh(ell_A / 2) + math.cosh(ell_B / 2)) / (2 * math.sinh(ell_X / 2))
    ell_Y = 2 * math.asinh(sinh_y2)
    cos_theta = ((math.cosh(ell_A / 2) - math.cosh(ell_B / 2))
                 / (2 * math.cosh(ell_X / 2) * math.cosh(ell_Y / 2)))
    if abs(cos_theta) >= 1.0:
        raise CoordinateError(
            f"inconsistent coordinates: solved cos(theta) = {cos_theta!r}")
    return FrickeCoords(ell_A, ell_B, ell_X, ell_Y, math.acos(cos_theta))


# ---------------------------------------------------------------------------
# Trace coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceCoords:
    """The quadruple (a, b, x, y) of generator traces.

    ``a = tr A``, ``b = tr B``, while ``x`` and ``y`` are the imaginary
    traces of the odd lifts (the traces of their real matrix parts).  Every
    character satisfies a + b + x*y = 0.
    """

    a: float
    b: float
    x: float
    y: float

    def identity_residual(self) -> float:
        return abs(self.a + self.b + self.x * self.y)


def character_in_set(t: TraceCoords, tol: float = DERIVED_TOL) -> bool:
    """Whether (a, b, x, y) lies in the character set of the surface:
    the trace identity holds and both boundary traces satisfy |a|, |b| >= 2.
    """
    return (t.identity_residual() < tol
            and abs(t.a) >= 2.0 and abs(t.b) >= 2.0)


#: The four sign characters of the rank-two free group, encoded by their
#: values (chi(X), chi(Y)).  A and B transform by the product chi(X)chi(Y).
SIGN_CHARACTERS = ((1, 1), (-1, -1), (-1, 1), (1, -1))


def sign_action(t: TraceCoords, chi: tuple[int, int]) -> TraceCoords:
    """Act on trace coordinates by the sign character ``chi = (sx, sy)``.

    The three nontrivial characters give (a,b,-x,-y), (-a,-b,-x,y) and
    (-a,-b,x,-y); the trace identity is preserved exactly.
    """
    sx, sy = chi
    if sx not in (-1, 1) or sy not in (-1, 1):
        raise ValueError(f"sign character must have values +-1, got {chi}")
    return TraceCoords(sx * sy * t.a, sx * sy * t.b, sx * t.x, sy * t.y)


# ---------------------------------------------------------------------------
# Holonomy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Holonomy:
    """Lifted holonomy on the four generators.

    ``X`` and ``Y`` are odd (glide-reflections), ``A = X Y`` and
    ``B = Y^-1 X`` even.  The stored ``fricke`` coordinates are the ones
    the representation was built from, when available.
    """

    X: ExtSL2
    Y: ExtSL2
    A: ExtSL2
    B: ExtSL2
    fricke: FrickeCoords | None = None

    def generator(self, letter: str) -> ExtSL2:
        return getattr(self, letter)


def fricke_to_holonomy(fricke: FrickeCoords) -> Holonomy:
    """Build the normalized matrix representatives for the given lengths.

    ``Y`` is the glide-reflection ``i diag(e^{lY/2}, -e^{-lY/2})`` along the
    imaginary axis; ``X`` the glide-reflection of length ``ell_X`` whose
    axis crosses it at angle ``theta``.  The resulting trace coordinates
    satisfy x, y > 0 and a, b <= -2, fixing one component of the character
    set; the sign characters reach the other components.
    """
    shx, chx = math.sinh(fricke.ell_X / 2), math.cosh(fricke.ell_X / 2)
    cos_t, sin_t = math.cos(fricke.theta), math.sin(fricke.theta)
    px = np.array([[shx + cos_t * chx, sin_t * chx],
                   [sin_t * chx, shx - cos_t * chx]])
    ey = math.exp(fricke.ell_Y / 2)
    py = np.array([[ey, 0.0], [0.0, -1.0 / ey]])
    X = ExtSL2(px, 1)
    Y = ExtSL2(py, 1)
    return Holonomy(X=X, Y=Y, A=X @ Y, B=Y.inv() @ X, fricke=fricke)


def trace_coords(h: Holonomy) -> TraceCoords:
    """Read off the trace coordinates of a holonomy."""
    return TraceCoords(a=h.A.trace, b=h.B.trace, x=h.X.trace, y=h.Y.trace)


def evaluate_word(h: Holonomy, word: Word) -> ExtSL2:
    """Evaluate a word in the generator lifts, with exact sign tracking."""
    out = ExtSL2.identity()
    for letter, sign in word.letters:
        g = h.generator(letter)
        out = out @ (g if sign > 0 else g.inv())
    return out


def length_from_element(g: ExtSL2) -> tuple[IsometryClass, float]:
    """Conjugacy class and translation length of a non-elliptic element.

    Even parity: |tr| > 2 gives a transvection of length 2 acosh(|tr|/2),
    |tr| = 2 a parabolic (length 0).  Odd parity: a glide-reflection of
    length 2 asinh(|tr|/2).  Raises :class:`EllipticElementError` for even
    elements with |tr| < 2 and for odd elements with tr = 0 (a pure
    reflection, which has no translation length).
    """
    t = abs(g.trace)
    if g.parity == 0:
        if t < 2.0 - TRACE_CLASS_TOL:
            raise EllipticElementError(
                f"elliptic element (|tr| = {t:.6g} < 2)",
                isometry_class=IsometryClass.ELLIPTIC)
        if t <= 2.0 + TRACE_CLASS_TOL:
            if np.allclose(g.mat, np.sign(g.mat[0, 0]) * np.eye(2),
                           rtol=0.0, atol=TRACE_CLASS_TOL):
                return IsometryClass.IDENTITY, 0.0
            return IsometryClass.PARABOLIC, 0.0
        return IsometryClass.TRANSVECTION, 2.0 * math.acosh(t / 2.0)
    if t <= TRACE_CLASS_TOL:
        raise EllipticElementError(
            "odd-parity element with zero trace (pure reflection)",
            isometry_class=IsometryClass.ELLIPTIC)
    return IsometryClass.GLIDE, 2.0 * math.asinh(t / 2.0)
