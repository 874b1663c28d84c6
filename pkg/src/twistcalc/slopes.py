"""Simple closed curves as primitive slopes ``p/q`` on three small surfaces.

On the torus and the once-punctured torus a slope is a primitive homology
class up to sign and the twist about ``(1, 0)`` is ``((1, 1), (0, 1))``.  On the
four-punctured sphere curves are still indexed by slopes, intersection
numbers double, and the twist about ``(1, 0)`` acts by ``((1, 2), (0, 1))``.
Only the action on slopes is modeled there (boundary twists and the
hyperelliptic involution act trivially), and any unimodular matrix may be
applied, which is a superset of the geometric group.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

from twistcalc.intmat import IntMatrix, NotUnimodularError, _xgcd, integer_kernel


@dataclass(frozen=True, order=True)
class Slope:
    """A primitive pair ``(p, q)`` modulo ``(p, q) ~ (-p, -q)``.

    Construction normalizes the sign so that ``p > 0``, or ``p == 0`` and
    ``q == 1``; equality is then structural.
    """

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if math.gcd(p, q) != 1:
            raise ValueError(f"slope ({p}, {q}) is not primitive")
        if p < 0 or (p == 0 and q < 0):
            object.__setattr__(self, "p", -p)
            object.__setattr__(self, "q", -q)

    @classmethod
    def parse(cls, text: str) -> Slope:
        try:
            p, q = text.strip().split("/")
            return cls(int(p), int(q))
        except ValueError as exc:
            raise ValueError(f"bad slope {text!r}; expected 'p/q' with gcd(p, q) = 1") from exc

    @property
    def vector(self) -> tuple[int, int]:
        return (self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


class SurfaceModel(enum.Enum):
    TORUS = "torus"
    ONCE_PUNCTURED_TORUS = "punctured-torus"
    FOUR_PUNCTURED_SPHERE = "s04"

    @classmethod
    def parse(cls, name: str) -> SurfaceModel:
        key = name.strip().lower()
        aliases = {
            "torus": cls.TORUS,
            "t2": cls.TORUS,
            "punctured-torus": cls.ONCE_PUNCTURED_TORUS,
            "once-punctured-torus": cls.ONCE_PUNCTURED_TORUS,
            "s11": cls.ONCE_PUNCTURED_TORUS,
            "s04": cls.FOUR_PUNCTURED_SPHERE,
            "four-punctured-sphere": cls.FOUR_PUNCTURED_SPHERE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown surface model {name!r}; choose from {sorted(aliases)}") from None

    @property
    def is_torus(self) -> bool:
        return self is not SurfaceModel.FOUR_PUNCTURED_SPHERE

    @property
    def scale(self) -> int:
        """Factor relating intersection numbers to ``|det|``."""
        return 1 if self.is_torus else 2

    @property
    def base_twist(self) -> IntMatrix:
        return IntMatrix([[1, self.scale], [0, 1]])


def det2(a: Slope, b: Slope) -> int:
    return a.p * b.q - b.p * a.q


def geom_int(model: SurfaceModel, a: Slope, b: Slope) -> int:
    return model.scale * abs(det2(a, b))


def alg_int(model: SurfaceModel, a: Slope, b: Slope) -> int:
    """Signed intersection ``p_a q_b - p_b q_a`` on the torus models.

    The sign depends on the representatives chosen by slope normalization;
    only the absolute value and antisymmetry are meaningful.
    """
    if not model.is_torus:
        raise ValueError("algebraic intersection vanishes identically on the four-punctured sphere")
    return det2(a, b)


def completion(a: Slope) -> IntMatrix:
    """A matrix in SL(2, Z) whose first column is ``(p, q)``."""
    g, s, t = _xgcd(a.p, a.q)
    # s*p + t*q == 1, so ((p, -t), (q, s)) has determinant 1.
    return IntMatrix([[a.p, -t], [a.q, s]])


def twist_slope_matrix(model: SurfaceModel, a: Slope, n: int = 1) -> IntMatrix:
    """Matrix of ``T_a^n`` on slopes, ``C M0^n C^{-1}`` with ``C e1 = a``."""
    c = completion(a)
    base = IntMatrix([[1, n * model.scale], [0, 1]])
    return c @ base @ c.inverse()


def apply_to_slope(m: IntMatrix, s: Slope) -> Slope:
    if m.n != 2 or not m.is_unimodular():
        raise NotUnimodularError(f"{m} does not act on slopes")
    return Slope(*m.apply(s.vector))


def twist_slope(model: SurfaceModel, a: Slope, n: int, b: Slope) -> Slope:
    """``T_a^n(b)`` without building the matrix: ``b + n*s*det(a, b)*a``."""
    c = n * model.scale * det2(a, b)
    return Slope(b.p + c * a.p, b.q + c * a.q)


def iter_slopes(bound: int) -> Iterator[Slope]:
    for h in range(1, bound + 1):
        for p in range(0, h + 1):
            for q in range(-h, h + 1):
                if max(p, abs(q)) != h or math.gcd(p, q) != 1:
                    continue
                if p == 0 and q != 1:
                    continue
                yield Slope(p, q)


def enumerate_slopes(bound: int) -> list[Slope]:
    """All slopes with ``max(|p|, |q|) <= bound``, ordered by height, then p, then q."""
    if bound < 1:
        raise ValueError("slope bound must be at least 1")
    return list(iter_slopes(bound))


def find_fixed_slope(m: IntMatrix) -> Slope | None:
    """A slope fixed by ``m`` acting projectively, or ``None``.

    A fixed slope is a primitive integer eigenvector for eigenvalue +1 or -1.
    """
    for sign in (1, -1):
        kernel = integer_kernel(m - IntMatrix([[sign, 0], [0, sign]]))
        if kernel:
            return Slope(*kernel[-1])
    return None
