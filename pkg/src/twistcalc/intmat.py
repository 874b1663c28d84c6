"""Exact integer linear algebra for twist actions on homology and slopes.

Matrices act on column vectors from the left, so "apply A, then B" is the
product ``B @ A``.  A word ``T_x T_y`` (functional notation, ``T_y`` first)
therefore evaluates to ``M_x @ M_y``.

Everything here is Python ``int`` arithmetic; there is no floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class DimensionError(ValueError):
    pass


class NotUnimodularError(ValueError):
    pass


class IntMatrix:
    """An immutable square matrix of arbitrary-precision integers."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(_as_int(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError(f"expected a square, non-empty matrix, got {rows!r}")
        self._rows = rows

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> IntMatrix:
        return cls(zip(*columns))

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[Vector, ...]:
        return self._rows

    @property
    def columns(self) -> tuple[Vector, ...]:
        return tuple(zip(*self._rows))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._rows]})"

    def __str__(self) -> str:
        return str(self.tolist())

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-x for x in r] for r in self._rows])

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        _check_same(self, other)
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __add__(self, other: IntMatrix) -> IntMatrix:
        _check_same(self, other)
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        return mat_mul(self, other)

    def __pow__(self, k: int) -> IntMatrix:
        return mat_pow(self, k)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.n:
            raise DimensionError(f"vector of length {len(v)} for a {self.n}x{self.n} matrix")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self._rows)

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.columns)

    def trace(self) -> int:
        return sum(self._rows[i][i] for i in range(self.n))

    def det(self) -> int:
        return determinant(self._rows)

    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.n)

    def inverse(self) -> IntMatrix:
        """Exact inverse; only defined for unimodular matrices."""
        d = self.det()
        if abs(d) != 1:
            raise NotUnimodularError(f"determinant {d}; no integer inverse")
        return IntMatrix(_adjugate(self._rows)) if d == 1 else -IntMatrix(_adjugate(self._rows))


def _as_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        raise TypeError(f"matrix entries must be integers, got {x!r}")
    return x


def _check_same(a: IntMatrix, b: IntMatrix) -> None:
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    _check_same(a, b)
    cols = b.columns
    return IntMatrix([[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a.rows])


def mat_pow(a: IntMatrix, k: int) -> IntMatrix:
    if k < 0:
        a = a.inverse()
        k = -k
    result = IntMatrix.identity(a.n)
    base = a
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _adjugate(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(rows)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            adj[j][i] = (-1) ** (i + j) * determinant(minor)
    return adj


def rank(vectors: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in v] for v in vectors]
    if not m:
        return 0
    r = 0
    ncols = len(m[0])
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def in_span(v: Sequence[int], vectors: Sequence[Sequence[int]]) -> bool:
    """Whether ``v`` lies in the rational span of ``vectors``."""
    if not any(v):
        return True
    return rank(list(vectors) + [v]) == rank(vectors)


def content(v: Sequence[int]) -> int:
    return math.gcd(*v) if v else 0


def hermite_rows(vectors: Iterable[Sequence[int]]) -> tuple[Vector, ...]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Pivots are positive and entries above a pivot are reduced into
    ``[0, pivot)``; zero rows are dropped.  Two generating sets span the same
    lattice iff their Hermite forms are identical.
    """
    m = [list(v) for v in vectors]
    if not m:
        return ()
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        for i in range(r + 1, len(m)):
            if m[i][c] == 0:
                continue
            a, b = m[r][c], m[i][c]
            g, s, t = _xgcd(a, b)
            u, w = -b // g, a // g
            row_r, row_i = m[r], m[i]
            m[r] = [s * x + t * y for x, y in zip(row_r, row_i)]
            m[i] = [u * x + w * y for x, y in zip(row_r, row_i)]
        if m[r][c] == 0:
            continue
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        p = m[r][c]
        for i in range(r):
            q = m[i][c] // p
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
    return tuple(tuple(row) for row in m[:r] if any(row))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) > 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def integer_kernel(a: IntMatrix) -> tuple[Vector, ...]:
    """A basis of ``{v in Z^n : a v = 0}`` in Hermite normal form."""
    n = a.n
    # Row-reduce [a^T | I]; rows whose left block vanishes carry the kernel.
    aug = [list(col) + [int(i == j) for j in range(n)] for i, col in enumerate(a.columns)]
    r = 0
    for c in range(n):
        for i in range(r + 1, n):
            if aug[i][c] == 0:
                continue
            x, y = aug[r][c], aug[i][c]
            g, s, t = _xgcd(x, y)
            u, w = -y // g, x // g
            row_r, row_i = aug[r], aug[i]
            aug[r] = [s * p + t * q for p, q in zip(row_r, row_i)]
            aug[i] = [u * p + w * q for p, q in zip(row_r, row_i)]
        if r < n and aug[r][c] != 0:
            r += 1
    kernel = [row[n:] for row in aug if not any(row[:n])]
    return hermite_rows(kernel)


@dataclass(frozen=True)
class FixedLattice:
    """The lattice of integer vectors fixed by a matrix, in canonical form."""

    basis: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        if not any(v):
            return True
        return hermite_rows(list(self.basis) + [list(v)]) == self.basis

    def to_json(self) -> dict:
        return {"rank": self.rank, "basis": [list(v) for v in self.basis]}


def fixed_lattice(a: IntMatrix) -> FixedLattice:
    return FixedLattice(integer_kernel(a - IntMatrix.identity(a.n)))


@dataclass(frozen=True)
class EigOneReport:
    has_eigenvalue_one: bool
    char_poly_at_one: int


def eig_one_report(a: IntMatrix) -> EigOneReport:
    d = (a - IntMatrix.identity(a.n)).det()
    return EigOneReport(d == 0, d)


def _split_square(n: int) -> tuple[int, int]:
    """Write ``n = s*s*f`` with ``f`` squarefree (sign kept on ``f``)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, f = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1
    return s, sign * f * n


@dataclass(frozen=True)
class QuadraticPair:
    """The conjugate pair ``(a ± b*sqrt(d)) / c`` in lowest terms.

    ``d`` is squarefree (``-1`` encodes ``i``) or ``0`` for a double root,
    ``b >= 0`` and ``c > 0``.  ``d == 1`` means both roots are rational.
    """

    a: int
    b: int
    d: int
    c: int

    @classmethod
    def roots_of_monic(cls, trace: int, det: int) -> QuadraticPair:
        """Roots of ``t^2 - trace*t + det``."""
        disc = trace * trace - 4 * det
        s, f = _split_square(disc)
        a, b, c = trace, s, 2
        if f == 0:
            b = 0
        g = math.gcd(math.gcd(a, b), c)
        a, b, c = a // g, b // g, c // g
        return cls(a, b, f, c)

    @property
    def is_real(self) -> bool:
        return self.d >= 0

    def rational_values(self) -> tuple[Fraction, ...]:
        if self.b == 0 or self.d == 0:
            return (Fraction(self.a, self.c),)
        if self.d == 1:
            return (Fraction(self.a + self.b, self.c), Fraction(self.a - self.b, self.c))
        return ()

    def contains(self, value: int | Fraction) -> bool:
        return Fraction(value) in self.rational_values()

    def render(self) -> str:
        if self.b == 0 or self.d == 0:
            return _frac_str(self.a, self.c)
        if self.d < 0:
            root = "i" if self.d == -1 else f"√{-self.d}·i"
        else:
            root = f"√{self.d}"
        tail = root if self.b == 1 else f"{self.b}{root}"
        num = f"±{tail}" if self.a == 0 else f"{self.a}±{tail}"
        return num if self.c == 1 else f"({num})/{self.c}"

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "d": self.d, "c": self.c, "text": self.render()}


def _frac_str(a: int, c: int) -> str:
    return str(a) if c == 1 else f"{a}/{c}"


def eigenvalues_2x2(a: IntMatrix) -> QuadraticPair:
    if a.n != 2:
        raise DimensionError("eigenvalues_2x2 needs a 2x2 matrix")
    return QuadraticPair.roots_of_monic(a.trace(), a.det())


def jk_matrix(j: int, k: int) -> IntMatrix:
    """Punctured-torus action of ``T_x^j T_y^k`` on the basis ``{[x], [y]}``."""
    return IntMatrix([[1 - j * k, j], [-k, 1]])


@dataclass(frozen=True)
class JKEigenvalues:
    j: int
    k: int
    pair: QuadraticPair

    @property
    def equals_one(self) -> bool:
        return self.pair.contains(1)

    def to_json(self) -> dict:
        return {"j": self.j, "k": self.k, **self.pair.to_json(), "equals_one": self.equals_one}


def e_jk(j: int, k: int) -> JKEigenvalues:
    """Exact eigenvalues of ``((1 - jk, j), (-k, 1))``."""
    return JKEigenvalues(j, k, eigenvalues_2x2(jk_matrix(j, k)))


def check_pairing(pairing: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    rows = tuple(tuple(_as_int(x) for x in r) for r in pairing)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("pairing table must be square")
    for i in range(n):
        for j in range(n):
            if rows[i][j] != -rows[j][i]:
                raise ValueError(f"pairing table is not antisymmetric at ({i}, {j})")
    return rows


def pair(pairing: Sequence[Sequence[int]], u: Sequence[int], v: Sequence[int]) -> int:
    return sum(u[i] * pairing[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j])


def twist_homology_matrix(pairing: Sequence[Sequence[int]], curve_class: Sequence[int], k: int = 1) -> IntMatrix:
    """Action of ``T_a^k`` on homology, ``a`` given by its class.

    Column ``b`` is ``e_b + k * pair(a, e_b) * a``.  With ``pair(x, y) = 1``
    on the punctured torus this gives ``T_x = ((1,1),(0,1))`` and
    ``T_y = ((1,0),(-1,1))``.
    """
    rows = check_pairing(pairing)
    n = len(rows)
    a = tuple(_as_int(x) for x in curve_class)
    if len(a) != n:
        raise DimensionError(f"class of length {len(a)} for a rank-{n} pairing")
    cols = []
    for b in range(n):
        coef = k * sum(a[i] * rows[i][b] for i in range(n))
        cols.append([int(i == b) + coef * a[i] for i in range(n)])
    m = IntMatrix.from_columns(cols)
    if m.det() != 1:
        raise NotUnimodularError(f"twist matrix has determinant {m.det()}")
    return m
