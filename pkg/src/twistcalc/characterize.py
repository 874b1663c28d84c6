"""Decision procedures for relations ``T_x^j T_y^k = M`` and ``(T_x T_y)^k = M``.

The procedures mirror the case analysis that rules out every configuration
except the lantern and the 2-chain.  Each configuration of ``x`` and ``y``
gives an exact obstruction:

* ``i(x, y) = 1``: a punctured-torus neighbourhood; a multitwist must fix a
  nonzero homology class, but ``((1 - jk, j), (-k, 1))`` has no eigenvalue 1.
* ``i(x, y) = 2`` with algebraic intersection ``±2``: a genus-one surface
  with two boundary components; the fixed homology is only the peripheral
  line spanned by ``v - w``.
* ``i(x, y) = 2`` with algebraic intersection ``0``: a four-holed sphere;
  the slope action must fix some slope.

Every ``Infeasible`` verdict carries a witness that :func:`recheck_witness`
can verify without rerunning the procedure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from twistcalc.intmat import (
    FixedLattice,
    IntMatrix,
    e_jk,
    fixed_lattice,
    in_span,
    jk_matrix,
    mat_pow,
    rank,
    twist_homology_matrix,
)
from twistcalc.slopes import Slope, SurfaceModel, apply_to_slope, find_fixed_slope, geom_int, twist_slope_matrix
from twistcalc.twistlang import Twist, TwistWord, flatten
from twistcalc.verdict import Status, Verdict, Witness


@dataclass(frozen=True)
class HomologySurface:
    """First homology of a model subsurface with its intersection pairing.

    ``peripheral`` spans the classes of the boundary components.
    """

    name: str
    basis: tuple[str, ...]
    pairing: tuple[tuple[int, ...], ...]
    peripheral: tuple[tuple[int, ...], ...] = ()

    def twist(self, curve_class: Sequence[int], k: int = 1) -> IntMatrix:
        return twist_homology_matrix(self.pairing, curve_class, k)

    def multitwist(self, twists: Iterable[tuple[Sequence[int], int]]) -> IntMatrix:
        m = IntMatrix.identity(len(self.basis))
        for c, e in twists:
            m = m @ self.twist(c, e)
        return m

    def is_peripheral(self, v: Sequence[int]) -> bool:
        return in_span(v, self.peripheral)


PUNCTURED_TORUS = HomologySurface("punctured-torus", ("x", "y"), ((0, 1), (-1, 0)))
TORUS_HOMOLOGY = HomologySurface("torus", ("x", "y"), ((0, 1), (-1, 0)))
# Basis {x, v, w}: x meets v and w once each, the boundary classes are ±(v - w).
GENUS_ONE_TWO_BOUNDARY = HomologySurface(
    "genus-one-two-boundary", ("x", "v", "w"), ((0, 1, 1), (-1, 0, 0), (-1, 0, 0)), ((0, 1, -1),))


def chain_surface(n: int) -> HomologySurface:
    """Span of an n-chain ``a_1, ..., a_n`` with ``pair(a_i, a_{i+1}) = 1``."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1], rows[i + 1][i] = 1, -1
    return HomologySurface(f"{n}-chain", tuple(f"a{i + 1}" for i in range(n)), tuple(map(tuple, rows)))


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


@dataclass(frozen=True)
class ExponentPair:
    j: int
    k: int


def normalize_exponents(j: int, k: int) -> tuple[ExponentPair, bool] | Verdict:
    """Bring ``(j, k)`` into ``j > 0`` (with ``k`` of either sign).

    ``T_x^j T_y^k = M`` holds iff its inverse ``T_y^-k T_x^-j = M^-1`` does,
    which handles ``j, k < 0``.  For ``j < 0 < k`` conjugating by ``T_x^j``
    gives ``T_y^k T_x^j = M'`` with ``M'`` again a multitwist, so the pair
    becomes ``(k, j)``; this is not an inversion.  A zero exponent makes the
    relation trivial and is reported as a verdict.
    """
    if j == 0 or k == 0:
        return Verdict(Status.INFEASIBLE, "trivial-multitwist", Witness("exponents", {"j": j, "k": k}))
    if j > 0:
        return ExponentPair(j, k), False
    if k < 0:
        return ExponentPair(-k, -j), True
    return ExponentPair(k, j), False


def genus_one_action(j: int, k: int, ain_xy: int) -> IntMatrix:
    """``(T_x^j T_y^k)_*`` on ``H_1`` of the genus-one, two-boundary surface.

    ``y = x + (v + w)`` when the algebraic intersection is ``+2`` and
    ``y = x - (v + w)`` when it is ``-2``.
    """
    if ain_xy not in (2, -2):
        raise ValueError("genus-one configuration needs algebraic intersection ±2")
    s = ain_xy // 2
    surf = GENUS_ONE_TWO_BOUNDARY
    y = (1, s, s)
    return surf.twist((1, 0, 0), j) @ surf.twist(y, k)


def s04_action(j: int, k: int) -> IntMatrix:
    """Slope action of ``T_x^j T_y^k`` with ``x = 1/0``, ``y = 0/1`` on the four-holed sphere."""
    m = SurfaceModel.FOUR_PUNCTURED_SPHERE
    return twist_slope_matrix(m, Slope(1, 0), j) @ twist_slope_matrix(m, Slope(0, 1), k)


def _lattice_json(lat: FixedLattice) -> dict:
    return lat.to_json()


def config_test(j: int, k: int, i_xy: int, ain_xy: int | None = None) -> Verdict:
    """Test one configuration of ``x, y`` against ``T_x^j T_y^k = M``."""
    if j <= 0 or k == 0:
        raise ValueError(f"exponents ({j}, {k}) are not normalized")
    config = {"i_xy": i_xy, "ain_xy": ain_xy}
    norm = (j, k)
    if i_xy == 1:
        if ain_xy not in (None, 1, -1):
            raise ValueError("i(x, y) = 1 forces algebraic intersection ±1")
        m = jk_matrix(j, k)
        eig = e_jk(j, k)
        if eig.equals_one:
            raise RuntimeError(f"homology obstruction does not apply to ({j}, {k})")
        return Verdict(Status.INFEASIBLE, "eigenvalue-not-one", Witness("eigenvalues", {
            "matrix": m.tolist(), "eigenvalues": eig.to_json(),
        }), normalized=norm, details=config)
    if i_xy != 2:
        raise ValueError(f"unsupported intersection number {i_xy}")
    if ain_xy in (2, -2):
        m = genus_one_action(j, k, ain_xy)
        lat = fixed_lattice(m)
        surf = GENUS_ONE_TWO_BOUNDARY
        if not all(surf.is_peripheral(v) for v in lat.basis):
            raise RuntimeError(f"peripheral obstruction does not apply to ({j}, {k}, {ain_xy})")
        return Verdict(Status.INFEASIBLE, "fixed-set-peripheral-only", Witness("fixed-lattice", {
            "matrix": m.tolist(), "lattice": _lattice_json(lat), "peripheral": [list(v) for v in surf.peripheral],
        }), normalized=norm, details=config)
    if ain_xy == 0:
        m = s04_action(j, k)
        z = find_fixed_slope(m)
        if z is None:
            return Verdict(Status.INFEASIBLE, "slope-matrix-irreducible", Witness("slope-matrix", {
                "matrix": m.tolist(),
            }), normalized=norm, details=config)
        return Verdict(Status.LANTERN_FORCED, "four-holed-sphere", Witness("fixed-slope", {
            "matrix": m.tolist(), "slope": str(z),
            "i_xz": geom_int(SurfaceModel.FOUR_PUNCTURED_SPHERE, Slope(1, 0), z),
            "i_yz": geom_int(SurfaceModel.FOUR_PUNCTURED_SPHERE, Slope(0, 1), z),
        }), normalized=norm, details=config)
    raise ValueError(f"unsupported algebraic intersection {ain_xy}")


def max_intersection(abs_jk: int) -> int:
    """Largest ``i`` with ``i <= 2 / sqrt(|jk|)``, i.e. ``i*i*|jk| <= 4``."""
    i = 0
    while (i + 1) ** 2 * abs_jk <= 4:
        i += 1
    return i


def admissible_configs(j: int, k: int) -> list[tuple[int, int | None]]:
    top = max_intersection(abs(j * k))
    configs: list[tuple[int, int | None]] = []
    if top >= 1:
        configs.append((1, None))
    if top >= 2:
        configs += [(2, 2), (2, -2), (2, 0)]
    return configs


def lantern_feasibility(j: int, k: int) -> Verdict:
    """Decide whether ``T_x^j T_y^k = M`` (``M`` a multitwist) can be nontrivial."""
    norm = normalize_exponents(j, k)
    if isinstance(norm, Verdict):
        return norm
    pair, inverted = norm
    nj, nk = pair.j, pair.k
    top = max_intersection(abs(nj * nk))
    if top == 0:
        return Verdict(Status.INFEASIBLE, "intersection-bound", Witness("intersection-bound", {
            "abs_jk": abs(nj * nk), "max_i_xy": 0,
        }), normalized=(nj, nk), inverted=inverted)
    results = [config_test(nj, nk, i, a) for i, a in admissible_configs(nj, nk)]
    forced = [v for v in results if v.status is Status.LANTERN_FORCED]
    cases = [v.to_json() for v in results]
    if forced:
        v = forced[0]
        return Verdict(Status.LANTERN_FORCED, "lantern", Witness("cases", cases),
                       normalized=(nj, nk), inverted=inverted, details=v.details)
    return Verdict(Status.INFEASIBLE, "all-configurations-excluded", Witness("cases", cases),
                   normalized=(nj, nk), inverted=inverted, details={"max_i_xy": top})


def two_chain_matrix() -> IntMatrix:
    """``(T_x T_y)_*`` on the punctured torus, basis ``{[x], [y]}``."""
    s = PUNCTURED_TORUS
    return s.twist((1, 0)) @ s.twist((0, 1))


def two_chain_feasibility(k: int) -> Verdict:
    """Decide ``(T_x T_y)^k = M`` at the level of punctured-torus homology."""
    if k == 0:
        raise ValueError("k must be nonzero")
    inverted = k < 0
    m = mat_pow(two_chain_matrix(), abs(k))
    if m.is_identity():
        j = k // 6
        return Verdict(Status.TWO_CHAIN_FORCED, "power-is-identity", Witness("matrix", {
            "matrix": m.tolist(), "k": k,
        }), inverted=inverted, power=j)
    lat = fixed_lattice(m)
    reason = "power-is-minus-identity" if m == -IntMatrix.identity(2) else "power-fixes-nothing"
    return Verdict(Status.INFEASIBLE, reason, Witness("power-matrix", {
        "matrix": m.tolist(), "k": abs(k), "lattice": _lattice_json(lat),
    }), inverted=inverted)


def _slope_equal(model: SurfaceModel, a: IntMatrix, b: IntMatrix) -> bool:
    # The four-holed sphere sees only the projective action on slopes.
    return a == b or (not model.is_torus and a == -b)


RELATIONS = ("reflexive", "commuting", "braid")


def basic_characterizations(model: SurfaceModel, a: Slope, b: Slope, j: int = 1, k: int = 1,
                            relation: str = "commuting") -> Verdict:
    """Check one of the basic relations in the slope model against its characterization.

    The verdict reports whether the relation holds in the model; the witness
    records the geometric predicate it should agree with and the route
    through the curve action used in the classical argument.
    """
    if relation not in RELATIONS:
        raise ValueError(f"relation must be one of {RELATIONS}")
    if j == 0 or k == 0:
        raise ValueError("exponents must be nonzero")
    ta, tb = twist_slope_matrix(model, a, j), twist_slope_matrix(model, b, k)
    i_ab = geom_int(model, a, b)
    route: dict = {}
    if relation == "reflexive":
        algebraic = _slope_equal(model, ta, tb)
        geometric = a == b and j == k
    elif relation == "commuting":
        algebraic = _slope_equal(model, ta @ tb, tb @ ta)
        geometric = i_ab == 0
        route = {"T_a^j(b)": str(apply_to_slope(ta, b)), "fixes_b": apply_to_slope(ta, b) == b}
    else:
        algebraic = _slope_equal(model, ta @ tb @ ta, tb @ ta @ tb)
        geometric = (a != b and j == k and abs(j) == 1 and i_ab == 1) or (a == b and j == k)
        image = apply_to_slope(ta @ tb, a)
        route = {"T_a^j T_b^k(a)": str(image), "equals_b": image == b}
    status = Status.RELATION_HOLDS if algebraic else Status.RELATION_FAILS
    return Verdict(status, f"{relation}-{'holds' if algebraic else 'fails'}", Witness("characterization", {
        "model": model.value, "a": str(a), "b": str(b), "j": j, "k": k, "i_ab": i_ab,
        "algebraic": algebraic, "geometric": geometric, "agrees": algebraic == geometric, "route": route,
    }))


@dataclass(frozen=True)
class ChainOrder:
    n: int
    order: int
    sign_order: int
    sign: int
    expected_exponent: int

    @property
    def matches(self) -> bool:
        return self.expected_exponent % self.order == 0

    def to_json(self) -> dict:
        return {
            "n": self.n, "order": self.order, "sign_order": self.sign_order, "sign": self.sign,
            "expected_exponent": self.expected_exponent, "matches": self.matches,
        }


def chain_product(n: int) -> IntMatrix:
    surf = chain_surface(n)
    return surf.multitwist((_unit(n, i), 1) for i in range(n))


def chain_homology_order(n: int) -> ChainOrder:
    """Order of ``(T_a1 ... T_an)_*`` on the span of an n-chain, 2 <= n <= 8."""
    if not 2 <= n <= 8:
        raise ValueError("chain length must be between 2 and 8")
    p = chain_product(n)
    ident = IntMatrix.identity(n)
    expected = n + 1 if n % 2 else 2 * n + 2
    sign_order = sign = None
    m = ident
    for power in range(1, 4 * n + 5):
        m = m @ p
        if sign_order is None and (m == ident or m == -ident):
            sign_order, sign = power, 1 if m == ident else -1
        if m == ident:
            return ChainOrder(n, power, sign_order, sign, expected)
    raise RuntimeError(f"no finite order found for the {n}-chain")


@dataclass(frozen=True)
class FixedClass:
    value: Slope | tuple[int, ...] | None
    peripheral: bool
    lattice: FixedLattice | None = None


def multitwist_fixed_class(model: SurfaceModel | HomologySurface, a, e: int = 1) -> FixedClass:
    """A nontrivial class fixed by a multitwist.

    On a slope model ``a`` is a :class:`Slope` and the answer is ``a`` itself.
    On a :class:`HomologySurface`, ``a`` is a class vector (twisted ``e``
    times) or a sequence of ``(class, exponent)`` pairs; a nonperipheral
    fixed vector is preferred when one exists.
    """
    if e == 0:
        raise ValueError("multitwist exponent must be nonzero")
    if isinstance(model, SurfaceModel):
        if apply_to_slope(twist_slope_matrix(model, a, e), a) != a:
            raise RuntimeError(f"twist about {a} does not fix {a}")
        return FixedClass(a, peripheral=False)
    if a and isinstance(a[0], int):
        twists = [(tuple(a), e)]
    else:
        twists = [(tuple(c), x) for c, x in a]
    m = model.multitwist(twists)
    lat = fixed_lattice(m)
    for v in lat.basis:
        if not model.is_peripheral(v):
            return FixedClass(v, False, lat)
    # Every fixed vector is peripheral; a combination of basis vectors cannot escape their span.
    if lat.basis:
        return FixedClass(lat.basis[0], True, lat)
    return FixedClass(None, True, lat)


class CurveSystem:
    """Curve names with an intersection oracle, for checking multitwist words."""

    def key(self, name: str):
        raise NotImplementedError

    def label(self, key) -> str:
        """Canonical name for the curve with this key."""
        raise NotImplementedError

    def intersection(self, u: str, v: str) -> int:
        raise NotImplementedError


class SlopeCurves(CurveSystem):
    def __init__(self, model: SurfaceModel, curves: Mapping[str, Slope]):
        self.model = model
        self.curves = dict(curves)

    def _slope(self, name: str) -> Slope:
        try:
            return self.curves[name]
        except KeyError:
            raise KeyError(f"unbound curve {name!r}") from None

    def key(self, name: str):
        s = self._slope(name)
        return (s.p, s.q)

    def label(self, key) -> str:
        return min(n for n, s in self.curves.items() if (s.p, s.q) == key)

    def intersection(self, u: str, v: str) -> int:
        return geom_int(self.model, self._slope(u), self._slope(v))


class AbstractCurves(CurveSystem):
    """Distinct names are distinct curves; unlisted pairs are disjoint."""

    def __init__(self, intersections: Mapping[tuple[str, str], int]):
        self.table = {}
        for (u, v), i in intersections.items():
            self.table[(u, v)] = self.table[(v, u)] = i

    def key(self, name: str):
        return name

    def label(self, key) -> str:
        return key

    def intersection(self, u: str, v: str) -> int:
        return 0 if u == v else self.table.get((u, v), 0)


class NotAMultitwist(ValueError):
    pass


def multitwist_normal_form(word: TwistWord, curves: CurveSystem) -> TwistWord:
    """Merge exponents per curve, drop zeros and sort curves canonically.

    Raises :class:`NotAMultitwist` if two distinct curves in the word
    intersect.
    """
    factors = flatten(word)
    names = sorted({n for n, _ in factors})
    for x in range(len(names)):
        for y in range(x + 1, len(names)):
            u, v = names[x], names[y]
            if curves.key(u) != curves.key(v) and curves.intersection(u, v) != 0:
                raise NotAMultitwist(f"not a multitwist: i({u}, {v}) = {curves.intersection(u, v)}")
    total: dict = {}
    for name, e in factors:
        key = curves.key(name)
        total[key] = total.get(key, 0) + e
    return TwistWord(tuple(Twist(curves.label(key), total[key]) for key in sorted(total, key=repr) if total[key]))


def recheck_witness(verdict: Verdict | Mapping) -> bool:
    """Independently re-verify the witness attached to a verdict.

    Only the serialized witness data is used, so this also accepts the JSON
    form of a verdict.
    """
    doc = verdict.to_json() if isinstance(verdict, Verdict) else verdict
    w = doc.get("witness")
    if w is None:
        return False
    kind, data = w["kind"], w["data"]
    if kind == "exponents":
        return data["j"] * data["k"] == 0
    if kind == "intersection-bound":
        return data["max_i_xy"] == 0 and data["abs_jk"] > 4
    if kind == "eigenvalues":
        m = IntMatrix(data["matrix"])
        # Characteristic polynomial at 1; nonzero means 1 is not an eigenvalue.
        return m.det() == 1 and (m - IntMatrix.identity(m.n)).det() != 0
    if kind == "fixed-lattice":
        m = IntMatrix(data["matrix"])
        basis = data["lattice"]["basis"]
        peripheral = data["peripheral"]
        fixed = all(m.apply(v) == tuple(v) for v in basis)
        full = rank((m - IntMatrix.identity(m.n)).rows) == m.n - len(basis)
        return fixed and full and all(in_span(v, peripheral) for v in basis)
    if kind == "slope-matrix":
        m = IntMatrix(data["matrix"])
        # In SL(2, Z) an eigenvalue ±1 forces trace ±2.
        return m.n == 2 and m.det() == 1 and abs(m.trace()) != 2
    if kind == "power-matrix":
        m = IntMatrix(data["matrix"])
        return (m == mat_pow(IntMatrix([[0, 1], [-1, 1]]), data["k"])
                and (m - IntMatrix.identity(2)).det() != 0)
    if kind == "matrix":
        m = IntMatrix(data["matrix"])
        return m.is_identity()
    if kind == "fixed-slope":
        m = IntMatrix(data["matrix"])
        z = Slope.parse(data["slope"])
        return apply_to_slope(m, z) == z
    if kind == "cases":
        return bool(data) and all(recheck_witness(case) for case in data)
    return False
