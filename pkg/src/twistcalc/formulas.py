"""Intersection-number inequalities for twists, checked on slope models.

Three statements are exercised, for curves ``a, b, c`` and powers ``n``:

1. ``|n| i(a,b) i(a,c) - i(T_a^n(c), b) <= i(b,c)``
2. ``|i(M(c), b) - |e| i(a,c) i(a,b)| <= i(b,c)`` for the multitwist ``M = T_a^e``
3. ``i(T_a^n(b), b) == |n| i(a,b)^2``

On the slope models any two disjoint essential curves are parallel, so a
multitwist is a power of a single twist and (2) is only exercised in that
form.  The exponent enters through ``|e|``: with the signed ``e`` the
inequality fails for every negative power (take ``b == c``), and ``|e|`` is
what makes (3) the ``b == c`` case of (2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator

from twistcalc.slopes import Slope, SurfaceModel, apply_to_slope, enumerate_slopes, geom_int, twist_slope_matrix

MULTITWIST_NOTE = (
    "slope models: disjoint essential curves are parallel, so the multitwist in formula 2 "
    "is a single power T_a^e"
)


def formula1_sides(model: SurfaceModel, a: Slope, b: Slope, c: Slope, n: int) -> tuple[int, int]:
    tc = apply_to_slope(twist_slope_matrix(model, a, n), c)
    lhs = abs(n) * geom_int(model, a, b) * geom_int(model, a, c) - geom_int(model, tc, b)
    return lhs, geom_int(model, b, c)


def formula2_sides(model: SurfaceModel, a: Slope, e: int, b: Slope, c: Slope) -> tuple[int, int]:
    if e == 0:
        raise ValueError("multitwist exponent must be nonzero")
    mc = apply_to_slope(twist_slope_matrix(model, a, e), c)
    lhs = abs(geom_int(model, mc, b) - abs(e) * geom_int(model, a, c) * geom_int(model, a, b))
    return lhs, geom_int(model, b, c)


def formula3_sides(model: SurfaceModel, a: Slope, b: Slope, n: int) -> tuple[int, int]:
    tb = apply_to_slope(twist_slope_matrix(model, a, n), b)
    return geom_int(model, tb, b), abs(n) * geom_int(model, a, b) ** 2


def check_formula1(model: SurfaceModel, a: Slope, b: Slope, c: Slope, n: int) -> bool:
    lhs, rhs = formula1_sides(model, a, b, c, n)
    return lhs <= rhs


def check_formula2(model: SurfaceModel, a: Slope, e: int, b: Slope, c: Slope) -> bool:
    lhs, rhs = formula2_sides(model, a, e, b, c)
    return lhs <= rhs


def check_formula3(model: SurfaceModel, a: Slope, b: Slope, n: int) -> bool:
    lhs, rhs = formula3_sides(model, a, b, n)
    return lhs == rhs


# A case is (inputs, lhs, rhs); the sweep keeps those failing the comparison.
Case = tuple[dict, int, int]


def _twists(model: SurfaceModel, slopes: list[Slope], powers: list[int]):
    for a in slopes:
        for n in powers:
            m = twist_slope_matrix(model, a, n)
            yield a, n, (m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def _cases1(model: SurfaceModel, slopes: list[Slope], max_n: int) -> Iterator[Case]:
    s = model.scale
    vecs = [(x.p, x.q) for x in slopes]
    for a, n, (m00, m01, m10, m11) in _twists(model, slopes, list(range(-max_n, max_n + 1))):
        ap, aq = a.p, a.q
        for b, (bp, bq) in zip(slopes, vecs):
            iab = s * abs(ap * bq - bp * aq)
            for c, (cp, cq) in zip(slopes, vecs):
                tp, tq = m00 * cp + m01 * cq, m10 * cp + m11 * cq
                lhs = abs(n) * iab * s * abs(ap * cq - cp * aq) - s * abs(tp * bq - bp * tq)
                yield {"a": a, "b": b, "c": c, "n": n}, lhs, s * abs(bp * cq - cp * bq)


def _cases2(model: SurfaceModel, slopes: list[Slope], max_n: int) -> Iterator[Case]:
    s = model.scale
    vecs = [(x.p, x.q) for x in slopes]
    powers = [e for e in range(-max_n, max_n + 1) if e]
    for a, e, (m00, m01, m10, m11) in _twists(model, slopes, powers):
        ap, aq = a.p, a.q
        for b, (bp, bq) in zip(slopes, vecs):
            iab = s * abs(ap * bq - bp * aq)
            for c, (cp, cq) in zip(slopes, vecs):
                tp, tq = m00 * cp + m01 * cq, m10 * cp + m11 * cq
                lhs = abs(s * abs(tp * bq - bp * tq) - abs(e) * s * abs(ap * cq - cp * aq) * iab)
                yield {"a": a, "e": e, "b": b, "c": c}, lhs, s * abs(bp * cq - cp * bq)


def _cases3(model: SurfaceModel, slopes: list[Slope], max_n: int) -> Iterator[Case]:
    s = model.scale
    vecs = [(x.p, x.q) for x in slopes]
    for a, n, (m00, m01, m10, m11) in _twists(model, slopes, list(range(-max_n, max_n + 1))):
        ap, aq = a.p, a.q
        for b, (bp, bq) in zip(slopes, vecs):
            tp, tq = m00 * bp + m01 * bq, m10 * bp + m11 * bq
            iab = s * abs(ap * bq - bp * aq)
            yield {"a": a, "b": b, "n": n}, s * abs(tp * bq - bp * tq), abs(n) * iab * iab


@dataclass(frozen=True)
class Formula:
    """A sweepable statement; ``rhs_multiplier`` exists to mutate it in self-tests."""

    id: int
    relation: str  # "<=" or "=="
    cases: Callable[[SurfaceModel, list[Slope], int], Iterator[Case]]
    slope_arity: int
    nonzero_power: bool = False
    rhs_multiplier: int = 1

    def holds(self, lhs: int, rhs: int) -> bool:
        rhs *= self.rhs_multiplier
        return lhs <= rhs if self.relation == "<=" else lhs == rhs

    def expected_cases(self, n_slopes: int, max_n: int) -> int:
        powers = 2 * max_n + (0 if self.nonzero_power else 1)
        return n_slopes ** self.slope_arity * powers


FORMULAS = {
    1: Formula(1, "<=", _cases1, 3),
    2: Formula(2, "<=", _cases2, 3, nonzero_power=True),
    3: Formula(3, "==", _cases3, 2),
}


def mutated(formula: int | Formula, rhs_multiplier: int) -> Formula:
    base = FORMULAS[formula] if isinstance(formula, int) else formula
    return replace(base, rhs_multiplier=rhs_multiplier)


@dataclass
class SweepReport:
    formula: int
    model: SurfaceModel
    max_pq: int
    max_n: int
    cases_checked: int = 0
    expected_cases: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    mutated: bool = False

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def note(self) -> str | None:
        return MULTITWIST_NOTE if self.formula == 2 else None

    def to_json(self) -> dict:
        return {
            "formula": self.formula,
            "model": self.model.value,
            "bounds": {"max_pq": self.max_pq, "max_n": self.max_n},
            "cases_checked": self.cases_checked,
            "expected_cases": self.expected_cases,
            "passed": self.passed,
            "mutated": self.mutated,
            "note": self.note,
            "counterexamples": self.counterexamples,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def summary(self) -> str:
        lines = []
        if self.note:
            lines.append(f"# {self.note}")
        status = "pass" if self.passed else f"FAIL ({len(self.counterexamples)} counterexamples)"
        lines.append(
            f"formula {self.formula} on {self.model.value}, max_pq={self.max_pq}, max_n={self.max_n}: "
            f"{self.cases_checked} cases, {status}")
        for cx in self.counterexamples[:5]:
            args = ", ".join(f"{k}={v}" for k, v in cx["inputs"].items())
            lines.append(f"  #{cx['index']}: {args}: lhs={cx['lhs']} rhs={cx['rhs']}")
        if len(self.counterexamples) > 5:
            lines.append(f"  ... {len(self.counterexamples) - 5} more")
        return "\n".join(lines)


def sweep(formula: int | Formula, model: SurfaceModel, max_pq: int, max_n: int) -> SweepReport:
    """Exhaustively check a formula over all slopes up to ``max_pq`` and powers up to ``max_n``."""
    if max_pq < 1 or max_n < 1:
        raise ValueError("sweep bounds must be at least 1")
    f = FORMULAS[formula] if isinstance(formula, int) else formula
    slopes = enumerate_slopes(max_pq)
    report = SweepReport(f.id, model, max_pq, max_n, expected_cases=f.expected_cases(len(slopes), max_n),
                         mutated=f.rhs_multiplier != 1)
    count = 0
    for index, (inputs, lhs, rhs) in enumerate(f.cases(model, slopes, max_n)):
        count += 1
        if not f.holds(lhs, rhs):
            report.counterexamples.append({
                "index": index,
                "inputs": {k: (str(v) if isinstance(v, Slope) else v) for k, v in inputs.items()},
                "lhs": lhs,
                "rhs": rhs * f.rhs_multiplier,
            })
    report.cases_checked = count
    return report
