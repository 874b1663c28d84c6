"""Free groups, their automorphisms, and exact checks of twist relations.

Relations between Dehn twists on a compact surface with boundary are
checked through the action on the free fundamental group based at a point
of one boundary component: two products of twists agree when the induced
automorphisms send every generator to the same reduced word.

Letters are nonzero ints: ``g + 1`` is generator ``g`` and ``-(g + 1)`` its
inverse.  Text form uses lowercase names for generators and uppercase for
inverses, so ``"abAB"`` is the commutator of ``a`` and ``b``.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import yaml

from twistcalc.intmat import IntMatrix, twist_homology_matrix
from twistcalc.verdict import Status, Verdict, Witness

DEFAULT_NAMES = "abcdefghijklmnopqrstuvwxyz"


class PresentationError(ValueError):
    """A presentation table failed validation."""


def reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", reduce(self.letters))

    @classmethod
    def parse(cls, text: str, names: str = DEFAULT_NAMES) -> Word:
        letters = []
        for ch in text.replace(" ", ""):
            if ch in ("1", "e"):
                continue
            if ch.lower() not in names:
                raise ValueError(f"unknown generator {ch!r} in word {text!r}")
            g = names.index(ch.lower()) + 1
            letters.append(g if ch.islower() else -g)
        return cls(tuple(letters))

    def format(self, names: str = DEFAULT_NAMES) -> str:
        if not self.letters:
            return "1"
        return "".join(names[x - 1] if x > 0 else names[-x - 1].upper() for x in self.letters)

    def __str__(self) -> str:
        return self.format()

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(tuple(-x for x in reversed(self.letters)))

    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def cyclic_reduction(self) -> Word:
        w = self.letters
        i, j = 0, len(w) - 1
        while i < j and w[i] == -w[j]:
            i += 1
            j -= 1
        return Word(w[i:j + 1])

    def abelianize(self, rank: int) -> tuple[int, ...]:
        counts = [0] * rank
        for x in self.letters:
            counts[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(counts)


def are_conjugate(u: Word, v: Word) -> bool:
    cu, cv = u.cyclic_reduction().letters, v.cyclic_reduction().letters
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    doubled = cu + cu
    n = len(cu)
    return any(doubled[i:i + n] == cv for i in range(n))


def same_curve(u: Word, v: Word) -> bool:
    """Whether two words represent the same unoriented free homotopy class."""
    return are_conjugate(u, v) or are_conjugate(u, v.inverse())


def _substitute(images: Sequence[Word], w: Word) -> Word:
    rank = len(images)
    out: list[int] = []
    for x in w.letters:
        g = abs(x) - 1
        if g >= rank:
            raise ValueError(f"generator {g + 1} out of range for rank {rank}")
        img = images[g].letters
        out.extend(img if x > 0 else (-y for y in reversed(img)))
    return Word(tuple(out))


class FreeAutomorphism:
    """An automorphism given by generator images plus an inverse witness.

    The witness is checked at construction: composing in both orders must
    return every generator to itself.
    """

    __slots__ = ("rank", "images", "inverse_images")

    def __init__(self, images: Sequence[Word], inverse_images: Sequence[Word]):
        images = tuple(images)
        inverse_images = tuple(inverse_images)
        if len(images) != len(inverse_images):
            raise ValueError("images and inverse images have different lengths")
        self.rank = len(images)
        self.images = images
        self.inverse_images = inverse_images
        for g in range(self.rank):
            gen = Word((g + 1,))
            if _substitute(images, inverse_images[g]) != gen or _substitute(inverse_images, images[g]) != gen:
                raise ValueError(f"inverse witness fails on generator {g + 1}")

    @classmethod
    def identity(cls, rank: int) -> FreeAutomorphism:
        gens = [Word((g + 1,)) for g in range(rank)]
        return cls(gens, gens)

    @classmethod
    def inner(cls, w: Word, rank: int) -> FreeAutomorphism:
        """``g -> w g w^-1``."""
        winv = w.inverse()
        return cls([w * Word((g + 1,)) * winv for g in range(rank)],
                   [winv * Word((g + 1,)) * w for g in range(rank)])

    @classmethod
    def parse(cls, images: Sequence[str], inverse_images: Sequence[str], names: str = DEFAULT_NAMES) -> FreeAutomorphism:
        return cls([Word.parse(s, names) for s in images], [Word.parse(s, names) for s in inverse_images])

    def __call__(self, w: Word) -> Word:
        return apply_auto(self, w)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeAutomorphism):
            return NotImplemented
        return self.rank == other.rank and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __matmul__(self, other: FreeAutomorphism) -> FreeAutomorphism:
        return compose(self, other)

    def __pow__(self, k: int) -> FreeAutomorphism:
        return power(self, k)

    def __repr__(self) -> str:
        return f"FreeAutomorphism({[str(w) for w in self.images]})"

    def inverse(self) -> FreeAutomorphism:
        return FreeAutomorphism(self.inverse_images, self.images)

    def is_identity(self) -> bool:
        return all(img == Word((g + 1,)) for g, img in enumerate(self.images))

    def format(self, names: str = DEFAULT_NAMES) -> dict[str, str]:
        return {names[g]: img.format(names) for g, img in enumerate(self.images)}

    def abelianization(self) -> IntMatrix:
        """Induced action on ``Z^rank``; column ``g`` is the image of generator ``g``."""
        return IntMatrix.from_columns([img.abelianize(self.rank) for img in self.images])


def apply_auto(f: FreeAutomorphism, w: Word) -> Word:
    return _substitute(f.images, w)


def compose(f: FreeAutomorphism, g: FreeAutomorphism) -> FreeAutomorphism:
    """``f ∘ g``: apply ``g`` first."""
    if f.rank != g.rank:
        raise ValueError(f"rank mismatch: {f.rank} vs {g.rank}")
    return FreeAutomorphism([_substitute(f.images, w) for w in g.images],
                            [_substitute(g.inverse_images, w) for w in f.inverse_images])


def power(f: FreeAutomorphism, k: int) -> FreeAutomorphism:
    if k < 0:
        f, k = f.inverse(), -k
    result = FreeAutomorphism.identity(f.rank)
    base = f
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def auto_equal(f: FreeAutomorphism, g: FreeAutomorphism) -> bool:
    if f.rank != g.rank:
        raise ValueError(f"rank mismatch: {f.rank} vs {g.rank}")
    return f.images == g.images


def compose_all(autos: Sequence[FreeAutomorphism], rank: int) -> FreeAutomorphism:
    """Functional product ``autos[0] ∘ autos[1] ∘ ...`` (last applied first)."""
    result = FreeAutomorphism.identity(rank)
    for f in autos:
        result = compose(result, f)
    return result


@dataclass(frozen=True)
class SurfacePresentation:
    """Free ``pi_1`` of a surface with boundary, with named curves and twists.

    ``twists[name]`` is the automorphism induced by the left Dehn twist about
    the curve ``curves[name]`` (boundary curves included).  ``pairing`` is the
    intersection pairing on ``H_1 = Z^rank`` in the generator basis, used to
    cross-check each twist's abelianization against the homology formula.
    """

    name: str
    generators: str
    boundaries: Mapping[str, Word]
    curves: Mapping[str, Word]
    twists: Mapping[str, FreeAutomorphism]
    basepoint_boundary: str
    pairing: tuple[tuple[int, ...], ...]
    relations: Mapping[str, tuple[tuple[str, ...], tuple[str, ...]]] | None = None

    @property
    def rank(self) -> int:
        return len(self.generators)

    def twist(self, name: str, k: int = 1) -> FreeAutomorphism:
        try:
            return power(self.twists[name], k)
        except KeyError:
            raise KeyError(f"presentation {self.name!r} has no twist named {name!r}") from None

    def word(self, text: str) -> Word:
        return Word.parse(text, self.generators)

    def format_auto(self, f: FreeAutomorphism) -> dict[str, str]:
        return f.format(self.generators)

    def product(self, factors: Sequence[tuple[str, int]]) -> FreeAutomorphism:
        return compose_all([self.twist(n, k) for n, k in factors], self.rank)

    def curve_named(self, w: Word) -> str | None:
        for name, c in self.curves.items():
            if same_curve(c, w):
                return name
        return None

    def conjugated(self, f: FreeAutomorphism) -> SurfacePresentation:
        """The same data with every twist replaced by ``f ∘ T ∘ f^-1``."""
        finv = f.inverse()
        return _unchecked(self, {n: compose(f, compose(t, finv)) for n, t in self.twists.items()})

    def validate(self) -> list[str]:
        """Return a list of violated invariants (empty when valid)."""
        problems = []
        if set(self.twists) != set(self.curves):
            problems.append(f"twist table names {sorted(self.twists)} differ from curve names {sorted(self.curves)}")
        for name, b in self.boundaries.items():
            if name not in self.curves or not same_curve(self.curves[name], b):
                problems.append(f"boundary {name} is not listed among the curves with the same word")
        base = self.boundaries.get(self.basepoint_boundary)
        if base is None:
            problems.append(f"basepoint boundary {self.basepoint_boundary!r} is not a boundary")
        for name, t in self.twists.items():
            if t.rank != self.rank:
                problems.append(f"twist {name} has rank {t.rank}, expected {self.rank}")
                continue
            for bname, b in self.boundaries.items():
                if not are_conjugate(t(b), b):
                    problems.append(f"twist {name} does not preserve boundary {bname} up to conjugacy")
            if base is not None and t(base) != base:
                problems.append(f"twist {name} moves the basepoint boundary word {base}")
            c = self.curves.get(name)
            if c is not None and not are_conjugate(t(c), c):
                problems.append(f"twist {name} does not fix its own curve {c} up to conjugacy")
            if c is not None:
                expected = twist_homology_matrix(self.pairing, c.abelianize(self.rank))
                if t.abelianization() != expected:
                    problems.append(
                        f"twist {name}: abelianization {t.abelianization()} != homology twist matrix {expected}")
        return problems


def _unchecked(p: SurfacePresentation, twists: Mapping[str, FreeAutomorphism]) -> SurfacePresentation:
    return SurfacePresentation(
        name=p.name, generators=p.generators, boundaries=p.boundaries, curves=p.curves, twists=twists,
        basepoint_boundary=p.basepoint_boundary, pairing=p.pairing, relations=p.relations)


DATA_ENV = "TWISTCALC_DATA"


def data_root() -> Path:
    """Directory holding ``presentations/`` and ``bindings/``.

    ``$TWISTCALC_DATA`` overrides the copy shipped inside the package.
    """
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def _presentation_path(name_or_path: str | os.PathLike) -> Path:
    p = Path(name_or_path)
    if p.suffix in (".yaml", ".yml") or p.exists():
        return p
    return data_root() / "presentations" / f"{name_or_path}.yaml"


def parse_presentation(doc: Mapping) -> SurfacePresentation:
    try:
        gens = str(doc["generators"])
        if len(set(gens)) != len(gens) or not gens.isalpha() or not gens.islower():
            raise PresentationError(f"generators must be distinct lowercase letters, got {gens!r}")

        def word(text) -> Word:
            return Word.parse(str(text), gens)

        twists = {}
        for name, entry in doc["twists"].items():
            images, inverse = entry["images"], entry["inverse"]
            if len(images) != len(gens) or len(inverse) != len(gens):
                raise PresentationError(f"twist {name}: expected {len(gens)} images")
            try:
                twists[str(name)] = FreeAutomorphism([word(w) for w in images], [word(w) for w in inverse])
            except ValueError as exc:
                raise PresentationError(f"twist {name}: {exc}") from exc
        relations = {
            str(k): (tuple(str(n) for n in v["lhs"]), tuple(str(n) for n in v["rhs"]))
            for k, v in (doc.get("relations") or {}).items()
        }
        pres = SurfacePresentation(
            name=str(doc["name"]),
            generators=gens,
            boundaries={str(k): word(v) for k, v in doc["boundaries"].items()},
            curves={str(k): word(v) for k, v in doc["curves"].items()},
            twists=twists,
            basepoint_boundary=str(doc["basepoint_boundary"]),
            pairing=tuple(tuple(int(x) for x in row) for row in doc["pairing"]),
            relations=relations,
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise PresentationError(f"malformed presentation table: {exc!r}") from exc
    except ValueError as exc:
        if isinstance(exc, PresentationError):
            raise
        raise PresentationError(str(exc)) from exc
    if len(pres.pairing) != pres.rank:
        raise PresentationError(f"pairing must be {pres.rank}x{pres.rank}")
    try:
        problems = pres.validate()
    except ValueError as exc:
        problems = [str(exc)]
    if problems:
        raise PresentationError(f"presentation {pres.name!r} is invalid: " + "; ".join(problems))
    return pres


@functools.lru_cache(maxsize=None)
def _load_cached(path: Path, mtime: float) -> SurfacePresentation:
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, Mapping):
        raise PresentationError(f"{path}: expected a mapping at top level")
    return parse_presentation(doc)


def load_presentation(name_or_path: str | os.PathLike) -> SurfacePresentation:
    """Load and validate a presentation by shipped name or file path."""
    path = _presentation_path(name_or_path)
    try:
        mtime = path.stat().st_mtime
    except OSError as exc:
        raise PresentationError(f"cannot read presentation {str(path)!r}: {exc.strerror}") from exc
    try:
        return _load_cached(path.resolve(), mtime)
    except yaml.YAMLError as exc:
        raise PresentationError(f"{path}: {exc}") from exc


def _images_witness(pres: SurfacePresentation, **sides: FreeAutomorphism) -> Witness:
    return Witness("generator-images", {k: pres.format_auto(f) for k, f in sides.items()})


def verify_relation(pres: SurfacePresentation, lhs: Sequence[tuple[str, int]],
                    rhs: Sequence[tuple[str, int]]) -> Verdict:
    left, right = pres.product(lhs), pres.product(rhs)
    if auto_equal(left, right):
        return Verdict(Status.RELATION_HOLDS, "automorphisms-equal", _images_witness(pres, lhs=left, rhs=right))
    g = next(i for i in range(pres.rank) if left.images[i] != right.images[i])
    return Verdict(
        Status.RELATION_FAILS, "automorphisms-differ", _images_witness(pres, lhs=left, rhs=right),
        details={"generator": pres.generators[g]})


def verify_lantern(pres: SurfacePresentation | None = None) -> Verdict:
    """Check ``T_x T_y T_z = T_b1 T_b2 T_b3 T_b4`` on the lantern table."""
    pres = pres or load_presentation("lantern")
    lhs, rhs = pres.relations["lantern"]
    return verify_relation(pres, [(n, 1) for n in lhs], [(n, 1) for n in rhs])


def verify_two_chain(k: int, pres: SurfacePresentation | None = None) -> Verdict:
    """Compare ``(T_x T_y)^k`` with powers of the boundary twist ``T_c``.

    For ``6 | k`` the comparison is with ``T_c^(k/6)``.  Otherwise the verdict
    certifies that ``(T_x T_y)^k`` differs from ``T_c^j`` for every
    ``|j| <= |k|``.
    """
    if k == 0:
        raise ValueError("k must be nonzero")
    pres = pres or load_presentation("two-chain")
    boundary = pres.basepoint_boundary
    left = power(compose(pres.twist("x"), pres.twist("y")), k)
    if k % 6 == 0:
        j = k // 6
        right = pres.twist(boundary, j)
        status = Status.RELATION_HOLDS if auto_equal(left, right) else Status.RELATION_FAILS
        reason = "automorphisms-equal" if status is Status.RELATION_HOLDS else "automorphisms-differ"
        return Verdict(status, reason, _images_witness(pres, lhs=left, rhs=right), power=j)
    matches = [j for j in range(-abs(k), abs(k) + 1) if auto_equal(left, pres.twist(boundary, j))]
    if matches:
        return Verdict(Status.RELATION_HOLDS, "boundary-power-match", _images_witness(pres, lhs=left),
                       power=matches[0])
    return Verdict(
        Status.RELATION_FAILS, "no-boundary-power", _images_witness(pres, lhs=left),
        details={"checked_powers": [-abs(k), abs(k)]})
