"""A small language for twist words and relations between them.

Grammar (whitespace is insignificant)::

    statement := word ("=" word)?
    word      := "1" | factor (("*")? factor)*
    factor    := atom ("^" exponent)?
    atom      := TWIST | "(" word ")"
    exponent  := INT | "{" INT "}"          INT is an optionally signed integer
    TWIST     := "T_" [A-Za-z0-9_]+

``T_b1`` is the twist about the curve named ``b1``.  Words are read as
functional composition: in ``T_x T_y`` the rightmost factor ``T_y`` acts
first, so its value is ``eval(T_x) @ eval(T_y)``.  This matches the matrix
convention in :mod:`twistcalc.intmat` (matrices act on column vectors) and
:func:`twistcalc.freegrp.compose`.

An exponent of 0 is accepted and the factor is dropped with a
:class:`ZeroExponentWarning`.
"""

from __future__ import annotations

import os
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Union

import yaml

from twistcalc.freegrp import FreeAutomorphism, SurfacePresentation, data_root, load_presentation
from twistcalc.intmat import IntMatrix, check_pairing, twist_homology_matrix
from twistcalc.slopes import Slope, SurfaceModel, twist_slope_matrix
from twistcalc.verdict import Status, Verdict, Witness


@dataclass(frozen=True)
class Twist:
    name: str
    exp: int = 1


@dataclass(frozen=True)
class Group:
    word: TwistWord
    exp: int = 1


Factor = Union[Twist, Group]


@dataclass(frozen=True)
class TwistWord:
    factors: tuple[Factor, ...] = ()

    def __len__(self) -> int:
        return len(self.factors)

    def names(self) -> set[str]:
        out: set[str] = set()
        for f in self.factors:
            out |= {f.name} if isinstance(f, Twist) else f.word.names()
        return out

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class RelationStatement:
    lhs: TwistWord
    rhs: TwistWord

    def names(self) -> set[str]:
        return self.lhs.names() | self.rhs.names()

    def __str__(self) -> str:
        return pretty(self)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: frozenset[str]):
        self.line, self.column, self.expected = line, column, expected
        exp = ", ".join(sorted(expected))
        super().__init__(f"{message} at line {line}, column {column}; expected one of: {exp}")


class ZeroExponentWarning(UserWarning):
    pass


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<twist>T_[A-Za-z0-9_]+)
  | (?P<int>[+-]?\d+)
  | (?P<op>[()*^={}])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1,
                             frozenset({"T_<name>", "(", ")", "*", "^", "=", "1"}))
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, i + 1
        else:
            toks.append(_Tok(kind if kind != "op" else m.group(), m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_FACTOR_START = frozenset({"T_<name>", "("})


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: set[str] | frozenset[str]) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(f"unexpected {what}", t.line, t.column, frozenset(expected))

    def take(self, kind: str) -> _Tok:
        t = self.tok
        if t.kind != kind:
            raise self.fail({kind})
        self.i += 1
        return t

    def statement(self) -> TwistWord | RelationStatement:
        lhs = self.word()
        if self.tok.kind == "=":
            self.i += 1
            rhs = self.word()
            self.expect_end({"end of input"} | _FACTOR_START | {"*", "^"})
            return RelationStatement(lhs, rhs)
        self.expect_end({"end of input", "="} | _FACTOR_START | {"*", "^"})
        return lhs

    def expect_end(self, expected: set[str]) -> None:
        if self.tok.kind != "eof":
            raise self.fail(expected)

    def word(self) -> TwistWord:
        t = self.tok
        if t.kind == "int" and t.text == "1":
            self.i += 1
            return TwistWord()
        factors: list[Factor] = []
        f = self.factor(first=True)
        if f is not None:
            factors.append(f)
        while True:
            if self.tok.kind == "*":
                self.i += 1
                f = self.factor(first=True)
            elif self.tok.kind in ("twist", "("):
                f = self.factor(first=False)
            else:
                break
            if f is not None:
                factors.append(f)
        return TwistWord(tuple(factors))

    def factor(self, first: bool) -> Factor | None:
        t = self.tok
        if t.kind == "twist":
            self.i += 1
            exp = self.exponent()
            if exp == 0:
                warnings.warn(f"{t.text}^0 at line {t.line}, column {t.column} is the identity and was dropped",
                              ZeroExponentWarning, stacklevel=4)
                return None
            return Twist(t.text[2:], exp)
        if t.kind == "(":
            self.i += 1
            inner = self.word()
            if self.tok.kind != ")":
                raise self.fail({")", "*"} | _FACTOR_START)
            self.i += 1
            exp = self.exponent()
            if exp == 0 or not inner.factors:
                if exp == 0:
                    warnings.warn(f"group at line {t.line}, column {t.column} has exponent 0 and was dropped",
                                  ZeroExponentWarning, stacklevel=4)
                return None
            return Group(inner, exp)
        raise self.fail(_FACTOR_START | ({"1"} if first else set()))

    def exponent(self) -> int:
        if self.tok.kind != "^":
            return 1
        self.i += 1
        if self.tok.kind == "{":
            self.i += 1
            value = int(self.take_int().text)
            self.take("}")
            return value
        return int(self.take_int().text)

    def take_int(self) -> _Tok:
        if self.tok.kind != "int":
            raise self.fail({"<integer>", "{"})
        t = self.tok
        self.i += 1
        return t


def parse(text: str) -> TwistWord | RelationStatement:
    return _Parser(text).statement()


def parse_word(text: str) -> TwistWord:
    out = parse(text)
    if not isinstance(out, TwistWord):
        raise ValueError("expected a twist word, got a relation")
    return out


def parse_relation(text: str) -> RelationStatement:
    out = parse(text)
    if not isinstance(out, RelationStatement):
        raise ValueError("expected a relation 'lhs = rhs'")
    return out


def _pretty_exp(e: int) -> str:
    return "" if e == 1 else f"^{e}"


def pretty(node: TwistWord | RelationStatement | Factor) -> str:
    if isinstance(node, RelationStatement):
        return f"{pretty(node.lhs)} = {pretty(node.rhs)}"
    if isinstance(node, Twist):
        return f"T_{node.name}{_pretty_exp(node.exp)}"
    if isinstance(node, Group):
        return f"({pretty(node.word)}){_pretty_exp(node.exp)}"
    if not node.factors:
        return "1"
    return " ".join(pretty(f) for f in node.factors)


def flatten(word: TwistWord) -> list[tuple[str, int]]:
    """Expand groups: ``(W)^m`` is ``m`` copies of ``W``, or ``|m|`` copies of ``W^-1``."""
    out: list[tuple[str, int]] = []
    for f in word.factors:
        if isinstance(f, Twist):
            out.append((f.name, f.exp))
        else:
            inner = flatten(f.word)
            if f.exp < 0:
                inner = [(n, -e) for n, e in reversed(inner)]
            out.extend(inner * abs(f.exp))
    return out


class BindingError(ValueError):
    pass


BACKENDS = ("homology", "slope", "freegroup")


@dataclass(frozen=True)
class BoundCurve:
    backend: str
    datum: object


class Binding:
    """Immutable map from curve names to backend data.

    ``context`` holds the per-backend shared data: the pairing for homology,
    the surface model for slopes and the presentation for the free group.
    """

    def __init__(self, curves: Mapping[str, BoundCurve], context: Mapping[str, object]):
        self._curves = MappingProxyType(dict(curves))
        self._context = MappingProxyType(dict(context))

    @property
    def curves(self) -> Mapping[str, BoundCurve]:
        return self._curves

    @property
    def context(self) -> Mapping[str, object]:
        return self._context

    def backend_for(self, names) -> str:
        missing = sorted(n for n in names if n not in self._curves)
        if missing:
            raise BindingError(f"unbound curve name(s): {', '.join(missing)}")
        backends = {self._curves[n].backend for n in names} or {self.default_backend}
        if len(backends) > 1:
            raise BindingError(f"mixed backends {sorted(backends)}; a statement must use one backend")
        return backends.pop()

    @property
    def default_backend(self) -> str:
        found = {c.backend for c in self._curves.values()} or {str(self._context.get("backend"))}
        return sorted(found)[0]

    def identity(self, backend: str):
        if backend == "freegroup":
            return FreeAutomorphism.identity(self._presentation().rank)
        if backend == "homology":
            return IntMatrix.identity(len(self._pairing()))
        return IntMatrix.identity(2)

    def _pairing(self):
        if "pairing" not in self._context:
            raise BindingError("homology backend needs a pairing")
        return self._context["pairing"]

    def _presentation(self) -> SurfacePresentation:
        if "presentation" not in self._context:
            raise BindingError("freegroup backend needs a presentation")
        return self._context["presentation"]

    def twist(self, name: str, exp: int):
        c = self._curves[name]
        if c.backend == "homology":
            return twist_homology_matrix(self._pairing(), c.datum, exp)
        if c.backend == "slope":
            model, slope = c.datum
            return twist_slope_matrix(model, slope, exp)
        return self._presentation().twist(c.datum, exp)


def _slope_datum(value, default_model: SurfaceModel | None) -> tuple[SurfaceModel, Slope]:
    if isinstance(value, Mapping):
        model = SurfaceModel.parse(value["model"]) if "model" in value else default_model
        value = value["slope"]
    else:
        model = default_model
    if model is None:
        raise BindingError("slope binding needs a model")
    if isinstance(value, (list, tuple)):
        return model, Slope(*value)
    return model, Slope.parse(str(value))


def binding_from_doc(doc: Mapping) -> Binding:
    """Build a binding from a parsed document; see ``data/bindings`` for the schema."""
    if not isinstance(doc, Mapping):
        raise BindingError("binding document must be a mapping")
    default = doc.get("backend")
    if default not in BACKENDS:
        raise BindingError(f"binding backend must be one of {BACKENDS}, got {default!r}")
    context: dict[str, object] = {"backend": default}
    try:
        if "pairing" in doc:
            context["pairing"] = tuple(tuple(int(x) for x in row) for row in doc["pairing"])
            check_pairing(context["pairing"])
        model = SurfaceModel.parse(doc["model"]) if "model" in doc else None
        if "presentation" in doc:
            context["presentation"] = load_presentation(doc["presentation"])
        raw = doc.get("curves")
        if raw is None and default == "freegroup" and "presentation" in context:
            raw = {name: name for name in context["presentation"].twists}
        if not isinstance(raw, Mapping):
            raise BindingError("binding needs a 'curves' mapping")
        curves: dict[str, BoundCurve] = {}
        for name, value in raw.items():
            name = str(name)
            if not re.fullmatch(r"[A-Za-z0-9_]+", name):
                raise BindingError(f"bad curve name {name!r}")
            backend = value.get("backend", default) if isinstance(value, Mapping) else default
            if backend not in BACKENDS:
                raise BindingError(f"curve {name}: unknown backend {backend!r}")
            if backend == "homology":
                vec = value["class"] if isinstance(value, Mapping) else value
                datum: object = tuple(int(x) for x in vec)
                if "pairing" in context and len(datum) != len(context["pairing"]):
                    raise BindingError(f"curve {name}: class has the wrong length")
            elif backend == "slope":
                datum = _slope_datum(value, model)
            else:
                datum = str(value["twist"] if isinstance(value, Mapping) else value)
                pres = context.get("presentation")
                if pres is not None and datum not in pres.twists:
                    raise BindingError(f"curve {name}: presentation has no twist {datum!r}")
            curves[name] = BoundCurve(backend, datum)
    except BindingError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise BindingError(f"invalid binding: {exc}") from exc
    return Binding(curves, context)


def _binding_path(name_or_path: str | os.PathLike) -> Path:
    p = Path(name_or_path)
    if p.exists():
        return p
    name = p.name if p.suffix == ".bind" else f"{p.name}.bind"
    return data_root() / "bindings" / name


def load_binding(name_or_path: str | os.PathLike) -> Binding:
    """Load a ``.bind`` file (YAML), by path or by name under the data root."""
    path = _binding_path(name_or_path)
    try:
        doc = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise BindingError(f"cannot read binding {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise BindingError(f"binding {path} is not valid YAML: {exc}") from exc
    return binding_from_doc(doc)


def _eval(word: TwistWord, binding: Binding, backend: str):
    value = binding.identity(backend)
    for f in word.factors:
        if isinstance(f, Twist):
            value = value @ binding.twist(f.name, f.exp)
        else:
            value = value @ (_eval(f.word, binding, backend) ** f.exp)
    return value


def evaluate(word: TwistWord, binding: Binding) -> IntMatrix | FreeAutomorphism:
    """Value of a word in the binding's backend; rightmost factor acts first."""
    return _eval(word, binding, binding.backend_for(word.names()))


def _values_equal(binding: Binding, backend: str, names, a, b) -> tuple[bool, str]:
    if backend == "slope":
        models = {binding.curves[n].datum[0] for n in names}
        if models and not all(m.is_torus for m in models):
            # Slopes on the four-punctured sphere do not see the sign of the matrix.
            return a == b or a == -b, "projective"
    return a == b, "exact"


def render_value(value, binding: Binding):
    if isinstance(value, FreeAutomorphism):
        return binding.context["presentation"].format_auto(value)
    return value.tolist()


def check_relation(stmt: RelationStatement, binding: Binding) -> Verdict:
    names = stmt.names()
    backend = binding.backend_for(names)
    lhs = _eval(stmt.lhs, binding, backend)
    rhs = _eval(stmt.rhs, binding, backend)
    equal, mode = _values_equal(binding, backend, names, lhs, rhs)
    status = Status.RELATION_HOLDS if equal else Status.RELATION_FAILS
    return Verdict(status, "values-equal" if equal else "values-differ", Witness("values", {
        "backend": backend, "comparison": mode,
        "lhs": render_value(lhs, binding), "rhs": render_value(rhs, binding),
    }), details={"statement": pretty(stmt)})
