"""Formula AST for the propositional / monadic first-order fragment.

The surface notation is ASCII::

    p -> q        p_2 <-> q       ~p       p and q       p or q
    forall x_2: Q(x_2) and P_2(x_2)        exists x: P(x) -> Q(a)

Precedence, tightest first: ``~``, then ``and`` / ``or`` (which may not be mixed
at one level without parentheses), then ``->`` / ``<->`` (right associative).
A quantifier may only open a clause; its scope runs to the end of the clause.

Lexical classes: a lowercase identifier in formula position is a proposition,
an identifier starting with an uppercase letter and followed by ``(`` is a
predicate, and inside a predicate argument ``x`` / ``x_n`` is a variable while any
other lowercase identifier is a constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Union


class ParseError(ValueError):
    """Malformed notation. ``position`` is a character offset into the input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RenameError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Terms and formulas


@dataclass(frozen=True, slots=True)
class Const:
    name: str


@dataclass(frozen=True, slots=True)
class Var:
    name: str


Term = Union[Const, Var]


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class PredApp:
    pred: str
    arg: Term


@dataclass(frozen=True, slots=True)
class Not:
    f: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True, slots=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Atom, PredApp, Not, And, Or, Implies, Iff, ForAll, Exists]
Binary = (And, Or, Implies, Iff)
Quantifier = (ForAll, Exists)


def is_literal(f: Formula) -> bool:
    if isinstance(f, Not):
        f = f.f
    return isinstance(f, (Atom, PredApp))


def is_ground_literal(f: Formula) -> bool:
    if isinstance(f, Not):
        f = f.f
    return isinstance(f, Atom) or (isinstance(f, PredApp) and isinstance(f.arg, Const))


def negate(f: Formula) -> Formula:
    """Negation that never stacks: ``~~p`` collapses to ``p``, and negation is
    pushed through a prenex quantifier so the result stays in the fragment."""
    if isinstance(f, Not):
        return f.f
    if isinstance(f, ForAll):
        return Exists(f.var, negate(f.body))
    if isinstance(f, Exists):
        return ForAll(f.var, negate(f.body))
    return Not(f)


# ---------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow><->|->)|(?P<punct>[~():,])|(?P<ident>[A-Za-z][A-Za-z0-9]*(?:_[0-9]+)?))"
)
_KEYWORDS = {"and", "or", "forall", "exists"}
_VARIABLE_RE = re.compile(r"x(?:_[0-9]+)?\Z")


def is_variable_name(name: str) -> bool:
    return bool(_VARIABLE_RE.match(name))


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def clause(self) -> Formula:
        tok = self.peek()
        if tok in ("forall", "exists"):
            self.take()
            var_pos = self.pos()
            var = self.take()
            if not is_variable_name(var):
                raise ParseError(f"{var!r} is not a variable", var_pos)
            self.take(":")
            if self.peek() in ("forall", "exists"):
                raise ParseError("nested quantifiers are outside the fragment", self.pos())
            body = self.expr()
            return ForAll(var, body) if tok == "forall" else Exists(var, body)
        return self.expr()

    def expr(self) -> Formula:
        left = self.junction()
        tok = self.peek()
        if tok in ("->", "<->"):
            self.take()
            right = self.expr()
            return Implies(left, right) if tok == "->" else Iff(left, right)
        return left

    def junction(self) -> Formula:
        left = self.unary()
        op = None
        while self.peek() in ("and", "or"):
            tok_pos = self.pos()
            tok = self.take()
            if op is not None and tok != op:
                raise ParseError("mixing 'and' and 'or' requires parentheses", tok_pos)
            op = tok
            right = self.unary()
            left = And(left, right) if tok == "and" else Or(left, right)
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        pos = self.pos()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            if self.peek() in ("forall", "exists"):
                raise ParseError("quantifier inside a connective is outside the fragment", self.pos())
            inner = self.expr()
            self.take(")")
            return inner
        if tok in ("forall", "exists"):
            raise ParseError("quantifier inside a connective is outside the fragment", pos)
        if tok in _KEYWORDS or not tok[:1].isalpha():
            raise ParseError(f"unexpected token {tok!r}", pos)
        self.take()
        if tok[0].isupper():
            self.take("(")
            arg_pos = self.pos()
            arg = self.take()
            if arg in _KEYWORDS or not arg[:1].islower():
                raise ParseError(f"bad predicate argument {arg!r}", arg_pos)
            if self.peek() == ",":
                raise ParseError("only unary predicates are supported", self.pos())
            self.take(")")
            term: Term = Var(arg) if is_variable_name(arg) else Const(arg)
            return PredApp(tok, term)
        if self.peek() == "(":
            raise ParseError(f"predicate {tok!r} must start with an uppercase letter", self.pos())
        return Atom(tok)


def parse_formula(text: str) -> Formula:
    if not text or not text.strip():
        raise ParseError("empty formula", 0)
    parser = _Parser(text)
    f = parser.clause()
    if parser.peek() != "<end>":
        raise ParseError(f"unexpected token {parser.peek()!r}", parser.pos())
    _check_bound(f)
    return f


def _check_bound(f: Formula) -> None:
    bound = f.var if isinstance(f, Quantifier) else None
    for term in iter_terms(f):
        if isinstance(term, Var) and term.name != bound:
            raise ParseError(f"free variable {term.name!r}", 0)


# ---------------------------------------------------------------------------
# Rendering

_LEVEL = {Implies: 1, Iff: 1, And: 2, Or: 2, Not: 3, Atom: 4, PredApp: 4}


def _term(t: Term) -> str:
    return t.name


def render_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, PredApp):
        return f"{f.pred}({_term(f.arg)})"
    if isinstance(f, ForAll):
        return f"forall {f.var}: {render_formula(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}: {render_formula(f.body)}"
    if isinstance(f, Not):
        inner = render_formula(f.f)
        return f"~({inner})" if _LEVEL[type(f.f)] <= 2 else f"~{inner}"
    if isinstance(f, (Implies, Iff)):
        op = "->" if isinstance(f, Implies) else "<->"
        left = render_formula(f.l)
        if _LEVEL[type(f.l)] <= 1:
            left = f"({left})"
        return f"{left} {op} {render_formula(f.r)}"
    if isinstance(f, (And, Or)):
        op = "and" if isinstance(f, And) else "or"
        left = render_formula(f.l)
        if _LEVEL[type(f.l)] < 2 or (_LEVEL[type(f.l)] == 2 and type(f.l) is not type(f)):
            left = f"({left})"
        right = render_formula(f.r)
        if _LEVEL[type(f.r)] <= 2:
            right = f"({right})"
        return f"{left} {op} {right}"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Traversal, symbols, renaming


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order, left to right."""
    yield f
    if isinstance(f, Not):
        yield from iter_subformulas(f.f)
    elif isinstance(f, Binary):
        yield from iter_subformulas(f.l)
        yield from iter_subformulas(f.r)
    elif isinstance(f, Quantifier):
        yield from iter_subformulas(f.body)


def iter_terms(f: Formula) -> Iterator[Term]:
    for sub in iter_subformulas(f):
        if isinstance(sub, PredApp):
            yield sub.arg


@dataclass(frozen=True)
class SymbolInventory:
    propositions: tuple[str, ...] = ()
    predicates: tuple[str, ...] = ()
    constants: tuple[str, ...] = ()
    variables: tuple[str, ...] = ()

    def all_names(self) -> set[str]:
        return {*self.propositions, *self.predicates, *self.constants, *self.variables}

    def __len__(self) -> int:
        return len(self.propositions) + len(self.predicates) + len(self.constants) + len(self.variables)


def collect_symbols(*formulas: Formula) -> SymbolInventory:
    """Symbols of ``formulas`` in first-occurrence order (left-to-right walk)."""
    props: dict[str, None] = {}
    preds: dict[str, None] = {}
    consts: dict[str, None] = {}
    variables: dict[str, None] = {}
    for f in formulas:
        for sub in iter_subformulas(f):
            if isinstance(sub, Quantifier):
                variables.setdefault(sub.var)
            elif isinstance(sub, Atom):
                props.setdefault(sub.name)
            elif isinstance(sub, PredApp):
                preds.setdefault(sub.pred)
                if isinstance(sub.arg, Var):
                    variables.setdefault(sub.arg.name)
                else:
                    consts.setdefault(sub.arg.name)
    classes = (props, preds, consts, variables)
    for i, a in enumerate(classes):
        for b in classes[i + 1:]:
            clash = a.keys() & b.keys()
            if clash:
                raise ValueError(f"symbol used in two lexical classes: {sorted(clash)}")
    return SymbolInventory(tuple(props), tuple(preds), tuple(consts), tuple(variables))


def map_formula(
    f: Formula,
    atom: Callable[[Atom], Formula],
    pred: Callable[[PredApp], Formula],
    var: Callable[[str], str] = lambda v: v,
) -> Formula:
    """Rebuild ``f`` bottom-up, replacing leaves via the callbacks."""
    if isinstance(f, Atom):
        return atom(f)
    if isinstance(f, PredApp):
        return pred(f)
    if isinstance(f, Not):
        return Not(map_formula(f.f, atom, pred, var))
    if isinstance(f, Binary):
        return type(f)(map_formula(f.l, atom, pred, var), map_formula(f.r, atom, pred, var))
    if isinstance(f, Quantifier):
        return type(f)(var(f.var), map_formula(f.body, atom, pred, var))
    raise TypeError(f"not a formula: {f!r}")


def rename_symbols(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename leaf symbols of ``f``; names missing from ``mapping`` are kept.

    The renaming must stay injective on the symbols of ``f`` (two distinct
    symbols may not end up with the same name) and must not move a symbol into
    another lexical class.
    """
    inv = collect_symbols(f)
    check_renaming(inv, mapping)
    return _rename_unchecked(f, mapping)


def check_renaming(inv: SymbolInventory, mapping: Mapping[str, str]) -> None:
    images: dict[str, str] = {}
    for cls, names in (("proposition", inv.propositions), ("predicate", inv.predicates),
                       ("constant", inv.constants), ("variable", inv.variables)):
        for name in names:
            new = mapping.get(name, name)
            if new in images and images[new] != name:
                raise RenameError(f"renaming merges {images[new]!r} and {name!r} into {new!r}")
            images[new] = name
            if cls == "variable" and not is_variable_name(new):
                raise RenameError(f"variable {name!r} renamed to non-variable {new!r}")
            if cls == "constant" and is_variable_name(new):
                raise RenameError(f"constant {name!r} renamed to variable name {new!r}")
            if cls == "predicate" and not new[:1].isupper():
                raise RenameError(f"predicate {name!r} renamed to {new!r}")
            if cls in ("proposition", "constant") and not new[:1].islower():
                raise RenameError(f"{cls} {name!r} renamed to {new!r}")


def _rename_unchecked(f: Formula, mapping: Mapping[str, str]) -> Formula:
    def term(t: Term) -> Term:
        new = mapping.get(t.name, t.name)
        return t if new == t.name else type(t)(new)

    return map_formula(
        f,
        atom=lambda a: Atom(mapping.get(a.name, a.name)),
        pred=lambda p: PredApp(mapping.get(p.pred, p.pred), term(p.arg)),
        var=lambda v: mapping.get(v, v),
    )


def rename_many(formulas, mapping: Mapping[str, str]) -> list[Formula]:
    """Rename a list of formulas that share one symbol space."""
    check_renaming(collect_symbols(*formulas), mapping)
    return [_rename_unchecked(f, mapping) for f in formulas]


def substitute_var(f: Formula, var: str, const: str) -> Formula:
    """Replace free occurrences of variable ``var`` with constant ``const``."""
    if isinstance(f, Quantifier) and f.var == var:
        return f
    return map_formula(
        f,
        atom=lambda a: a,
        pred=lambda p: PredApp(p.pred, Const(const)) if p.arg == Var(var) else p,
    )
