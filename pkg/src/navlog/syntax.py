"""Text formats: the navigability formula language and the .ets system format.

Formulas follow a small grammar over one fixed view universe:

    formula := implies
    implies := unary ('->' implies)?            (right associative)
    unary   := '!' unary | '(' formula ')' | atom
    atom    := 'nav' '(' set ';' set ';' set ')'
    set     := '{' (VIEW (',' VIEW)*)? '}' | 'ALL'

Whitespace is insignificant and '#' starts a comment running to end of line.
`ALL` names the full view universe.  System descriptions (.ets) are
line-oriented: `views`, `instructions`, `state`, and `trans` directives, with
declarations preceding use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .core import EpistemicTransitionSystem, RawSystem, Universe, validate_system

__all__ = [
    "Atom", "AtomNode", "Not", "Implies", "Formula", "ParseError",
    "parse_formula", "render_formula", "as_atom",
    "parse_system", "render_system",
]


class ParseError(ValueError):
    """Syntax problem in a formula or .ets description, with its position."""

    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        place = ""
        if line is not None:
            place = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + place)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Atom:
    """One navigability claim: start views, corridor views, target views.

    Each component is stored sorted by view declaration order, so two atoms
    built from the same sets compare equal no matter how the input was
    ordered.
    """

    start: tuple[str, ...]
    corridor: tuple[str, ...]
    target: tuple[str, ...]

    @classmethod
    def over(cls, universe: Universe, start: Iterable[str],
             corridor: Iterable[str], target: Iterable[str]) -> "Atom":
        def canon(names: Iterable[str]) -> tuple[str, ...]:
            ks = sorted({universe.index(n) for n in names})
            return tuple(universe.names[k] for k in ks)
        return cls(canon(start), canon(corridor), canon(target))

    @classmethod
    def from_masks(cls, universe: Universe, start: int, corridor: int, target: int) -> "Atom":
        return cls(universe.names_of(start), universe.names_of(corridor),
                   universe.names_of(target))

    def masks(self, universe: Universe) -> tuple[int, int, int]:
        return (universe.mask(self.start), universe.mask(self.corridor),
                universe.mask(self.target))


@dataclass(frozen=True)
class AtomNode:
    atom: Atom


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class Implies:
    antecedent: "Formula"
    consequent: "Formula"


Formula = Union[AtomNode, Not, Implies]


def as_atom(formula: Formula) -> Optional[Atom]:
    """The bare atom if the formula is exactly one claim, else None."""
    return formula.atom if isinstance(formula, AtomNode) else None


_TOKEN = re.compile(r"->|[!(){};,]|[A-Za-z0-9_]+")


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    """(token, line, col) triples; comments and blanks dropped."""
    out: list[tuple[str, int, int]] = []
    for ln, line in enumerate(text.splitlines(), start=1):
        hash_at = line.find("#")
        if hash_at >= 0:
            line = line[:hash_at]
        at = 0
        for m in _TOKEN.finditer(line):
            gap = line[at:m.start()]
            if gap.strip():
                raise ParseError(f"unexpected character {gap.strip()[0]!r}", ln, at + 1)
            out.append((m.group(), ln, m.start() + 1))
            at = m.end()
        tail = line[at:]
        if tail.strip():
            raise ParseError(f"unexpected character {tail.strip()[0]!r}", ln, at + 1)
    return out


class _FormulaParser:
    def __init__(self, tokens: list[tuple[str, int, int]], universe: Universe):
        self.tokens = tokens
        self.universe = universe
        self.at = 0

    def _peek(self) -> Optional[str]:
        return self.tokens[self.at][0] if self.at < len(self.tokens) else None

    def _take(self) -> tuple[str, int, int]:
        if self.at >= len(self.tokens):
            last = self.tokens[-1] if self.tokens else (None, 1, 1)
            raise ParseError("formula ends unexpectedly", last[1], last[2])
        tok = self.tokens[self.at]
        self.at += 1
        return tok

    def _expect(self, want: str) -> None:
        tok, ln, col = self._take()
        if tok != want:
            raise ParseError(f"expected {want!r}, found {tok!r}", ln, col)

    def parse(self) -> Formula:
        f = self._implies()
        if self.at < len(self.tokens):
            tok, ln, col = self.tokens[self.at]
            raise ParseError(f"unexpected trailing {tok!r}", ln, col)
        return f

    def _implies(self) -> Formula:
        left = self._unary()
        if self._peek() == "->":
            self._take()
            return Implies(left, self._implies())
        return left

    def _unary(self) -> Formula:
        tok = self._peek()
        if tok == "!":
            self._take()
            return Not(self._unary())
        if tok == "(":
            self._take()
            f = self._implies()
            self._expect(")")
            return f
        return self._atom()

    def _atom(self) -> Formula:
        tok, ln, col = self._take()
        if tok != "nav":
            raise ParseError(f"expected an atom, found {tok!r}", ln, col)
        self._expect("(")
        start = self._set()
        self._expect(";")
        corridor = self._set()
        self._expect(";")
        target = self._set()
        self._expect(")")
        return AtomNode(Atom.over(self.universe, start, corridor, target))

    def _set(self) -> list[str]:
        tok, ln, col = self._take()
        if tok == "ALL":
            return list(self.universe.names)
        if tok != "{":
            raise ParseError(f"expected a view set, found {tok!r}", ln, col)
        names: list[str] = []
        if self._peek() == "}":
            self._take()
            return names
        while True:
            name, ln, col = self._take()
            if not re.fullmatch(r"[A-Za-z0-9_]+", name):
                raise ParseError(f"expected a view name, found {name!r}", ln, col)
            if name not in self.universe:
                raise ParseError(f"unknown view {name!r}", ln, col)
            names.append(name)
            tok, ln, col = self._take()
            if tok == "}":
                return names
            if tok != ",":
                raise ParseError(f"expected ',' or '}}', found {tok!r}", ln, col)


def parse_formula(text: str, universe: Universe) -> Formula:
    """Parse a formula over the given universe; raises ParseError."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty formula")
    return _FormulaParser(tokens, universe).parse()


def render_formula(formula: Formula) -> str:
    """Canonical text for a formula, with minimal parentheses.

    Implication renders right-associated; a left-nested implication and a
    negated implication are the only spots that need parentheses.
    """
    if isinstance(formula, AtomNode):
        a = formula.atom
        seg = lambda names: "{" + ",".join(names) + "}"
        return f"nav({seg(a.start)}; {seg(a.corridor)}; {seg(a.target)})"
    if isinstance(formula, Not):
        inner = render_formula(formula.operand)
        if isinstance(formula.operand, Implies):
            return f"!({inner})"
        return f"!{inner}"
    if isinstance(formula, Implies):
        left = render_formula(formula.antecedent)
        if isinstance(formula.antecedent, Implies):
            left = f"({left})"
        return f"{left} -> {render_formula(formula.consequent)}"
    raise TypeError(f"not a formula: {formula!r}")


def parse_system(text: str) -> EpistemicTransitionSystem:
    """Parse and validate an .ets description.

    Raises ParseError for malformed lines and SystemValidationError (with
    line numbers) for structural problems such as undeclared identifiers.
    """
    raw = RawSystem(views=[], instructions=[], states=[], transitions=[])
    for ln, line in enumerate(text.splitlines(), start=1):
        hash_at = line.find("#")
        if hash_at >= 0:
            line = line[:hash_at]
        fields = line.split()
        if not fields:
            continue
        directive, args = fields[0], fields[1:]
        if directive == "views":
            if not args:
                raise ParseError("views directive lists no identifiers", ln)
            raw.views.extend((name, ln) for name in args)
        elif directive == "instructions":
            if not args:
                raise ParseError("instructions directive lists no identifiers", ln)
            raw.instructions.extend((name, ln) for name in args)
        elif directive == "state":
            if len(args) != 2:
                raise ParseError("state directive needs: state <name> <view>", ln)
            raw.states.append((args[0], args[1], ln))
        elif directive == "trans":
            if len(args) != 3:
                raise ParseError("trans directive needs: trans <from> <instruction> <to>", ln)
            raw.transitions.append((args[0], args[1], args[2], ln))
        else:
            raise ParseError(f"unknown directive {directive!r}", ln)
    return validate_system(raw)


def render_system(system: EpistemicTransitionSystem, header: str = "") -> str:
    """Emit a system as .ets text that parses back to an equal system."""
    lines: list[str] = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    if len(system.universe):
        lines.append("views " + " ".join(system.universe.names))
    lines.append("instructions " + " ".join(system.instructions))
    for state in system.states:
        lines.append(f"state {state} {system.observation(state)}")
    for src, instr, dst in system.transition_triples():
        lines.append(f"trans {src} {instr} {dst}")
    return "\n".join(lines) + "\n"
