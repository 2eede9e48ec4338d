"""Formula syntax for weak positive modal logic.

Grammar (text form):

    phi ::= 'T' | 'F' | ident | phi '&' phi | phi 'v' phi
          | '[]' phi | '<>' phi | '(' phi ')'

`|-` separates the two sides of a consequence pair.  Precedence is
unary > '&' > 'v', binary operators associate to the left.  `T`, `F`
and `v` are reserved words and cannot be used as letters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormulaSyntaxError


class Formula:
    __slots__ = ()

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Top(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class Bot(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class Letter(Formula):
    __slots__ = ("name",)
    name: str


@dataclass(frozen=True)
class And(Formula):
    __slots__ = ("lhs", "rhs")
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    __slots__ = ("lhs", "rhs")
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Box(Formula):
    __slots__ = ("arg",)
    arg: Formula


@dataclass(frozen=True)
class Dia(Formula):
    __slots__ = ("arg",)
    arg: Formula


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class ConsequencePair:
    """An expression `lhs |- rhs` (one consequence judgment)."""

    lhs: Formula
    rhs: Formula

    def __str__(self):
        return f"{pretty(self.lhs)} |- {pretty(self.rhs)}"


RESERVED = {"T", "F", "v"}

_TAG_ORDER = {Top: 0, Bot: 1, Letter: 2, And: 3, Or: 4, Box: 5, Dia: 6}


def formula_key(f: Formula):
    """Total structural order on formulas (constructor tag, then children).

    Used everywhere a deterministic formula ordering is needed.
    """
    tag = _TAG_ORDER[type(f)]
    if isinstance(f, Letter):
        return (tag, f.name)
    if isinstance(f, (And, Or)):
        return (tag, formula_key(f.lhs), formula_key(f.rhs))
    if isinstance(f, (Box, Dia)):
        return (tag, formula_key(f.arg))
    return (tag,)


def size(f: Formula) -> int:
    """Node count of the syntax tree."""
    if isinstance(f, (And, Or)):
        return 1 + size(f.lhs) + size(f.rhs)
    if isinstance(f, (Box, Dia)):
        return 1 + size(f.arg)
    return 1


def connectives(f: Formula) -> int:
    """Number of connective nodes (everything except leaves)."""
    if isinstance(f, (And, Or)):
        return 1 + connectives(f.lhs) + connectives(f.rhs)
    if isinstance(f, (Box, Dia)):
        return 1 + connectives(f.arg)
    return 0


def letters(f) -> frozenset[str]:
    """Set of proposition letters occurring in a formula or pair."""
    if isinstance(f, ConsequencePair):
        return letters(f.lhs) | letters(f.rhs)
    if isinstance(f, Letter):
        return frozenset((f.name,))
    if isinstance(f, (And, Or)):
        return letters(f.lhs) | letters(f.rhs)
    if isinstance(f, (Box, Dia)):
        return letters(f.arg)
    return frozenset()


def subformulas(f: Formula) -> set[Formula]:
    """All subformulas of f, including f itself."""
    out = {f}
    if isinstance(f, (And, Or)):
        out |= subformulas(f.lhs)
        out |= subformulas(f.rhs)
    elif isinstance(f, (Box, Dia)):
        out |= subformulas(f.arg)
    return out


def is_modality_free(f: Formula) -> bool:
    if isinstance(f, (Box, Dia)):
        return False
    if isinstance(f, (And, Or)):
        return is_modality_free(f.lhs) and is_modality_free(f.rhs)
    return True


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Simultaneous substitution of formulas for letters."""
    if isinstance(f, Letter):
        return mapping.get(f.name, f)
    if isinstance(f, And):
        return And(substitute(f.lhs, mapping), substitute(f.rhs, mapping))
    if isinstance(f, Or):
        return Or(substitute(f.lhs, mapping), substitute(f.rhs, mapping))
    if isinstance(f, Box):
        return Box(substitute(f.arg, mapping))
    if isinstance(f, Dia):
        return Dia(substitute(f.arg, mapping))
    return f


def match(pattern: Formula, target: Formula, subst: dict[str, Formula] | None = None):
    """One-sided matching: a substitution s with substitute(pattern, s) == target,
    or None.  Letters in the pattern are the schematic variables."""
    if subst is None:
        subst = {}
    if isinstance(pattern, Letter):
        bound = subst.get(pattern.name)
        if bound is None:
            subst[pattern.name] = target
            return subst
        return subst if bound == target else None
    if type(pattern) is not type(target):
        return None
    if isinstance(pattern, (And, Or)):
        s = match(pattern.lhs, target.lhs, subst)
        if s is None:
            return None
        return match(pattern.rhs, target.rhs, s)
    if isinstance(pattern, (Box, Dia)):
        return match(pattern.arg, target.arg, subst)
    return subst  # Top / Bot


def match_pair(pattern: ConsequencePair, target: ConsequencePair):
    """Match both sides of a pair with one consistent substitution."""
    s = match(pattern.lhs, target.lhs, {})
    if s is None:
        return None
    return match(pattern.rhs, target.rhs, s)


# --- parsing ----------------------------------------------------------------

_PUNCT = (("|-", "TURNSTILE"), ("[]", "BOX"), ("<>", "DIA"),
          ("&", "AND"), ("(", "LP"), (")", "RP"))


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for lit, kind in _PUNCT:
            if text.startswith(lit, i):
                tokens.append((kind, lit, i))
                i += len(lit)
                break
        else:
            if c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word == "T":
                    tokens.append(("TOP", word, i))
                elif word == "F":
                    tokens.append(("BOT", word, i))
                elif word == "v":
                    tokens.append(("OR", word, i))
                else:
                    tokens.append(("IDENT", word, i))
                i = j
            else:
                raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def parse_or(self):
        f = self.parse_and()
        while self.peek()[0] == "OR":
            self.advance()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self):
        f = self.parse_unary()
        while self.peek()[0] == "AND":
            self.advance()
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self):
        kind, value, pos = self.peek()
        if kind == "BOX":
            self.advance()
            return Box(self.parse_unary())
        if kind == "DIA":
            self.advance()
            return Dia(self.parse_unary())
        if kind == "TOP":
            self.advance()
            return TOP
        if kind == "BOT":
            self.advance()
            return BOT
        if kind == "IDENT":
            self.advance()
            return Letter(value)
        if kind == "LP":
            self.advance()
            f = self.parse_or()
            self.expect("RP")
            return f
        raise FormulaSyntaxError(f"expected a formula, found {value!r}", pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.parse_or()
    kind, value, pos = p.peek()
    if kind != "EOF":
        raise FormulaSyntaxError(f"trailing input {value!r}", pos)
    return f


def parse_pair(text: str) -> ConsequencePair:
    p = _Parser(text)
    lhs = p.parse_or()
    p.expect("TURNSTILE")
    rhs = p.parse_or()
    kind, value, pos = p.peek()
    if kind != "EOF":
        raise FormulaSyntaxError(f"trailing input {value!r}", pos)
    return ConsequencePair(lhs, rhs)


def parse(text: str):
    """Parse a formula, or a consequence pair if `|-` occurs."""
    if "|-" in text:
        return parse_pair(text)
    return parse_formula(text)


# --- printing ---------------------------------------------------------------

def _pretty(f: Formula, parent: int) -> str:
    # parent precedence: 0 = or-context, 1 = and-context, 2 = unary-context.
    # Left operands of a binary op use the op's own level, right operands a
    # stricter one, so left-associative chains print without parentheses.
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, Letter):
        return f.name
    if isinstance(f, Box):
        return "[]" + _pretty(f.arg, 2)
    if isinstance(f, Dia):
        return "<>" + _pretty(f.arg, 2)
    if isinstance(f, And):
        s = f"{_pretty(f.lhs, 1)} & {_pretty(f.rhs, 2)}"
        return f"({s})" if parent >= 2 else s
    if isinstance(f, Or):
        s = f"{_pretty(f.lhs, 0)} v {_pretty(f.rhs, 1)}"
        return f"({s})" if parent >= 1 else s
    raise TypeError(f"not a formula: {f!r}")


def pretty(f) -> str:
    """Round-tripping printer: parse(pretty(f)) == f."""
    if isinstance(f, ConsequencePair):
        return f"{_pretty(f.lhs, 0)} |- {_pretty(f.rhs, 0)}"
    return _pretty(f, 0)
