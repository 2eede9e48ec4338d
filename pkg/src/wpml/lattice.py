"""Finite bounded and modal lattices, their homomorphisms, and validity
of consequence pairs on a concrete algebra.

Elements are dense integer ids.  The order matrix is the source of truth;
meet/join tables are derived once at validation time and cached on the
structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Optional

from .errors import (
    DEFAULT_BUDGET,
    MorphismInvalid,
    NotALattice,
    NotAPoset,
    PreconditionViolated,
    ResourceBound,
    WrongBounds,
    resolve_budget,
)
from .formulas import And, Bot, Box, ConsequencePair, Dia, Formula, Letter, Or, Top


@dataclass(frozen=True)
class FiniteLattice:
    """Bounded lattice on elements 0..n-1.

    `leq[i][j]` iff element i is below element j.  `meet`/`join` are total
    tables of element ids.  Instances are built through `validate_lattice`
    (or a trusted constructor such as `fil_f`) so the invariants hold.
    """

    elements: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    bot: int
    top: int
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.elements)

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """up_masks[i] = bitmask of {j : i <= j}."""
        return tuple(
            sum(1 << j for j in range(self.n) if self.leq[i][j]) for i in range(self.n)
        )

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        """down_masks[i] = bitmask of {j : j <= i}."""
        return tuple(
            sum(1 << j for j in range(self.n) if self.leq[j][i]) for i in range(self.n)
        )

    def le(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    def __repr__(self):
        return f"FiniteLattice(n={self.n}, elements={self.elements!r})"


@dataclass(frozen=True)
class FiniteModalLattice:
    """Bounded lattice with unary box/diamond satisfying the five
    modal-lattice identities (see `check_modal_identities`)."""

    base: FiniteLattice
    box: tuple[int, ...]
    diamond: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def elements(self):
        return self.base.elements

    @property
    def leq(self):
        return self.base.leq

    @property
    def bot(self) -> int:
        return self.base.bot

    @property
    def top(self) -> int:
        return self.base.top

    @property
    def meet(self):
        return self.base.meet

    @property
    def join(self):
        return self.base.join

    def le(self, i: int, j: int) -> bool:
        return self.base.leq[i][j]

    def __repr__(self):
        return f"FiniteModalLattice(n={self.n})"


def with_identity_modalities(lat: FiniteLattice) -> FiniteModalLattice:
    """Identity box/diamond always satisfy the modal-lattice identities."""
    ident = tuple(range(lat.n))
    return FiniteModalLattice(lat, ident, ident)


@dataclass(frozen=True)
class LatticeMorphism:
    """Element map between two lattices, tagged whether it must also
    preserve the modal operators."""

    dom: FiniteLattice | FiniteModalLattice
    cod: FiniteLattice | FiniteModalLattice
    map: tuple[int, ...]
    modal: bool = False

    def __call__(self, i: int) -> int:
        return self.map[i]

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.n

    def compose(self, inner: "LatticeMorphism") -> "LatticeMorphism":
        """self after inner."""
        return LatticeMorphism(
            inner.dom,
            self.cod,
            tuple(self.map[i] for i in inner.map),
            self.modal and inner.modal,
        )


Valuation = dict[str, int]


def validate_lattice(
    raw_leq, bot: int, top: int, elements=None, *, names=None
) -> FiniteLattice:
    """Check the order axioms and derive meet/join tables.

    Raises NotAPoset / NotALattice / WrongBounds with a witness for the
    first violated axiom.
    """
    n = len(raw_leq)
    for row in raw_leq:
        if len(row) != n:
            raise NotAPoset("order matrix is not square")
    leq = tuple(tuple(bool(x) for x in row) for row in raw_leq)
    if names is None:
        names = elements
    if names is None:
        names = tuple(f"e{i}" for i in range(n))
    names = tuple(str(x) for x in names)
    if len(names) != n:
        raise NotAPoset("element name list does not match matrix size")
    if n == 0:
        raise NotAPoset("empty carrier")

    for i in range(n):
        if not leq[i][i]:
            raise NotAPoset(f"not reflexive at {i}")
    for i in range(n):
        for j in range(n):
            if i != j and leq[i][j] and leq[j][i]:
                raise NotAPoset(f"not antisymmetric on pair ({i}, {j})")
            if leq[i][j]:
                for k in range(n):
                    if leq[j][k] and not leq[i][k]:
                        raise NotAPoset(f"not transitive on ({i}, {j}, {k})")

    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            lower = [k for k in range(n) if leq[k][i] and leq[k][j]]
            glb = [k for k in lower if all(leq[m][k] for m in lower)]
            if len(glb) != 1:
                raise NotALattice((i, j), "meet")
            meet[i][j] = glb[0]
            upper = [k for k in range(n) if leq[i][k] and leq[j][k]]
            lub = [k for k in upper if all(leq[k][m] for m in upper)]
            if len(lub) != 1:
                raise NotALattice((i, j), "join")
            join[i][j] = lub[0]

    if not (0 <= bot < n and 0 <= top < n):
        raise WrongBounds(f"bot={bot} or top={top} out of range")
    for x in range(n):
        if not leq[bot][x]:
            raise WrongBounds(f"bot={bot} is not below {x}")
        if not leq[x][top]:
            raise WrongBounds(f"top={top} is not above {x}")

    return FiniteLattice(
        elements=names,
        leq=leq,
        bot=bot,
        top=top,
        meet=tuple(tuple(r) for r in meet),
        join=tuple(tuple(r) for r in join),
    )


@dataclass(frozen=True)
class IdentityViolation:
    """A failed modal-lattice identity with its witnesses."""

    identity: str
    witness: tuple[int, ...]


_MODAL_IDENTITIES = (
    "T = []T",
    "T = <>T",
    "[]a & []b = [](a & b)",
    "<>a v <>b <= <>(a v b)",
    "<>a & []b <= <>(a & b)",
)


def check_modal_identities(a: FiniteModalLattice) -> list[IdentityViolation]:
    """Empty list iff all five modal-lattice identities hold."""
    out = []
    lat = a.base
    if a.box[lat.top] != lat.top:
        out.append(IdentityViolation(_MODAL_IDENTITIES[0], (lat.top,)))
    if a.diamond[lat.top] != lat.top:
        out.append(IdentityViolation(_MODAL_IDENTITIES[1], (lat.top,)))
    n = lat.n
    meet, join = lat.meet, lat.join
    box, dia = a.box, a.diamond
    for x in range(n):
        for y in range(n):
            if meet[box[x]][box[y]] != box[meet[x][y]]:
                out.append(IdentityViolation(_MODAL_IDENTITIES[2], (x, y)))
            if not lat.leq[join[dia[x]][dia[y]]][dia[join[x][y]]]:
                out.append(IdentityViolation(_MODAL_IDENTITIES[3], (x, y)))
            if not lat.leq[meet[dia[x]][box[y]]][dia[meet[x][y]]]:
                out.append(IdentityViolation(_MODAL_IDENTITIES[4], (x, y)))
    return out


def validate_morphism(h: LatticeMorphism) -> None:
    """Raise MorphismInvalid unless h preserves bounds, meet, join (and the
    modal operators when h.modal)."""
    dom, cod, f = h.dom, h.cod, h.map
    if len(f) != dom.n or any(not (0 <= x < cod.n) for x in f):
        raise MorphismInvalid("map array has wrong shape")
    if f[dom.bot] != cod.bot:
        raise MorphismInvalid("bottom not preserved")
    if f[dom.top] != cod.top:
        raise MorphismInvalid("top not preserved")
    for i in range(dom.n):
        for j in range(dom.n):
            if f[dom.meet[i][j]] != cod.meet[f[i]][f[j]]:
                raise MorphismInvalid(f"meet not preserved on ({i}, {j})")
            if f[dom.join[i][j]] != cod.join[f[i]][f[j]]:
                raise MorphismInvalid(f"join not preserved on ({i}, {j})")
    if h.modal:
        if not isinstance(dom, FiniteModalLattice) or not isinstance(
            cod, FiniteModalLattice
        ):
            raise MorphismInvalid("modal morphism between non-modal lattices")
        for i in range(dom.n):
            if f[dom.box[i]] != cod.box[f[i]]:
                raise MorphismInvalid(f"box not preserved at {i}")
            if f[dom.diamond[i]] != cod.diamond[f[i]]:
                raise MorphismInvalid(f"diamond not preserved at {i}")


def enumerate_homs(
    a: FiniteLattice | FiniteModalLattice,
    b: FiniteLattice | FiniteModalLattice,
    modal: bool = False,
) -> Iterator[LatticeMorphism]:
    """All structure-preserving maps a -> b, in lexicographic order of the
    map array.  Deterministic; backtracking checks constraints as soon as
    every involved id is assigned."""
    n, m = a.n, b.n
    amod = isinstance(a, FiniteModalLattice)
    bmod = isinstance(b, FiniteModalLattice)
    if modal and not (amod and bmod):
        raise MorphismInvalid("modal hom enumeration needs modal lattices")

    assign = [-1] * n

    def consistent(i: int) -> bool:
        fi = assign[i]
        if i == a.bot and fi != b.bot:
            return False
        if i == a.top and fi != b.top:
            return False
        for j in range(i + 1):
            fj = assign[j]
            mij = a.meet[i][j]
            if mij <= i and assign[mij] != b.meet[fi][fj]:
                return False
            jij = a.join[i][j]
            if jij <= i and assign[jij] != b.join[fi][fj]:
                return False
        # meets/joins that land on i from already-assigned pairs
        for j in range(i + 1):
            for k in range(j + 1):
                if a.meet[j][k] == i and assign[i] != b.meet[assign[j]][assign[k]]:
                    return False
                if a.join[j][k] == i and assign[i] != b.join[assign[j]][assign[k]]:
                    return False
        if modal:
            for j in range(i + 1):
                bj = a.box[j]
                if bj <= i and assign[bj] != b.box[assign[j]]:
                    return False
                dj = a.diamond[j]
                if dj <= i and assign[dj] != b.diamond[assign[j]]:
                    return False
        return True

    def backtrack(i: int):
        if i == n:
            yield LatticeMorphism(a, b, tuple(assign), modal)
            return
        for v in range(m):
            assign[i] = v
            if consistent(i):
                yield from backtrack(i + 1)
        assign[i] = -1

    yield from backtrack(0)


def _eval_formula(
    a: FiniteLattice | FiniteModalLattice, f: Formula, val: Valuation
) -> int:
    if isinstance(f, Letter):
        return val[f.name]
    if isinstance(f, Top):
        return a.top
    if isinstance(f, Bot):
        return a.bot
    if isinstance(f, And):
        return a.meet[_eval_formula(a, f.lhs, val)][_eval_formula(a, f.rhs, val)]
    if isinstance(f, Or):
        return a.join[_eval_formula(a, f.lhs, val)][_eval_formula(a, f.rhs, val)]
    if isinstance(f, Box):
        if not isinstance(a, FiniteModalLattice):
            raise PreconditionViolated("modal formula on a plain lattice")
        return a.box[_eval_formula(a, f.arg, val)]
    if isinstance(f, Dia):
        if not isinstance(a, FiniteModalLattice):
            raise PreconditionViolated("modal formula on a plain lattice")
        return a.diamond[_eval_formula(a, f.arg, val)]
    raise TypeError(f"not a formula: {f!r}")


def evaluate(a, f: Formula, val: Valuation) -> int:
    """Value of f in a under the valuation (letter -> element id)."""
    return _eval_formula(a, f, val)


def algebra_validates(
    a: FiniteLattice | FiniteModalLattice,
    pair: ConsequencePair,
    budget: Optional[int] = None,
) -> Optional[Valuation]:
    """None iff sigma(lhs) <= sigma(rhs) for every valuation; otherwise the
    first countervaluation in lexicographic order (letters sorted, element
    ids ascending).  Raises ResourceBound if |A|^k exceeds the budget."""
    from .formulas import letters as letters_of

    budget = resolve_budget(budget)
    ls = sorted(letters_of(pair))
    k = len(ls)
    needed = a.n**k
    if needed > budget:
        raise ResourceBound(needed, budget)
    for combo in product(range(a.n), repeat=k):
        val = dict(zip(ls, combo))
        if not a.leq[_eval_formula(a, pair.lhs, val)][_eval_formula(a, pair.rhs, val)]:
            return val
    return None


def is_distributive(a: FiniteLattice) -> bool:
    """Distributive law checked on all triples."""
    n = a.n
    meet, join = a.meet, a.join
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                    return False
    return True


@dataclass(frozen=True)
class EpiReport:
    """Outcome of a bounded epimorphism check.  `epi` is relative to the
    stated codomain-size bound."""

    epi: bool
    bound: int
    distributive_only: bool
    separating: Optional[tuple] = None  # (candidate, g1, g2)


def is_epi_bounded(
    h: LatticeMorphism,
    bound: int,
    restrict_distributive: bool = False,
    budget: Optional[int] = None,
) -> EpiReport:
    """Search all candidate codomains M with |M| <= bound (up to
    isomorphism, distributive-only when flagged) for homs g1, g2 from
    cod(h) with g1 o h == g2 o h but g1 != g2."""
    from .catalog import all_lattices, all_modal_lattices

    budget = resolve_budget(budget)
    validate_morphism(h)
    cod = h.cod
    work = 0
    for m in range(1, bound + 1):
        candidates = all_modal_lattices(m) if h.modal else all_lattices(m)
        for cand in candidates:
            base = cand.base if isinstance(cand, FiniteModalLattice) else cand
            if restrict_distributive and not is_distributive(base):
                continue
            homs = list(enumerate_homs(cod, cand, modal=h.modal))
            work += cod.n ** 2 * max(len(homs), 1)
            if work > budget:
                raise ResourceBound(work, budget)
            for i, g1 in enumerate(homs):
                comp1 = tuple(g1.map[x] for x in h.map)
                for g2 in homs[i + 1 :]:
                    if comp1 == tuple(g2.map[x] for x in h.map):
                        return EpiReport(
                            False, bound, restrict_distributive, (cand, g1, g2)
                        )
    return EpiReport(True, bound, restrict_distributive)
