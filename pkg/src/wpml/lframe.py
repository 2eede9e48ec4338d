"""Finite L-frames and modal L-frames, the filter functor to (modal)
lattices, morphism condition checkers, and the relational semantics.

Point sets throughout are bitmasks over element ids; a FrameFilter is a
bitmask that is nonempty, upward closed under the frame order and closed
under the frame meet.  The improper filter (all points) is admitted and
the least filter is {1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Optional

from .errors import (
    DEFAULT_BUDGET,
    InternalInconsistency,
    MorphismInvalid,
    NotAPoset,
    PreconditionViolated,
    ResourceBound,
    UndefinedLetter,
)
from .formulas import And, Bot, Box, ConsequencePair, Dia, Formula, Letter, Or, Top
from .lattice import FiniteLattice, FiniteModalLattice

FrameFilter = int  # bitmask over frame points
FrameValuation = dict[str, int]  # letter -> FrameFilter


@dataclass(frozen=True)
class LFrame:
    """Meet semilattice with top element `one`.

    The order is derived: x below y iff meet[x][y] == x.
    """

    elements: tuple[str, ...]
    meet: tuple[tuple[int, ...], ...]
    one: int

    @property
    def n(self) -> int:
        return len(self.elements)

    def le(self, x: int, y: int) -> bool:
        return self.meet[x][y] == x

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """up_masks[x] = mask of {y : x below y}."""
        return tuple(
            sum(1 << y for y in range(self.n) if self.meet[x][y] == x)
            for x in range(self.n)
        )

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        return tuple(
            sum(1 << y for y in range(self.n) if self.meet[x][y] == y)
            for x in range(self.n)
        )

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __repr__(self):
        return f"LFrame(n={self.n})"


@dataclass(frozen=True)
class ModalLFrame:
    """L-frame with an accessibility relation satisfying the five
    interaction conditions (see `validate_modal_lframe`).  `succ[x]` is
    the bitmask of R-successors of x."""

    base: LFrame
    succ: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def one(self) -> int:
        return self.base.one

    @property
    def elements(self):
        return self.base.elements

    @property
    def meet(self):
        return self.base.meet

    def le(self, x: int, y: int) -> bool:
        return self.base.le(x, y)

    def rel(self, x: int, y: int) -> bool:
        return bool(self.succ[x] >> y & 1)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [
            (x, y) for x in range(self.n) for y in range(self.n) if self.rel(x, y)
        ]

    def __repr__(self):
        return f"ModalLFrame(n={self.n}, edges={sum(m.bit_count() for m in self.succ)})"


def validate_lframe(elements, meet, one: int) -> LFrame:
    """Check the meet-semilattice-with-top axioms; raise NotAPoset else."""
    names = tuple(str(x) for x in elements)
    n = len(names)
    table = tuple(tuple(int(v) for v in row) for row in meet)
    if len(table) != n or any(len(r) != n for r in table):
        raise NotAPoset("meet table is not square")
    if not 0 <= one < n:
        raise NotAPoset("one out of range")
    for x in range(n):
        if table[x][x] != x:
            raise NotAPoset(f"meet not idempotent at {x}")
        if table[x][one] != x or table[one][x] != x:
            raise NotAPoset(f"one is not a unit at {x}")
        for y in range(n):
            if table[x][y] != table[y][x]:
                raise NotAPoset(f"meet not commutative at ({x}, {y})")
            for z in range(n):
                if table[table[x][y]][z] != table[x][table[y][z]]:
                    raise NotAPoset(f"meet not associative at ({x}, {y}, {z})")
    return LFrame(names, table, one)


def lframe_from_leq(elements, leq, one: int) -> LFrame:
    """Build an LFrame from an order matrix in which all binary meets exist."""
    n = len(elements)
    table = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            lower = [k for k in range(n) if leq[k][x] and leq[k][y]]
            glb = [k for k in lower if all(leq[m][k] for m in lower)]
            if len(glb) != 1:
                raise NotAPoset(f"pair ({x}, {y}) has no meet")
            table[x][y] = glb[0]
    return validate_lframe(elements, table, one)


@dataclass(frozen=True)
class FrameViolation:
    """A failed modal-L-frame condition with the witnessing tuple."""

    condition: str
    witness: tuple[int, ...]


def _check_modal_conditions(base: LFrame, succ) -> Optional[FrameViolation]:
    n = base.n
    meet = base.meet
    up = base.up_masks
    down = base.down_masks
    one = base.one
    # (v) 1 R x iff x = 1
    if succ[one] != 1 << one:
        return FrameViolation("v", (one,))
    for x in range(n):
        if succ[x] == 0:
            return FrameViolation("i", (x,))  # forced nonempty via x below 1, 1 R 1
    for x in range(n):
        for y in range(n):
            if not base.le(x, y):
                continue
            # (i): y R z needs some w with x R w, w below z
            m = succ[y]
            while m:
                z = (m & -m).bit_length() - 1
                m &= m - 1
                if succ[x] & down[z] == 0:
                    return FrameViolation("i", (x, y, z))
            # (ii): x R w needs some z with y R z, w below z
            m = succ[x]
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                if succ[y] & up[w] == 0:
                    return FrameViolation("ii", (x, y, w))
    for x in range(n):
        for y in range(n):
            xy = meet[x][y]
            # (iv): x R u and y R v imply (x meet y) R (u meet v)
            mu = succ[x]
            while mu:
                u = (mu & -mu).bit_length() - 1
                mu &= mu - 1
                mv = succ[y]
                while mv:
                    v = (mv & -mv).bit_length() - 1
                    mv &= mv - 1
                    if not succ[xy] >> meet[u][v] & 1:
                        return FrameViolation("iv", (x, y, u, v))
            # (iii): (x meet y) R z needs u in R[x], v in R[y], u meet v below z
            reach = 0
            mu = succ[x]
            while mu:
                u = (mu & -mu).bit_length() - 1
                mu &= mu - 1
                mv = succ[y]
                while mv:
                    v = (mv & -mv).bit_length() - 1
                    mv &= mv - 1
                    reach |= up[meet[u][v]]
            m = succ[xy]
            while m:
                z = (m & -m).bit_length() - 1
                m &= m - 1
                if not reach >> z & 1:
                    return FrameViolation("iii", (x, y, z))
    return None


def validate_modal_lframe(base: LFrame, rel) -> ModalLFrame | FrameViolation:
    """Accept iff the five modal-L-frame conditions hold; otherwise the
    first violation with its witnesses.

    `rel` may be an iterable of (x, y) pairs or a sequence of successor
    bitmasks.
    """
    n = base.n
    rel = list(rel)
    if rel and all(isinstance(m, int) for m in rel):
        if len(rel) != n:
            raise NotAPoset("successor-mask list must have one mask per point")
        succ = tuple(int(m) for m in rel)
    else:
        succ = [0] * n
        for x, y in rel:
            if not (0 <= x < n and 0 <= y < n):
                raise NotAPoset(f"relation pair ({x}, {y}) out of range")
            succ[x] |= 1 << y
        succ = tuple(succ)
    bad = _check_modal_conditions(base, succ)
    if bad is not None:
        return bad
    return ModalLFrame(base, succ)


# --- filters ----------------------------------------------------------------

def up_closure(frame: LFrame, mask: int) -> int:
    out = 0
    m = mask
    while m:
        x = (m & -m).bit_length() - 1
        m &= m - 1
        out |= frame.up_masks[x]
    return out


def is_filter(frame: LFrame, mask: int) -> bool:
    """Nonempty, upward closed, meet closed."""
    if mask == 0:
        return False
    if up_closure(frame, mask) != mask:
        return False
    members = []
    m = mask
    while m:
        x = (m & -m).bit_length() - 1
        m &= m - 1
        members.append(x)
    for x in members:
        for y in members:
            if not mask >> frame.meet[x][y] & 1:
                return False
    return True


def filter_closure(frame: LFrame, mask: int) -> int:
    """Least filter containing the (nonempty) point set."""
    cur = mask | 1 << frame.one
    while True:
        nxt = up_closure(frame, cur)
        members = []
        m = nxt
        while m:
            x = (m & -m).bit_length() - 1
            m &= m - 1
            members.append(x)
        for i, x in enumerate(members):
            for y in members[i:]:
                nxt |= 1 << frame.meet[x][y]
        if nxt == cur:
            return cur
        cur = nxt


def filters(frame: LFrame) -> list[int]:
    """All filters of the frame, sorted by bitmask value.

    Enumeration closes up-sets under the meet starting from {1}; this is
    the hot path, so no 2^n subset scan.
    """
    start = 1 << frame.one
    seen = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        rest = frame.full_mask & ~f
        while rest:
            e = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            g = filter_closure(frame, f | 1 << e)
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return sorted(seen)


def filter_join(frame: LFrame, a: int, b: int) -> int:
    """Filter generated by the union: up-closure of pairwise meets."""
    out = 0
    ma = a
    while ma:
        x = (ma & -ma).bit_length() - 1
        ma &= ma - 1
        mb = b
        while mb:
            y = (mb & -mb).bit_length() - 1
            mb &= mb - 1
            out |= frame.up_masks[frame.meet[x][y]]
    return out


def box_mask(frame: ModalLFrame, u: int) -> int:
    return sum(1 << x for x in range(frame.n) if frame.succ[x] & ~u == 0)


def dia_mask(frame: ModalLFrame, u: int) -> int:
    return sum(1 << x for x in range(frame.n) if frame.succ[x] & u)


def fil_f_lattice(frame: LFrame) -> FiniteLattice:
    """Lattice of all filters ordered by inclusion.  Element i is the
    filter with the i-th smallest bitmask; names are hex bitmasks."""
    fs = filters(frame)
    idx = {m: i for i, m in enumerate(fs)}
    k = len(fs)
    leq = tuple(tuple(fs[i] & ~fs[j] == 0 for j in range(k)) for i in range(k))
    meet = [[0] * k for _ in range(k)]
    join = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            meet[i][j] = idx[fs[i] & fs[j]]
            join[i][j] = idx[filter_join(frame, fs[i], fs[j])]
    return FiniteLattice(
        elements=tuple(hex(m) for m in fs),
        leq=leq,
        bot=idx[1 << frame.one],
        top=idx[frame.full_mask],
        meet=tuple(tuple(r) for r in meet),
        join=tuple(tuple(r) for r in join),
    )


def fil_f(frame: ModalLFrame) -> FiniteModalLattice:
    """Filter lattice with box/diamond induced by the relation."""
    lat = fil_f_lattice(frame.base)
    fs = [int(name, 16) for name in lat.elements]
    idx = {m: i for i, m in enumerate(fs)}
    box = []
    dia = []
    for m in fs:
        bm = box_mask(frame, m)
        dm = dia_mask(frame, m)
        if bm not in idx or dm not in idx:
            raise InternalInconsistency(
                f"box/diamond of filter {hex(m)} is not a filter"
            )
        box.append(idx[bm])
        dia.append(idx[dm])
    return FiniteModalLattice(lat, tuple(box), tuple(dia))


# --- morphisms ---------------------------------------------------------------

@dataclass(frozen=True)
class FrameMorphism:
    """Point map between frames; kind is 'plain', 'L' or 'bounded-L'."""

    dom: LFrame | ModalLFrame
    cod: LFrame | ModalLFrame
    map: tuple[int, ...]
    kind: str = "plain"

    def __call__(self, x: int) -> int:
        return self.map[x]

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.n

    def compose(self, inner: "FrameMorphism") -> "FrameMorphism":
        return FrameMorphism(
            inner.dom, self.cod, tuple(self.map[x] for x in inner.map), self.kind
        )


@dataclass(frozen=True)
class MorphismViolation:
    condition: str
    witness: tuple[int, ...]


def _base_of(x) -> LFrame:
    return x.base if isinstance(x, ModalLFrame) else x


def check_semilattice_hom(f: FrameMorphism) -> None:
    """Raise MorphismInvalid unless f preserves the meet and 1."""
    dom, cod = _base_of(f.dom), _base_of(f.cod)
    if len(f.map) != dom.n or any(not (0 <= v < cod.n) for v in f.map):
        raise MorphismInvalid("map array has wrong shape")
    if f.map[dom.one] != cod.one:
        raise MorphismInvalid("1 not preserved")
    for x in range(dom.n):
        for y in range(dom.n):
            if f.map[dom.meet[x][y]] != cod.meet[f.map[x]][f.map[y]]:
                raise MorphismInvalid(f"meet not preserved on ({x}, {y})")


def is_l_morphism(f: FrameMorphism) -> Optional[MorphismViolation]:
    """None iff both L-morphism conditions hold; otherwise the first
    violation with witnesses."""
    check_semilattice_hom(f)
    dom, cod = _base_of(f.dom), _base_of(f.cod)
    for x in range(dom.n):
        if f.map[x] == cod.one and x != dom.one:
            return MorphismViolation("unit-reflection", (x,))
    # images, for the existential part of condition 2
    image_above = []  # image_above[y'] = mask of x in dom with y' below f(x)
    for yp in range(cod.n):
        image_above.append(
            sum(1 << x for x in range(dom.n) if cod.le(yp, f.map[x]))
        )
    for x in range(dom.n):
        fx = f.map[x]
        for yp in range(cod.n):
            for zp in range(cod.n):
                if not cod.le(cod.meet[yp][zp], fx):
                    continue
                found = False
                my = image_above[yp]
                while my and not found:
                    y = (my & -my).bit_length() - 1
                    my &= my - 1
                    mz = image_above[zp]
                    while mz:
                        z = (mz & -mz).bit_length() - 1
                        mz &= mz - 1
                        if dom.le(dom.meet[y][z], x):
                            found = True
                            break
                if not found:
                    return MorphismViolation("meet-cover", (x, yp, zp))
    return None


def is_bounded_l_morphism(f: FrameMorphism) -> Optional[MorphismViolation]:
    """Forth plus the two back conditions, on top of the L-morphism
    conditions."""
    bad = is_l_morphism(f)
    if bad is not None:
        return bad
    dom, cod = f.dom, f.cod
    if not isinstance(dom, ModalLFrame) or not isinstance(cod, ModalLFrame):
        raise MorphismInvalid("bounded L-morphism needs modal frames")
    cbase = cod.base
    dbase = dom.base
    for x in range(dom.n):
        fx = f.map[x]
        m = dom.succ[x]
        while m:
            y = (m & -m).bit_length() - 1
            m &= m - 1
            if not cod.succ[fx] >> f.map[y] & 1:
                return MorphismViolation("forth", (x, y))
        m = cod.succ[fx]
        while m:
            z = (m & -m).bit_length() - 1
            m &= m - 1
            down_ok = any(
                cbase.le(f.map[y], z)
                for y in range(dom.n)
                if dom.succ[x] >> y & 1
            )
            if not down_ok:
                return MorphismViolation("back-below", (x, z))
            up_ok = any(
                cbase.le(z, f.map[y])
                for y in range(dom.n)
                if dom.succ[x] >> y & 1
            )
            if not up_ok:
                return MorphismViolation("back-above", (x, z))
    del dbase
    return None


def enumerate_frame_morphisms(
    dom: LFrame | ModalLFrame,
    cod: LFrame | ModalLFrame,
    kind: str = "L",
    surjective_only: bool = False,
) -> Iterator[FrameMorphism]:
    """All morphisms of the requested kind, lexicographic in the map array."""
    dbase, cbase = _base_of(dom), _base_of(cod)
    n, m = dbase.n, cbase.n
    assign = [-1] * n

    def consistent(i: int) -> bool:
        if i == dbase.one and assign[i] != cbase.one:
            return False
        for j in range(i + 1):
            mij = dbase.meet[i][j]
            if mij <= i and assign[mij] != cbase.meet[assign[i]][assign[j]]:
                return False
        for j in range(i + 1):
            for k in range(j + 1):
                if dbase.meet[j][k] == i and assign[i] != cbase.meet[assign[j]][assign[k]]:
                    return False
        return True

    def backtrack(i: int):
        if i == n:
            cand = FrameMorphism(dom, cod, tuple(assign), kind)
            if surjective_only and not cand.is_surjective():
                return
            if kind == "L" and is_l_morphism(cand) is not None:
                return
            if kind == "bounded-L" and is_bounded_l_morphism(cand) is not None:
                return
            yield cand
            return
        for v in range(m):
            assign[i] = v
            if consistent(i):
                yield from backtrack(i + 1)
        assign[i] = -1

    yield from backtrack(0)


# --- semantics ---------------------------------------------------------------

def satisfies(frame: ModalLFrame, val: FrameValuation, x: int, f: Formula) -> bool:
    """Pointwise satisfaction; the seven clauses implemented literally."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return x == frame.one
    if isinstance(f, Letter):
        if f.name not in val:
            raise UndefinedLetter(f.name)
        return bool(val[f.name] >> x & 1)
    if isinstance(f, And):
        return satisfies(frame, val, x, f.lhs) and satisfies(frame, val, x, f.rhs)
    if isinstance(f, Or):
        for y in range(frame.n):
            if not satisfies(frame, val, y, f.lhs):
                continue
            for z in range(frame.n):
                if satisfies(frame, val, z, f.rhs) and frame.le(
                    frame.meet[y][z], x
                ):
                    return True
        return False
    if isinstance(f, Box):
        m = frame.succ[x]
        while m:
            y = (m & -m).bit_length() - 1
            m &= m - 1
            if not satisfies(frame, val, y, f.arg):
                return False
        return True
    if isinstance(f, Dia):
        m = frame.succ[x]
        while m:
            y = (m & -m).bit_length() - 1
            m &= m - 1
            if satisfies(frame, val, y, f.arg):
                return True
        return False
    raise TypeError(f"not a formula: {f!r}")


def truth_set(frame: ModalLFrame, val: FrameValuation, f: Formula) -> int:
    """Bitmask {x : x satisfies f}; the fast bulk route used by sweeps."""
    if isinstance(f, Top):
        return frame.base.full_mask
    if isinstance(f, Bot):
        return 1 << frame.one
    if isinstance(f, Letter):
        if f.name not in val:
            raise UndefinedLetter(f.name)
        return val[f.name]
    if isinstance(f, And):
        return truth_set(frame, val, f.lhs) & truth_set(frame, val, f.rhs)
    if isinstance(f, Or):
        return filter_join(
            frame.base, truth_set(frame, val, f.lhs), truth_set(frame, val, f.rhs)
        )
    if isinstance(f, Box):
        return box_mask(frame, truth_set(frame, val, f.arg))
    if isinstance(f, Dia):
        return dia_mask(frame, truth_set(frame, val, f.arg))
    raise TypeError(f"not a formula: {f!r}")


def frame_validates(
    frame: ModalLFrame, pair: ConsequencePair, budget: Optional[int] = None
) -> Optional[FrameValuation]:
    """None iff V(lhs) is contained in V(rhs) for every filter-valued
    valuation on the occurring letters; otherwise the first countervaluation
    in bitmask-lexicographic order."""
    from .errors import resolve_budget
    from .formulas import letters as letters_of

    budget = resolve_budget(budget)
    ls = sorted(letters_of(pair))
    fs = filters(frame.base)
    needed = len(fs) ** len(ls)
    if needed > budget:
        raise ResourceBound(needed, budget)
    for combo in product(fs, repeat=len(ls)):
        val = dict(zip(ls, combo))
        if truth_set(frame, val, pair.lhs) & ~truth_set(frame, val, pair.rhs):
            return val
    return None


def successor_extrema(frame: ModalLFrame, x: int, y: int) -> tuple[int, int]:
    """Given x R y: (z, t) with z minimal and t maximal in R[x] and
    z below y below t.  Ties broken by least element id."""
    if not frame.rel(x, y):
        raise PreconditionViolated(f"{x} R {y} does not hold")
    base = frame.base
    succ = frame.succ[x]
    below = [w for w in range(frame.n) if succ >> w & 1 and base.le(w, y)]
    z = min(w for w in below if not any(base.le(u, w) and u != w for u in below))
    above = [w for w in range(frame.n) if succ >> w & 1 and base.le(y, w)]
    t = min(w for w in above if not any(base.le(w, u) and u != w for u in above))
    # minimality/maximality transfers from the restricted sets to all of R[x]
    for u in range(frame.n):
        if succ >> u & 1 and ((base.le(u, z) and u != z) or (base.le(t, u) and u != t)):
            raise InternalInconsistency(f"extrema not extremal in R[{x}]")
    return z, t


def frame_join(frame: LFrame, elems) -> int:
    """Least upper bound: generator of the intersection of the up-sets."""
    if isinstance(elems, int):
        members = [x for x in range(frame.n) if elems >> x & 1]
    else:
        members = list(elems)
    if not members:
        raise PreconditionViolated("join of the empty set")
    common = frame.full_mask
    for x in members:
        common &= frame.up_masks[x]
    acc = frame.one
    m = common
    while m:
        x = (m & -m).bit_length() - 1
        m &= m - 1
        acc = frame.meet[acc][x]
    return acc
