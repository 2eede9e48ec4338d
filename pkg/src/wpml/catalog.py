"""Exhaustive catalogs of small structures, up to isomorphism.

Enumeration convention: candidate orders are generated with ids in a
linear extension (i below j implies i < j), so bot is always id 0 and
top id n-1; isomorphic duplicates are removed by taking the minimum
relabeling.  Everything is cached per size.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator

from .lattice import (
    FiniteLattice,
    FiniteModalLattice,
    is_distributive,
    validate_lattice,
)
from .lframe import LFrame, ModalLFrame, lframe_from_leq, validate_modal_lframe


def _is_transitive(leq, n) -> bool:
    for i in range(n):
        row = leq[i]
        for j in range(i + 1, n):
            if row[j]:
                rj = leq[j]
                for k in range(j + 1, n):
                    if rj[k] and not row[k]:
                        return False
    return True


def _lattice_tables(leq, n):
    """(meet, join) tables, or None if some pair lacks a unique bound."""
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            lower = [k for k in range(n) if leq[k][i] and leq[k][j]]
            glb = [k for k in lower if all(leq[m][k] for m in lower)]
            if len(glb) != 1:
                return None
            meet[i][j] = meet[j][i] = glb[0]
            upper = [k for k in range(n) if leq[i][k] and leq[j][k]]
            lub = [k for k in upper if all(leq[k][m] for m in upper)]
            if len(lub) != 1:
                return None
            join[i][j] = join[j][i] = lub[0]
    return meet, join


def _canonical(leq, n) -> tuple:
    best = None
    for perm in permutations(range(n)):
        enc = tuple(
            leq[perm.index(i)][perm.index(j)] for i in range(n) for j in range(n)
        )
        if best is None or enc < best:
            best = enc
    return best


@lru_cache(maxsize=None)
def all_lattice_orders(n: int) -> tuple[tuple[tuple[bool, ...], ...], ...]:
    """All order matrices of n-element lattices, one per isomorphism class."""
    if n <= 0:
        return ()
    if n == 1:
        return (((True,),),)
    pairs = list(combinations(range(n), 2))
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for b, (i, j) in enumerate(pairs):
            if bits >> b & 1:
                leq[i][j] = True
        if not _is_transitive(leq, n):
            continue
        # a lattice in a linear extension has bot 0 and top n-1
        if not all(leq[0][x] for x in range(n)):
            continue
        if not all(leq[x][n - 1] for x in range(n)):
            continue
        if _lattice_tables(leq, n) is None:
            continue
        canon = _canonical(leq, n)
        if canon in seen:
            continue
        seen.add(canon)
        out.append(tuple(tuple(row) for row in leq))
    return tuple(out)


@lru_cache(maxsize=None)
def all_lattices(n: int) -> tuple[FiniteLattice, ...]:
    return tuple(
        validate_lattice(leq, 0, n - 1) for leq in all_lattice_orders(n)
    )


@lru_cache(maxsize=None)
def all_distributive_lattices(n: int) -> tuple[FiniteLattice, ...]:
    return tuple(lat for lat in all_lattices(n) if is_distributive(lat))


def _meet_operators(lat: FiniteLattice) -> list[tuple[int, ...]]:
    """Unary ops fixing top and commuting with meet (candidate boxes)."""
    n = lat.n
    assign = [-1] * n
    out = []

    def consistent(i):
        if i == lat.top and assign[i] != lat.top:
            return False
        for j in range(i + 1):
            mij = lat.meet[i][j]
            if mij <= i and assign[mij] != lat.meet[assign[i]][assign[j]]:
                return False
        for j in range(i + 1):
            for k in range(j + 1):
                if lat.meet[j][k] == i and assign[i] != lat.meet[assign[j]][assign[k]]:
                    return False
        return True

    def backtrack(i):
        if i == n:
            out.append(tuple(assign))
            return
        for v in range(n):
            assign[i] = v
            if consistent(i):
                backtrack(i + 1)
        assign[i] = -1

    backtrack(0)
    return out


@lru_cache(maxsize=None)
def all_modal_lattices(n: int) -> tuple[FiniteModalLattice, ...]:
    """All modal structures over the size-n lattice catalog.

    Intended for small n only (epi checks); the diamond loop is a plain
    filter over all arrays against the remaining identities.
    """
    from .lattice import check_modal_identities

    out = []
    for lat in all_lattices(n):
        boxes = _meet_operators(lat)
        for box in boxes:
            for dia in _diamond_candidates(lat, box):
                cand = FiniteModalLattice(lat, box, dia)
                if not check_modal_identities(cand):
                    out.append(cand)
    return tuple(out)


def _diamond_candidates(lat: FiniteLattice, box) -> Iterator[tuple[int, ...]]:
    n = lat.n
    assign = [-1] * n

    def consistent(i):
        if i == lat.top and assign[i] != lat.top:
            return False
        for j in range(i + 1):
            jij = lat.join[i][j]
            if jij <= i and not lat.leq[lat.join[assign[i]][assign[j]]][assign[jij]]:
                return False
        return True

    def backtrack(i):
        if i == n:
            yield tuple(assign)
            return
        for v in range(n):
            assign[i] = v
            if consistent(i):
                yield from backtrack(i + 1)
        assign[i] = -1

    yield from backtrack(0)


@lru_cache(maxsize=None)
def all_lframes(n: int) -> tuple[LFrame, ...]:
    """Meet semilattices with top: same posets as the lattice catalog."""
    out = []
    for leq in all_lattice_orders(n):
        names = tuple(f"x{i}" for i in range(n))
        out.append(lframe_from_leq(names, leq, n - 1))
    return tuple(out)


def modal_relations(frame: LFrame) -> Iterator[tuple[int, ...]]:
    """All successor-mask tuples making the frame a valid modal L-frame,
    in lexicographic order of the mask tuple.

    Search assigns per-point successor sets (nonempty, meet closed; {1}
    for the top point) with partial pruning on conditions (i), (ii), (iv).
    """
    n = frame.n
    meet = frame.meet
    one = frame.one

    closed_sets = []
    for mask in range(1, 1 << n):
        members = [x for x in range(n) if mask >> x & 1]
        if all(mask >> meet[x][y] & 1 for x in members for y in members):
            closed_sets.append(mask)

    succ = [0] * n
    up = frame.up_masks
    down = frame.down_masks

    def partial_ok(i: int) -> bool:
        si = succ[i]
        for j in range(i + 1):
            sj = succ[j]
            # (iv): meets of successors land in succ of the meet point
            tgt = succ[meet[i][j]]
            mi = si
            while mi:
                u = (mi & -mi).bit_length() - 1
                mi &= mi - 1
                mj = sj
                while mj:
                    v = (mj & -mj).bit_length() - 1
                    mj &= mj - 1
                    if not tgt >> meet[u][v] & 1:
                        return False
            # (i)/(ii) for comparable pairs
            if frame.le(j, i):
                lo, hi = j, i
            elif frame.le(i, j):
                lo, hi = i, j
            else:
                continue
            m = succ[hi]
            while m:
                z = (m & -m).bit_length() - 1
                m &= m - 1
                if succ[lo] & down[z] == 0:
                    return False
            m = succ[lo]
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                if succ[hi] & up[w] == 0:
                    return False
        return True

    def backtrack(i: int):
        if i == n:
            if isinstance(validate_modal_lframe(frame, tuple(succ)), ModalLFrame):
                yield tuple(succ)
            return
        options = (1 << one,) if i == one else closed_sets
        for s in options:
            succ[i] = s
            if partial_ok(i):
                yield from backtrack(i + 1)
        succ[i] = 0

    yield from backtrack(0)


def all_modal_lframes(n: int) -> Iterator[ModalLFrame]:
    """All valid modal L-frames of size exactly n (frames up to iso, all
    relations per frame), in deterministic order."""
    for frame in all_lframes(n):
        for succ in modal_relations(frame):
            yield ModalLFrame(frame, succ)
