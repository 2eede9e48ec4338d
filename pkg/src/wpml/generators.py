"""Seeded random generators for frames, lattices and V-formations.

Every sampler is a pure function of its rng stream, so one 64-bit seed
fully determines all randomized behavior.  Samplers repair candidates
toward validity and reject those that do not converge, keeping the
output distribution inside the valid class exactly.
"""

from __future__ import annotations

import random
from typing import Optional

from .amalgam import VFormation, validate_vformation
from .correspondence import CONDITIONS, frame_satisfies
from .duality import dual_of_frame_morphism
from .errors import SizeCap
from .lattice import FiniteLattice, FiniteModalLattice, LatticeMorphism, enumerate_homs
from .lframe import (
    FrameViolation,
    LFrame,
    ModalLFrame,
    enumerate_frame_morphisms,
    fil_f,
    filters,
    validate_lframe,
    validate_modal_lframe,
)

MAX_FRAME_POINTS = 8
MAX_GROUND = 5


def sample_lframe(rng: random.Random, size: int, attempts: int = 200) -> LFrame:
    """Meet semilattice with `size` elements: a random intersection-closed
    family of subsets of a small ground set, plus the ground set itself."""
    if not 1 <= size <= MAX_FRAME_POINTS:
        raise SizeCap(f"frame size {size} outside 1..{MAX_FRAME_POINTS}")
    m = min(MAX_GROUND, max(2, size - 1))
    full = (1 << m) - 1
    for _ in range(attempts):
        family = {full}
        for _ in range(4 * size):
            if len(family) == size:
                break
            cand = rng.getrandbits(m)
            new = set(family)
            new.add(cand)
            # close under intersection
            frontier = [cand]
            while frontier:
                a = frontier.pop()
                for b in list(new):
                    c = a & b
                    if c not in new:
                        new.add(c)
                        frontier.append(c)
            if len(new) <= size:
                family = new
        if len(family) != size:
            continue
        members = sorted(family)
        idx = {s: i for i, s in enumerate(members)}
        meet = [[idx[a & b] for b in members] for a in members]
        names = tuple(f"s{bin(s)[2:]}" for s in members)
        return validate_lframe(names, meet, idx[full])
    raise SizeCap(f"could not sample a {size}-element semilattice")


def _modal_fixpoint(frame: LFrame, succ: list[int], rounds: int) -> bool:
    """Grow the relation toward conditions (i)-(v); True when stable."""
    n = frame.n
    one = frame.one
    meet = frame.meet
    up = frame.up_masks
    down = frame.down_masks
    succ[one] = 1 << one
    for _ in range(rounds):
        changed = False
        for x in range(n):
            if x != one and succ[x] == 0:
                succ[x] |= 1 << x
                changed = True
        for x in range(n):
            for y in range(n):
                xy = meet[x][y]
                mu = succ[x]
                while mu:
                    u = (mu & -mu).bit_length() - 1
                    mu &= mu - 1
                    mv = succ[y]
                    while mv:
                        v = (mv & -mv).bit_length() - 1
                        mv &= mv - 1
                        if not succ[xy] >> meet[u][v] & 1:
                            succ[xy] |= 1 << meet[u][v]
                            changed = True
        for x in range(n):
            for y in range(n):
                if not frame.le(x, y):
                    continue
                m = succ[y]
                while m:
                    z = (m & -m).bit_length() - 1
                    m &= m - 1
                    if succ[x] & down[z] == 0:
                        succ[x] |= 1 << z
                        changed = True
                m = succ[x]
                while m:
                    w = (m & -m).bit_length() - 1
                    m &= m - 1
                    if succ[y] & up[w] == 0 and y != one:
                        succ[y] |= 1 << w
                        changed = True
        for x in range(n):
            for y in range(n):
                xy = meet[x][y]
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
                        if x != one:
                            succ[x] |= 1 << z
                        if y != one:
                            succ[y] |= 1 << z
                        changed = True
        if not changed:
            return True
    return False


def _condition_closure(frame: LFrame, succ: list[int], tag: str) -> bool:
    """Close the relation toward the named condition; False = reject."""
    n = frame.n
    one = frame.one
    meet = frame.meet
    for _ in range(2 * n * n + 4):
        changed = False
        if tag == "reflexivity":
            for x in range(n):
                if not succ[x] >> x & 1:
                    succ[x] |= 1 << x
                    changed = True
        elif tag == "transitivity":
            for x in range(n):
                m = succ[x]
                while m:
                    y = (m & -m).bit_length() - 1
                    m &= m - 1
                    if succ[y] & ~succ[x]:
                        if x == one and succ[y] & ~succ[x] != 0:
                            if succ[y] != 1 << one:
                                return False
                        succ[x] |= succ[y]
                        changed = True
        elif tag == "symmetry":
            for x in range(n):
                m = succ[x]
                while m:
                    y = (m & -m).bit_length() - 1
                    m &= m - 1
                    if not succ[y] >> x & 1:
                        if y == one and x != one:
                            return False
                        succ[y] |= 1 << x
                        changed = True
        elif tag == "euclideanity":
            for x in range(n):
                m = succ[x]
                while m:
                    y = (m & -m).bit_length() - 1
                    m &= m - 1
                    if succ[x] & ~succ[y]:
                        if y == one and succ[x] != 1 << one:
                            return False
                        succ[y] |= succ[x]
                        changed = True
        elif tag == "directedness":
            for x in range(n):
                sx = succ[x]
                my = sx
                while my:
                    y = (my & -my).bit_length() - 1
                    my &= my - 1
                    mz = sx
                    while mz:
                        z = (mz & -mz).bit_length() - 1
                        mz &= mz - 1
                        if succ[y] & succ[z]:
                            continue
                        u = (succ[y] & -succ[y]).bit_length() - 1
                        v = (succ[z] & -succ[z]).bit_length() - 1
                        t = meet[u][v]
                        if y == one or z == one:
                            return False
                        succ[y] |= 1 << t
                        succ[z] |= 1 << t
                        changed = True
        else:
            raise ValueError(f"unknown condition {tag!r}")
        if not changed:
            return True
    return False


def sample_modal_lframe(
    rng: random.Random,
    size: int,
    condition: Optional[str] = None,
    attempts: int = 400,
) -> ModalLFrame:
    """Random valid modal L-frame; with `condition` set, the frame also
    satisfies that first-order property.  Rejection keeps validity exact."""
    for _ in range(attempts):
        frame = sample_lframe(rng, size)
        n = frame.n
        succ = [0] * n
        density = rng.choice((0.2, 0.35, 0.5))
        for x in range(n):
            for y in range(n):
                if rng.random() < density:
                    succ[x] |= 1 << y
        succ[frame.one] = 1 << frame.one
        ok = True
        for _ in range(3):
            if not _modal_fixpoint(frame, succ, rounds=4 * n * n + 4):
                ok = False
                break
            if condition is None:
                break
            if not _condition_closure(frame, succ, condition):
                ok = False
                break
            holds, _ = frame_satisfies(
                ModalLFrame(frame, tuple(succ)), CONDITIONS[condition]
            )
            valid = isinstance(
                validate_modal_lframe(frame, tuple(succ)), ModalLFrame
            )
            if holds and valid:
                break
        if not ok:
            continue
        out = validate_modal_lframe(frame, tuple(succ))
        if isinstance(out, FrameViolation):
            continue
        if condition is not None:
            holds, _ = frame_satisfies(out, CONDITIONS[condition])
            if not holds:
                continue
        return out
    raise SizeCap(f"could not sample a valid modal L-frame of size {size}")


def sample_modal_lattice(
    rng: random.Random, frame_size: int, condition: Optional[str] = None
) -> FiniteModalLattice:
    """Modal lattice guaranteed to satisfy the identities: the filter
    algebra of a random valid frame."""
    return fil_f(sample_modal_lframe(rng, frame_size, condition))


def _frame_with_filter_cap(
    rng: random.Random, max_points: int, max_filters: int, condition=None, tries=60
) -> Optional[ModalLFrame]:
    for _ in range(tries):
        size = rng.randint(1, max_points)
        try:
            x = sample_modal_lframe(rng, size, condition)
        except SizeCap:
            continue
        if len(filters(x.base)) <= max_filters:
            return x
    return None


def sample_vformation(
    rng: random.Random,
    max_k: int = 4,
    max_l: int = 5,
    condition: Optional[str] = None,
    attempts: int = 80,
) -> VFormation:
    """Span of modal-lattice embeddings.

    Primary route: pick a small frame for K and two frames admitting
    surjective bounded L-morphisms onto it; the duals of those surjections
    are embeddings fil_f(K-frame) -> fil_f(L-frame).  Secondary route:
    search injective homs between independently sampled filter algebras.
    Spans without embeddings are discarded and the stream advances.
    """
    for _ in range(attempts):
        xk = _frame_with_filter_cap(rng, 3, max_k, condition)
        if xk is None:
            continue
        k = fil_f(xk)
        if rng.random() < 0.7:
            legs = []
            for _ in range(2):
                leg = None
                for _ in range(12):
                    xi = _frame_with_filter_cap(rng, 4, max_l, condition)
                    if xi is None:
                        continue
                    surjs = list(
                        enumerate_frame_morphisms(
                            xi, xk, "bounded-L", surjective_only=True
                        )
                    )
                    if surjs:
                        leg = surjs[rng.randrange(len(surjs))]
                        break
                if leg is None:
                    break
                legs.append(leg)
            if len(legs) != 2:
                continue
            h1 = dual_of_frame_morphism(legs[0])
            h2 = dual_of_frame_morphism(legs[1])
            v = VFormation(h1.dom, h1.cod, h2.cod, h1, h2)
        else:
            hs = []
            for _ in range(2):
                h = None
                for _ in range(12):
                    xi = _frame_with_filter_cap(rng, 4, max_l, condition)
                    if xi is None:
                        continue
                    li = fil_f(xi)
                    embeddings = [
                        e for e in enumerate_homs(k, li, modal=True) if e.is_injective()
                    ]
                    if embeddings:
                        h = embeddings[rng.randrange(len(embeddings))]
                        break
                if h is None:
                    break
                hs.append(h)
            if len(hs) != 2:
                continue
            v = VFormation(k, hs[0].cod, hs[1].cod, hs[0], hs[1])
        validate_vformation(v)
        return v
    raise SizeCap("could not sample a V-formation within the attempt budget")


def sample_inclusion_span(
    rng: random.Random, max_k: int = 4, max_l: int = 6, attempts: int = 100
):
    """Non-modal span K <= L1, K <= L2 with K's ids shared (for the
    glued-filter comparison): finds bounded-lattice embeddings in the
    small catalog and relabels each L so the image of K is the id prefix."""
    from .catalog import all_lattices

    for _ in range(attempts):
        nk = rng.randint(1, max_k)
        ks = all_lattices(nk)
        k = ks[rng.randrange(len(ks))]
        ls = []
        for _ in range(2):
            chosen = None
            for _ in range(12):
                nl = rng.randint(nk, max_l)
                cands = all_lattices(nl)
                lat = cands[rng.randrange(len(cands))]
                embs = [e for e in enumerate_homs(k, lat) if e.is_injective()]
                if embs:
                    chosen = _relabel_prefix(k, lat, embs[rng.randrange(len(embs))])
                    break
            if chosen is None:
                break
            ls.append(chosen)
        if len(ls) == 2:
            return k, ls[0], ls[1]
    raise SizeCap("could not sample an inclusion span")


def _relabel_prefix(k: FiniteLattice, lat: FiniteLattice, emb: LatticeMorphism):
    """Permute lat's ids so emb(i) == i for all i < |K|."""
    nk, nl = k.n, lat.n
    perm = [-1] * nl  # old id -> new id
    for i in range(nk):
        perm[emb.map[i]] = i
    nxt = nk
    for old in range(nl):
        if perm[old] < 0:
            perm[old] = nxt
            nxt += 1
    inv = [0] * nl
    for old, new in enumerate(perm):
        inv[new] = old
    leq = tuple(
        tuple(lat.leq[inv[i]][inv[j]] for j in range(nl)) for i in range(nl)
    )
    meet = tuple(
        tuple(perm[lat.meet[inv[i]][inv[j]]] for j in range(nl)) for i in range(nl)
    )
    join = tuple(
        tuple(perm[lat.join[inv[i]][inv[j]]] for j in range(nl)) for i in range(nl)
    )
    names = tuple(lat.elements[inv[i]] for i in range(nl))
    return FiniteLattice(names, leq, perm[lat.bot], perm[lat.top], meet, join)
