"""The consequence-pair calculus: proof trees, the checker, and bounded
backward proof search.

Thirteen schemata: top, bottom, reflexivity, transitivity, left/right
conjunction, left/right disjunction, modal top, the two Becker rules,
linearity and duality; plus substitution instances of the members of an
axiom set.  Transitivity is searched over a bounded cut-formula pool
(subformulas of the goal and of axiom instances, the constants, all
closed once under box/diamond), so completeness is only relative to the
bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

from .errors import ResourceBound
from .formulas import (
    BOT,
    TOP,
    And,
    Bot,
    Box,
    ConsequencePair,
    Dia,
    Formula,
    Or,
    Top,
    formula_key,
    letters,
    match_pair,
    subformulas,
    substitute,
)

RULES = (
    "top",
    "bottom",
    "reflexivity",
    "transitivity",
    "left-conjunction",
    "right-conjunction",
    "left-disjunction",
    "right-disjunction",
    "modal-top",
    "becker-box",
    "becker-dia",
    "linearity",
    "duality",
    "axiom",
)


@dataclass(frozen=True)
class Proof:
    rule: str
    conclusion: ConsequencePair
    premises: tuple["Proof", ...] = ()
    subst: tuple[tuple[str, Formula], ...] = ()

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()


@dataclass(frozen=True)
class BadNode:
    path: tuple[int, ...]
    reason: str


def _axiom_matches(rule: str, c: ConsequencePair) -> Optional[str]:
    """None if the premise-less schema matches the conclusion, else why not."""
    lhs, rhs = c.lhs, c.rhs
    if rule == "top":
        return None if isinstance(rhs, Top) else "right side must be T"
    if rule == "bottom":
        return None if isinstance(lhs, Bot) else "left side must be F"
    if rule == "reflexivity":
        return None if lhs == rhs else "sides differ"
    if rule == "left-conjunction":
        if isinstance(lhs, And) and rhs in (lhs.lhs, lhs.rhs):
            return None
        return "needs a & b |- a or a & b |- b"
    if rule == "right-disjunction":
        if isinstance(rhs, Or) and lhs in (rhs.lhs, rhs.rhs):
            return None
        return "needs a |- a v b or b |- a v b"
    if rule == "modal-top":
        if isinstance(lhs, Top) and rhs in (Box(TOP), Dia(TOP)):
            return None
        return "needs T |- []T or T |- <>T"
    if rule == "linearity":
        if (
            isinstance(lhs, And)
            and isinstance(lhs.lhs, Box)
            and isinstance(lhs.rhs, Box)
            and rhs == Box(And(lhs.lhs.arg, lhs.rhs.arg))
        ):
            return None
        return "needs []a & []b |- [](a & b)"
    if rule == "duality":
        if (
            isinstance(lhs, And)
            and isinstance(lhs.lhs, Dia)
            and isinstance(lhs.rhs, Box)
            and rhs == Dia(And(lhs.lhs.arg, lhs.rhs.arg))
        ):
            return None
        return "needs <>a & []b |- <>(a & b)"
    return f"unknown premise-less rule {rule!r}"


def _rule_matches(rule: str, c: ConsequencePair, prems) -> Optional[str]:
    """Check an inference node whose premises are already-checked pairs."""
    lhs, rhs = c.lhs, c.rhs
    if rule == "transitivity":
        if len(prems) != 2:
            return "transitivity takes two premises"
        p, q = prems
        if p.lhs == lhs and p.rhs == q.lhs and q.rhs == rhs:
            return None
        return "premises do not chain"
    if rule == "right-conjunction":
        if len(prems) != 2:
            return "right-conjunction takes two premises"
        if not isinstance(rhs, And):
            return "conclusion right side must be a conjunction"
        p, q = prems
        if p == ConsequencePair(lhs, rhs.lhs) and q == ConsequencePair(lhs, rhs.rhs):
            return None
        return "premises must derive both conjuncts"
    if rule == "left-disjunction":
        if len(prems) != 2:
            return "left-disjunction takes two premises"
        if not isinstance(lhs, Or):
            return "conclusion left side must be a disjunction"
        p, q = prems
        if p == ConsequencePair(lhs.lhs, rhs) and q == ConsequencePair(lhs.rhs, rhs):
            return None
        return "premises must cover both disjuncts"
    if rule == "becker-box":
        if len(prems) != 1:
            return "becker-box takes one premise"
        if (
            isinstance(lhs, Box)
            and isinstance(rhs, Box)
            and prems[0] == ConsequencePair(lhs.arg, rhs.arg)
        ):
            return None
        return "needs a |- b deriving []a |- []b"
    if rule == "becker-dia":
        if len(prems) != 1:
            return "becker-dia takes one premise"
        if (
            isinstance(lhs, Dia)
            and isinstance(rhs, Dia)
            and prems[0] == ConsequencePair(lhs.arg, rhs.arg)
        ):
            return None
        return "needs a |- b deriving <>a |- <>b"
    return f"unknown rule {rule!r}"


_INFERENCE_RULES = (
    "transitivity",
    "right-conjunction",
    "left-disjunction",
    "becker-box",
    "becker-dia",
)


def check_proof(proof: Proof, gamma=()) -> Optional[BadNode]:
    """None iff every node instantiates one of the thirteen schemata or a
    substitution instance of a member of gamma, with matching premises."""

    def check_node(node: Proof, path) -> Optional[BadNode]:
        if node.rule == "axiom":
            if node.premises:
                return BadNode(path, "axiom nodes take no premises")
            for member in gamma:
                if match_pair(member, node.conclusion) is not None:
                    return None
            return BadNode(path, "not an instance of any axiom in the set")
        if node.rule in _INFERENCE_RULES:
            why = _rule_matches(
                node.rule, node.conclusion, [p.conclusion for p in node.premises]
            )
            return None if why is None else BadNode(path, why)
        if node.premises:
            return BadNode(path, f"{node.rule} takes no premises")
        why = _axiom_matches(node.rule, node.conclusion)
        return None if why is None else BadNode(path, why)

    def walk(node: Proof, path) -> Optional[BadNode]:
        bad = check_node(node, path)
        if bad is not None:
            return bad
        for i, prem in enumerate(node.premises):
            bad = walk(prem, path + (i,))
            if bad is not None:
                return bad
        return None

    return walk(proof, ())


def cut_pool(
    goal: ConsequencePair,
    gamma=(),
    instance_cap: int = 256,
    pool_cap: int = 512,
) -> tuple[Formula, ...]:
    """Deterministic cut-formula pool: subformulas of the goal and of
    axiom instances over them, plus constants, closed once under the
    modalities.

    Axiom instantiation grids are ranked by total substituted size and
    truncated at `instance_cap` per member; the final pool keeps the
    `pool_cap` smallest formulas.  Both caps only bound the search, they
    never affect soundness.
    """
    from .formulas import size as fsize

    base: set[Formula] = {TOP, BOT}
    base |= subformulas(goal.lhs) | subformulas(goal.rhs)
    ground = sorted(base, key=lambda f: (fsize(f), formula_key(f)))
    for member in gamma:
        vs = sorted(letters(member))
        combos = sorted(
            product(ground, repeat=len(vs)),
            key=lambda c: (sum(fsize(f) for f in c), tuple(formula_key(f) for f in c)),
        )[:instance_cap]
        for combo in combos:
            m = dict(zip(vs, combo))
            base |= subformulas(substitute(member.lhs, m))
            base |= subformulas(substitute(member.rhs, m))
    once = set(base)
    for f in base:
        once.add(Box(f))
        once.add(Dia(f))
        # bridge for the forced seriality pattern: box f |- dia f goes
        # through dia T & box f |- dia(T & f) (the duality axiom at T)
        once.add(And(Dia(TOP), Box(f)))
        once.add(Dia(And(TOP, f)))
    ranked = sorted(once, key=lambda f: (fsize(f), formula_key(f)))[:pool_cap]
    return tuple(sorted(ranked, key=formula_key))


_NEVER = 10**9


@lru_cache(maxsize=64)
def _screening_algebras(gamma):
    """Small modal lattices validating every member of gamma.  A subgoal
    refuted on one of them is not derivable (soundness), so the search
    may discard it without exploring; this changes no verdicts, only
    cost."""
    from .catalog import all_lattices, all_modal_lframes
    from .lattice import algebra_validates, with_identity_modalities
    from .lframe import fil_f

    candidates = []
    for n in (2, 3):
        for frame in all_modal_lframes(n):
            candidates.append(fil_f(frame))
    for n in (2, 3, 4, 5):
        for lat in all_lattices(n):
            candidates.append(with_identity_modalities(lat))
    out = []
    seen = set()
    for a in candidates:
        key = (a.base.leq, a.box, a.diamond)
        if key in seen:
            continue
        seen.add(key)
        if all(algebra_validates(a, g) is None for g in gamma):
            out.append(a)
        if len(out) >= 12:
            break
    return tuple(out)


class ProofSearch:
    """Backward search context with memoization that persists across
    goals sharing the same axiom set and cut pool.  Deterministic: rules
    are tried in a fixed order and cut formulas in structural order, so
    the returned proof is the first in that order."""

    def __init__(self, gamma, pool, budget: int = 200_000, screens=None):
        self.gamma = tuple(gamma)
        self.pool = tuple(pool)
        self.budget = budget
        self.screens = (
            _screening_algebras(self.gamma) if screens is None else tuple(screens)
        )
        self.success: dict[ConsequencePair, Proof] = {}
        self.failed_at: dict[ConsequencePair, int] = {}
        self._screen_ok: set[ConsequencePair] = set()
        self.expansions = 0

    def _screened_out(self, pair: ConsequencePair) -> bool:
        from .lattice import algebra_validates

        if pair in self._screen_ok:
            return False
        if len(letters(pair)) > 3:
            self._screen_ok.add(pair)
            return False
        for a in self.screens:
            if algebra_validates(a, pair) is not None:
                return True
        self._screen_ok.add(pair)
        return False

    def _leaf(self, pair: ConsequencePair) -> Optional[Proof]:
        for rule in (
            "reflexivity",
            "top",
            "bottom",
            "left-conjunction",
            "right-disjunction",
            "modal-top",
            "linearity",
            "duality",
        ):
            if _axiom_matches(rule, pair) is None:
                return Proof(rule, pair)
        for member in self.gamma:
            subst = match_pair(member, pair)
            if subst is not None:
                return Proof("axiom", pair, (), tuple(sorted(subst.items())))
        return None

    def prove(self, pair: ConsequencePair, depth: int) -> Optional[Proof]:
        if pair in self.success:
            return self.success[pair]
        if depth <= 0 or self.failed_at.get(pair, -1) >= depth:
            return None
        self.expansions += 1
        if self.expansions > self.budget:
            raise ResourceBound(self.expansions, self.budget)
        if self._screened_out(pair):
            self.failed_at[pair] = _NEVER
            return None
        found = self._leaf(pair)
        lhs, rhs = pair.lhs, pair.rhs
        if found is None and depth < 2:
            # no room for premises: only leaves fit
            self.failed_at[pair] = depth
            return None
        if found is None and isinstance(rhs, And):
            a = self.prove(ConsequencePair(lhs, rhs.lhs), depth - 1)
            if a is not None:
                b = self.prove(ConsequencePair(lhs, rhs.rhs), depth - 1)
                if b is not None:
                    found = Proof("right-conjunction", pair, (a, b))
        if found is None and isinstance(lhs, Or):
            a = self.prove(ConsequencePair(lhs.lhs, rhs), depth - 1)
            if a is not None:
                b = self.prove(ConsequencePair(lhs.rhs, rhs), depth - 1)
                if b is not None:
                    found = Proof("left-disjunction", pair, (a, b))
        if found is None and isinstance(lhs, Box) and isinstance(rhs, Box):
            a = self.prove(ConsequencePair(lhs.arg, rhs.arg), depth - 1)
            if a is not None:
                found = Proof("becker-box", pair, (a,))
        if found is None and isinstance(lhs, Dia) and isinstance(rhs, Dia):
            a = self.prove(ConsequencePair(lhs.arg, rhs.arg), depth - 1)
            if a is not None:
                found = Proof("becker-dia", pair, (a,))
        if found is None:
            for cut in self.pool:
                if cut == lhs or cut == rhs:
                    continue
                a = self.prove(ConsequencePair(lhs, cut), depth - 1)
                if a is None:
                    continue
                b = self.prove(ConsequencePair(cut, rhs), depth - 1)
                if b is not None:
                    found = Proof("transitivity", pair, (a, b))
                    break
        if found is not None:
            self.success[pair] = found
        else:
            self.failed_at[pair] = depth
        return found


def order_cuts(goal: ConsequencePair, pool) -> tuple[Formula, ...]:
    """Search order for transitivity cuts: goal subformulas first (small
    to large), then the remaining pool formulas.  The pool order is the
    search order inside ProofSearch."""
    from .formulas import size as fsize

    subs = subformulas(goal.lhs) | subformulas(goal.rhs)
    return tuple(
        sorted(pool, key=lambda f: (f not in subs, fsize(f), formula_key(f)))
    )


def derive_bounded(
    gamma,
    goal: ConsequencePair,
    depth: int,
    budget: int = 200_000,
    pool: Optional[tuple[Formula, ...]] = None,
) -> Optional[Proof]:
    """One-shot bounded search; returns a proof whose conclusion is the
    goal, or None when the bounded space is exhausted.  Raises
    ResourceBound when the expansion budget is exceeded."""
    gamma = tuple(gamma)
    if pool is None:
        pool = cut_pool(goal, gamma)
    return ProofSearch(gamma, order_cuts(goal, pool), budget).prove(goal, depth)
