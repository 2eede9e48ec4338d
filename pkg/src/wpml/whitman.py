"""Order decision for the free bounded lattice on the letters.

Constants are normalized away first (a meet with F collapses, a join
with T collapses, units drop out), leaving T, F or a constant-free term;
the constant-free fragment is decided by Whitman's condition.  The
procedure is cross-checked against proof search and finite-lattice
countermodel search rather than trusted axiomatically.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import PreconditionViolated
from .formulas import (
    BOT,
    TOP,
    And,
    Bot,
    Formula,
    Letter,
    Or,
    Top,
    is_modality_free,
)


def normalize_constants(f: Formula) -> Formula:
    """Collapse T/F through meets and joins, bottom-up."""
    if isinstance(f, And):
        a = normalize_constants(f.lhs)
        b = normalize_constants(f.rhs)
        if isinstance(a, Bot) or isinstance(b, Bot):
            return BOT
        if isinstance(a, Top):
            return b
        if isinstance(b, Top):
            return a
        return And(a, b)
    if isinstance(f, Or):
        a = normalize_constants(f.lhs)
        b = normalize_constants(f.rhs)
        if isinstance(a, Top) or isinstance(b, Top):
            return TOP
        if isinstance(a, Bot):
            return b
        if isinstance(b, Bot):
            return a
        return Or(a, b)
    return f


@lru_cache(maxsize=None)
def _whitman(a: Formula, b: Formula) -> bool:
    """Whitman's condition on constant-free terms."""
    if isinstance(a, Or):
        return _whitman(a.lhs, b) and _whitman(a.rhs, b)
    if isinstance(b, And):
        return _whitman(a, b.lhs) and _whitman(a, b.rhs)
    if isinstance(a, Letter):
        if isinstance(b, Letter):
            return a.name == b.name
        # b is a join
        return _whitman(a, b.lhs) or _whitman(a, b.rhs)
    # a is a meet
    if _whitman(a.lhs, b) or _whitman(a.rhs, b):
        return True
    if isinstance(b, Or):
        return _whitman(a, b.lhs) or _whitman(a, b.rhs)
    return False


def free_lattice_leq(phi: Formula, psi: Formula) -> bool:
    """True iff phi |- psi is derivable in the pure bounded-lattice
    calculus.  Both formulas must be modality free."""
    if not (is_modality_free(phi) and is_modality_free(psi)):
        raise PreconditionViolated("free_lattice_leq needs modality-free formulas")
    a = normalize_constants(phi)
    b = normalize_constants(psi)
    if isinstance(a, Bot) or isinstance(b, Top):
        return True
    if isinstance(a, Top):
        return isinstance(b, Top)
    if isinstance(b, Bot):
        return isinstance(a, Bot)
    return _whitman(a, b)
