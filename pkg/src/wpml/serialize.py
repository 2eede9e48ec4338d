"""JSON envelope and codecs for all artifact kinds.

Every artifact is wrapped as {"format": "wpml/1", "kind": ..., "payload":
{...}}; ids in payloads refer to positions in the `elements` array.
Loaders re-validate structures, so a deserialized object is as trusted
as a freshly constructed one.
"""

from __future__ import annotations

import json
from typing import Any

from .amalgam import VFormation, validate_vformation
from .duality import ModalLSpaceFin
from .errors import WpmlError
from .formulas import parse_formula, parse_pair, pretty
from .lattice import (
    FiniteLattice,
    FiniteModalLattice,
    LatticeMorphism,
    check_modal_identities,
    validate_lattice,
    validate_morphism,
)
from .lframe import (
    FrameViolation,
    LFrame,
    ModalLFrame,
    validate_lframe,
    validate_modal_lframe,
)
from .proofs import Proof

FORMAT = "wpml/1"


class PayloadError(WpmlError):
    """Malformed artifact payload."""


def wrap(kind: str, payload: dict) -> dict:
    return {"format": FORMAT, "kind": kind, "payload": payload}


def unwrap(obj: dict) -> tuple[str, dict]:
    if not isinstance(obj, dict) or obj.get("format") != FORMAT:
        raise PayloadError(f"not a {FORMAT} envelope")
    kind = obj.get("kind")
    payload = obj.get("payload")
    if not isinstance(kind, str) or not isinstance(payload, dict):
        raise PayloadError("envelope needs string 'kind' and object 'payload'")
    if payload.get("kind", kind) != kind:
        raise PayloadError("payload kind disagrees with envelope kind")
    return kind, payload


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# --- lattices ----------------------------------------------------------------

def lattice_to_json(lat: FiniteLattice | FiniteModalLattice) -> dict:
    modal = isinstance(lat, FiniteModalLattice)
    base = lat.base if modal else lat
    out = {
        "kind": "modal_lattice" if modal else "lattice",
        "elements": list(base.elements),
        "leq": [[1 if v else 0 for v in row] for row in base.leq],
        "bot": base.bot,
        "top": base.top,
    }
    if modal:
        out["box"] = list(lat.box)
        out["diamond"] = list(lat.diamond)
    return out


def lattice_from_json(payload: dict) -> FiniteLattice | FiniteModalLattice:
    try:
        base = validate_lattice(
            payload["leq"], payload["bot"], payload["top"], payload["elements"]
        )
    except KeyError as exc:
        raise PayloadError(f"lattice payload missing {exc}")
    if payload.get("kind") == "modal_lattice" or "box" in payload:
        try:
            box = tuple(int(v) for v in payload["box"])
            diamond = tuple(int(v) for v in payload["diamond"])
        except KeyError as exc:
            raise PayloadError(f"modal lattice payload missing {exc}")
        modal = FiniteModalLattice(base, box, diamond)
        violations = check_modal_identities(modal)
        if violations:
            v = violations[0]
            raise WpmlError(
                f"modal identity violated: {v.identity} at {v.witness}"
            )
        return modal
    return base


# --- frames ------------------------------------------------------------------

def frame_to_json(frame: LFrame | ModalLFrame, provenance=None) -> dict:
    modal = isinstance(frame, ModalLFrame)
    base = frame.base if modal else frame
    out = {
        "kind": "modal_lframe" if modal else "lframe",
        "elements": list(base.elements),
        "meet": [list(row) for row in base.meet],
        "one": base.one,
    }
    if modal:
        out["R"] = [list(p) for p in frame.pairs]
    if provenance is not None:
        out["provenance"] = [hex(m) for m in provenance]
    return out


def frame_from_json(payload: dict) -> LFrame | ModalLFrame:
    try:
        base = validate_lframe(payload["elements"], payload["meet"], payload["one"])
    except KeyError as exc:
        raise PayloadError(f"frame payload missing {exc}")
    if payload.get("kind") == "modal_lframe" or "R" in payload:
        rel = [(int(x), int(y)) for x, y in payload.get("R", [])]
        out = validate_modal_lframe(base, rel)
        if isinstance(out, FrameViolation):
            raise WpmlError(
                f"modal L-frame condition ({out.condition}) violated at {out.witness}"
            )
        return out
    return base


def space_to_json(space: ModalLSpaceFin) -> dict:
    return frame_to_json(space.frame, provenance=space.provenance)


# --- morphisms and spans -------------------------------------------------------

def morphism_to_json(h: LatticeMorphism, dom_name: str, cod_name: str) -> dict:
    return {"dom": dom_name, "cod": cod_name, "map": list(h.map)}


def vformation_to_json(v: VFormation) -> dict:
    return {
        "kind": "vformation",
        "K": lattice_to_json(v.k),
        "L1": lattice_to_json(v.l1),
        "L2": lattice_to_json(v.l2),
        "h1": morphism_to_json(v.h1, "K", "L1"),
        "h2": morphism_to_json(v.h2, "K", "L2"),
    }


def vformation_from_json(payload: dict) -> VFormation:
    try:
        k = lattice_from_json(payload["K"])
        l1 = lattice_from_json(payload["L1"])
        l2 = lattice_from_json(payload["L2"])
    except KeyError as exc:
        raise PayloadError(f"vformation payload missing {exc}")
    for name, lat in (("K", k), ("L1", l1), ("L2", l2)):
        if not isinstance(lat, FiniteModalLattice):
            raise PayloadError(f"{name} must be a modal_lattice")
    structures = {"K": k, "L1": l1, "L2": l2}
    hs = []
    for name in ("h1", "h2"):
        try:
            entry = payload[name]
            dom = structures[entry["dom"]]
            cod = structures[entry["cod"]]
            h = LatticeMorphism(dom, cod, tuple(int(v) for v in entry["map"]), True)
        except KeyError as exc:
            raise PayloadError(f"{name} missing {exc}")
        validate_morphism(h)
        hs.append(h)
    v = VFormation(k, l1, l2, hs[0], hs[1])
    validate_vformation(v)
    return v


# --- proofs ------------------------------------------------------------------

def proof_to_json(p: Proof) -> dict:
    out = {
        "rule": p.rule,
        "conclusion": pretty(p.conclusion),
        "premises": [proof_to_json(q) for q in p.premises],
    }
    if p.subst:
        out["subst"] = {name: pretty(f) for name, f in p.subst}
    return out


def proof_from_json(obj: dict) -> Proof:
    try:
        conclusion = parse_pair(obj["conclusion"])
        premises = tuple(proof_from_json(q) for q in obj.get("premises", []))
        subst = tuple(
            sorted(
                (name, parse_formula(text))
                for name, text in obj.get("subst", {}).items()
            )
        )
        return Proof(obj["rule"], conclusion, premises, subst)
    except KeyError as exc:
        raise PayloadError(f"proof node missing {exc}")


LOADERS = {
    "lattice": lattice_from_json,
    "modal_lattice": lattice_from_json,
    "lframe": frame_from_json,
    "modal_lframe": frame_from_json,
    "vformation": vformation_from_json,
}


def load_artifact(obj: dict):
    kind, payload = unwrap(obj)
    if kind not in LOADERS:
        raise PayloadError(f"no loader for kind {kind!r}")
    return kind, LOADERS[kind](payload)
