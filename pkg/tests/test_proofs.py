import random

import pytest

from wpml.correspondence import AXIOMS
from wpml.errors import ResourceBound
from wpml.formulas import (
    TOP,
    And,
    Box,
    ConsequencePair,
    Dia,
    Letter,
    parse_pair,
)
from wpml.generators import sample_modal_lattice, sample_modal_lframe
from wpml.lattice import algebra_validates
from wpml.lframe import frame_validates
from wpml.proofs import BadNode, Proof, check_proof, cut_pool, derive_bounded
from wpml.serialize import proof_from_json, proof_to_json


class TestCheckProof:
    def test_reflexivity_leaf(self):
        p = Proof("reflexivity", parse_pair("p |- p"))
        assert check_proof(p) is None

    def test_transitivity_node(self):
        a = Proof("reflexivity", parse_pair("p |- p"))
        chain = Proof(
            "transitivity",
            parse_pair("p |- r"),
            (
                Proof("top", parse_pair("p |- T")),
                Proof("bottom", parse_pair("T |- r")),
            ),
        )
        # premises chain but the second node is not a bottom instance
        bad = check_proof(chain)
        assert bad is not None and bad.path == (1,)
        del a

    def test_valid_transitivity(self):
        n = Proof(
            "transitivity",
            parse_pair("p & q |- p v r"),
            (
                Proof("left-conjunction", parse_pair("p & q |- p")),
                Proof("right-disjunction", parse_pair("p |- p v r")),
            ),
        )
        assert check_proof(n) is None

    def test_wrong_linearity_claim(self):
        bad = Proof("linearity", parse_pair("<>p & <>q |- <>(p & q)"))
        out = check_proof(bad)
        assert isinstance(out, BadNode) and out.path == ()

    def test_axiom_instance(self):
        node = Proof("axiom", parse_pair("[](a & b) |- a & b"))
        assert check_proof(node, AXIOMS["T"]) is None
        assert check_proof(node, AXIOMS["4"]) is not None

    def test_premise_mismatch_path(self):
        inner = Proof("reflexivity", parse_pair("p |- q"))  # broken leaf
        outer = Proof("becker-box", parse_pair("[]p |- []q"), (inner,))
        out = check_proof(outer)
        assert out is not None and out.path == (0,)


class TestDeriveBounded:
    def test_bottom_axiom(self):
        p = derive_bounded((), parse_pair("F |- []p"), 2)
        assert p is not None and p.rule == "bottom"
        assert check_proof(p) is None

    def test_becker(self):
        p = derive_bounded((), parse_pair("[](p & q) |- []p"), 3)
        assert p is not None and p.rule == "becker-box"
        assert p.height() <= 3
        assert check_proof(p) is None

    def test_no_proof_of_necessitation_collapse(self):
        assert derive_bounded((), parse_pair("p |- []p"), 6) is None

    def test_duality_axiom(self):
        p = derive_bounded((), parse_pair("<>p & []q |- <>(p & q)"), 2)
        assert p is not None and p.rule == "duality"

    def test_gamma_instance(self):
        p = derive_bounded(AXIOMS["T"], parse_pair("[](p v q) |- p v q"), 2)
        assert p is not None and p.rule == "axiom"
        assert dict(p.subst) == {"p": parse_pair("p v q |- p").lhs}

    def test_conclusion_matches_goal(self):
        goal = parse_pair("[]p & []q |- [](p & q)")
        p = derive_bounded((), goal, 4)
        assert p is not None and p.conclusion == goal

    def test_budget_raises(self):
        # more than three letters, so the semantic screen stands aside
        with pytest.raises(ResourceBound):
            derive_bounded(
                (), parse_pair("a1 & a2 & a3 & a4 |- b1 v b2"), 30, budget=3
            )

    def test_determinism(self):
        goal = parse_pair("[](p & q) & r |- <>p v s")
        a = derive_bounded(AXIOMS["T"], goal, 6)
        b = derive_bounded(AXIOMS["T"], goal, 6)
        assert a == b


class TestEmptyLogicBoxDiamond:
    """The pair []p |- <>p is derivable in the base calculus (via the
    duality axiom at T and the modal-top axiom), so no frame can refute
    it; bounded search with the subformula cut pool does not find this
    derivation, which is an admissible Unknown."""

    def hand_derivation(self):
        p = Letter("p")
        top_cut = Proof(
            "transitivity",
            ConsequencePair(Box(p), Dia(TOP)),
            (
                Proof("top", ConsequencePair(Box(p), TOP)),
                Proof("modal-top", ConsequencePair(TOP, Dia(TOP))),
            ),
        )
        pair_up = Proof(
            "right-conjunction",
            ConsequencePair(Box(p), And(Dia(TOP), Box(p))),
            (top_cut, Proof("reflexivity", ConsequencePair(Box(p), Box(p)))),
        )
        push = Proof(
            "transitivity",
            ConsequencePair(And(Dia(TOP), Box(p)), Dia(p)),
            (
                Proof(
                    "duality", ConsequencePair(And(Dia(TOP), Box(p)), Dia(And(TOP, p)))
                ),
                Proof(
                    "becker-dia",
                    ConsequencePair(Dia(And(TOP, p)), Dia(p)),
                    (
                        Proof(
                            "left-conjunction", ConsequencePair(And(TOP, p), p)
                        ),
                    ),
                ),
            ),
        )
        return Proof(
            "transitivity", ConsequencePair(Box(p), Dia(p)), (pair_up, push)
        )

    def test_hand_derivation_checks(self):
        assert check_proof(self.hand_derivation(), ()) is None

    def test_hand_derivation_is_semantically_valid_everywhere(self):
        rng = random.Random(99)
        goal = parse_pair("[]p |- <>p")
        for _ in range(25):
            a = sample_modal_lattice(rng, rng.randint(1, 4))
            assert algebra_validates(a, goal) is None
            x = sample_modal_lframe(rng, rng.randint(1, 4))
            assert frame_validates(x, goal) is None


class TestCutPool:
    def test_contains_goal_subformulas_constants_and_modal_closure(self):
        goal = parse_pair("p & q |- r")
        pool = set(cut_pool(goal))
        for text in ("p", "q", "r", "p & q", "T", "F", "[]p", "<>r", "[]T"):
            from wpml.formulas import parse_formula

            assert parse_formula(text) in pool

    def test_gamma_instances_included(self):
        goal = parse_pair("[]p |- <>p")
        pool = set(cut_pool(goal, AXIOMS["T"]))
        from wpml.formulas import parse_formula

        # T instantiated at []p contributes [][]p via subformulas+closure
        assert parse_formula("[][]p") in pool


class TestSoundness:
    def test_seeded_proofs_validate_on_algebras_and_frames(self):
        rng = random.Random(31)
        goals = [
            ("[]p & []q |- [](p & q)", ()),
            ("F |- q", ()),
            ("p & (q & r) |- q", ()),
            ("[](p & q) |- []p v s", ()),
            ("[]p |- <>p", ("T",)),
            ("[]p & q |- [][]p", ("4",)),
            ("<>p |- []<>p v r", ("5",)),
        ]
        algebras = [sample_modal_lattice(rng, rng.randint(1, 4)) for _ in range(50)]
        frames = [sample_modal_lframe(rng, rng.randint(1, 4)) for _ in range(50)]
        checked = 0
        for text, tags in goals:
            gamma = tuple(p for t in tags for p in AXIOMS[t])
            proof = derive_bounded(gamma, parse_pair(text), 6)
            assert proof is not None, text
            assert check_proof(proof, gamma) is None
            for a in algebras:
                if all(algebra_validates(a, g) is None for g in gamma):
                    assert algebra_validates(a, proof.conclusion) is None
                    checked += 1
            for x in frames:
                if all(frame_validates(x, g) is None for g in gamma):
                    assert frame_validates(x, proof.conclusion) is None
                    checked += 1
        assert checked > 300


class TestProofSerialization:
    def test_round_trip(self):
        p = derive_bounded(AXIOMS["T"], parse_pair("[](p & q) |- <>p"), 5)
        assert p is not None
        blob = proof_to_json(p)
        back = proof_from_json(blob)
        assert back == p
        assert check_proof(back, AXIOMS["T"]) is None

    def test_json_shape(self):
        p = Proof("reflexivity", parse_pair("p |- p"))
        blob = proof_to_json(p)
        assert blob == {"rule": "reflexivity", "conclusion": "p |- p", "premises": []}
