import random
from itertools import product

import pytest

from wpml.catalog import all_lframes, all_modal_lframes
from wpml.errors import PreconditionViolated, ResourceBound, UndefinedLetter
from wpml.formulas import parse_formula, parse_pair
from wpml.lattice import check_modal_identities, validate_lattice
from wpml.lframe import (
    FrameMorphism,
    FrameViolation,
    ModalLFrame,
    enumerate_frame_morphisms,
    fil_f,
    filters,
    frame_join,
    frame_validates,
    is_bounded_l_morphism,
    is_filter,
    is_l_morphism,
    satisfies,
    successor_extrema,
    truth_set,
    validate_modal_lframe,
)

from conftest import identity_modal


class TestValidateModalLFrame:
    def test_identity_relation_always_accepted(self):
        for n in range(1, 5):
            for frame in all_lframes(n):
                out = validate_modal_lframe(frame, [(i, i) for i in range(n)])
                assert isinstance(out, ModalLFrame)

    def test_missing_successors_rejected(self, chain2_frame):
        out = validate_modal_lframe(chain2_frame, [(1, 1)])
        assert isinstance(out, FrameViolation)
        assert out.condition == "i" and out.witness == (0,)

    def test_full_two_chain_relation_accepted(self, chain2_frame):
        out = validate_modal_lframe(chain2_frame, [(1, 1), (0, 0), (0, 1)])
        assert isinstance(out, ModalLFrame)

    def test_exhaustive_two_chain(self, chain2_frame):
        # direct condition scan over all 16 relations: exactly three valid
        valid = []
        for bits in range(16):
            rel = [
                (x, y)
                for k, (x, y) in enumerate(product(range(2), repeat=2))
                if bits >> k & 1
            ]
            if isinstance(validate_modal_lframe(chain2_frame, rel), ModalLFrame):
                valid.append(bits)
        assert len(valid) == 3
        assert sorted(m.succ for m in all_modal_lframes(2)) == sorted(
            [(1, 2), (2, 2), (3, 2)]
        )


class TestFilters:
    def brute(self, frame):
        return sorted(m for m in range(1, 1 << frame.n) if is_filter(frame, m))

    def test_three_chain(self, chain3_frame):
        assert filters(chain3_frame) == [0b100, 0b110, 0b111]

    def test_m2_diamond(self, m2_frame):
        # {1}, up(a), up(b), everything
        assert filters(m2_frame) == [0b1000, 0b1010, 0b1100, 0b1111]

    def test_one_point(self):
        frame = all_lframes(1)[0]
        assert filters(frame) == [1]

    def test_against_brute_force(self):
        for n in range(1, 6):
            for frame in all_lframes(n):
                assert filters(frame) == self.brute(frame)


class TestFilF:
    def test_identity_relation_gives_identity_operators(self, m2_frame):
        x = identity_modal(m2_frame)
        a = fil_f(x)
        assert a.box == tuple(range(a.n))
        assert a.diamond == tuple(range(a.n))

    def test_one_point_frame(self):
        x = identity_modal(all_lframes(1)[0])
        assert fil_f(x).n == 1

    def test_m2_filter_lattice_is_b4_shaped(self, m2_frame):
        from conftest import B4_LEQ

        a = fil_f(identity_modal(m2_frame))
        assert a.n == 4
        want = validate_lattice(B4_LEQ, 0, 3)
        assert a.base.leq == want.leq  # two incomparable mid elements

    def test_lattice_structure_revalidates(self):
        for n in range(1, 5):
            for frame in all_lframes(n):
                a = fil_f(identity_modal(frame))
                validate_lattice(a.base.leq, a.base.bot, a.base.top)

    def test_identities_on_seeded_sample(self):
        # frames of size <= 5: exhaustive for <= 4, seeded relations for 5
        rng = random.Random(11)
        from wpml.generators import sample_modal_lframe

        for _ in range(100):
            x = sample_modal_lframe(rng, rng.randint(1, 5))
            assert check_modal_identities(fil_f(x)) == []


class TestMorphismCheckers:
    def test_identity_is_l_morphism(self, chain3_frame):
        f = FrameMorphism(chain3_frame, chain3_frame, (0, 1, 2), "L")
        assert is_l_morphism(f) is None

    def test_constant_to_one_violates_unit_reflection(self, chain2_frame):
        f = FrameMorphism(chain2_frame, chain2_frame, (1, 1), "L")
        bad = is_l_morphism(f)
        assert bad is not None and bad.condition == "unit-reflection"

    def test_meet_cover_violation(self, m2_frame, chain2_frame):
        # embed the 2-chain as {0, 1} inside the diamond: a meet b lands
        # on the image of x but neither a nor b is below any image point
        # except 1, and 1 meet 1 is not below x
        f = FrameMorphism(chain2_frame, m2_frame, (0, 3), "L")
        bad = is_l_morphism(f)
        assert bad is not None and bad.condition == "meet-cover"
        assert bad.witness == (0, 1, 2)  # x, a, b

    def test_identity_bounded(self, chain3_frame):
        x = identity_modal(chain3_frame)
        f = FrameMorphism(x, x, (0, 1, 2), "bounded-L")
        assert is_bounded_l_morphism(f) is None

    def test_forth_violation(self, chain2_frame):
        x = validate_modal_lframe(chain2_frame, [(0, 0), (1, 1)])
        y = validate_modal_lframe(chain2_frame, [(0, 1), (1, 1)])
        f = FrameMorphism(x, y, (0, 1), "bounded-L")
        bad = is_bounded_l_morphism(f)
        assert bad is not None and bad.condition in ("forth", "back-below", "back-above")

    def test_enumerate_frame_morphisms_matches_checkers(self, chain3_frame, chain2_frame):
        x3 = identity_modal(chain3_frame)
        x2 = identity_modal(chain2_frame)
        got = list(enumerate_frame_morphisms(x3, x2, "bounded-L"))
        for f in got:
            assert is_bounded_l_morphism(f) is None
        # oracle: filter all maps
        oracle = []
        for mapping in product(range(2), repeat=3):
            f = FrameMorphism(x3, x2, mapping, "bounded-L")
            try:
                ok = is_bounded_l_morphism(f) is None
            except Exception:
                ok = False
            if ok:
                oracle.append(mapping)
        assert [f.map for f in got] == oracle


class TestSatisfaction:
    def test_top_always(self, m2_frame):
        x = identity_modal(m2_frame)
        for point in range(x.n):
            assert satisfies(x, {}, point, parse_formula("T"))

    def test_bottom_only_at_one(self, chain3_frame):
        x = identity_modal(chain3_frame)
        f = parse_formula("F")
        assert satisfies(x, {}, x.one, f)
        for point in range(x.n):
            if point != x.one:
                assert not satisfies(x, {}, point, f)

    def test_box_under_identity_relation(self, m2_frame):
        x = identity_modal(m2_frame)
        val = {"p": 0b1010}
        for point in range(x.n):
            assert satisfies(x, val, point, parse_formula("[]p")) == satisfies(
                x, val, point, parse_formula("p")
            )

    def test_undefined_letter(self, chain2_frame):
        x = identity_modal(chain2_frame)
        with pytest.raises(UndefinedLetter):
            satisfies(x, {}, 0, parse_formula("p"))

    def test_truth_sets_agree_with_pointwise_and_are_filters(self):
        # every valid frame of size <= 3, formulas of depth <= 2 over two
        # letters, all filter-valued valuations
        forms = [
            parse_formula(s)
            for s in (
                "p", "q", "T", "F", "p & q", "p v q", "[]p", "<>p",
                "[](p v q)", "<>(p & q)", "[]p & <>q", "p v []q",
            )
        ]
        for n in range(1, 4):
            for x in all_modal_lframes(n):
                fs = filters(x.base)
                for vp in fs:
                    for vq in fs:
                        val = {"p": vp, "q": vq}
                        for f in forms:
                            ts = truth_set(x, val, f)
                            assert ts == sum(
                                1 << pt
                                for pt in range(x.n)
                                if satisfies(x, val, pt, f)
                            )
                            assert is_filter(x.base, ts)

    def test_truth_set_filter_invariant_size_4_depth_3(self):
        # seeded slice of the size-4, depth-3 grid
        from wpml.generators import sample_modal_lframe

        forms = [
            parse_formula(s)
            for s in (
                "[](p v q)", "<>([]p & q)", "[]<>p", "<>(p v <>q)",
                "[](p & q) v <>q", "([]p v q) & <>p", "F v []q",
            )
        ]
        rng = random.Random(8)
        for _ in range(25):
            x = sample_modal_lframe(rng, 4)
            fs = filters(x.base)
            for vp in fs:
                for vq in fs:
                    val = {"p": vp, "q": vq}
                    for f in forms:
                        ts = truth_set(x, val, f)
                        assert is_filter(x.base, ts)
                        assert ts == sum(
                            1 << pt
                            for pt in range(x.n)
                            if satisfies(x, val, pt, f)
                        )


class TestFrameValidates:
    def test_reflexive_frame_validates_t(self, chain3_frame):
        x = identity_modal(chain3_frame)
        assert frame_validates(x, parse_pair("[]p |- p")) is None

    def test_some_nonreflexive_frame_refutes_t(self):
        # exhaustive sweep: the least frame with a non-reflexive tight
        # point refuting []p |- p
        from wpml.correspondence import frame_satisfies

        pair = parse_pair("[]p |- p")
        found = None
        for n in range(1, 4):
            for x in all_modal_lframes(n):
                cv = frame_validates(x, pair)
                if cv is not None:
                    found = (x, cv)
                    break
            if found:
                break
        assert found is not None
        x, cv = found
        assert not frame_satisfies(x, "reflexivity")[0]
        lhs = truth_set(x, cv, parse_formula("[]p"))
        rhs = truth_set(x, cv, parse_formula("p"))
        assert lhs & ~rhs

    def test_bottom_axiom(self):
        for n in range(1, 4):
            for x in all_modal_lframes(n):
                assert frame_validates(x, parse_pair("F |- p")) is None

    def test_budget(self, m2_frame):
        x = identity_modal(m2_frame)
        with pytest.raises(ResourceBound):
            frame_validates(x, parse_pair("a & b & c |- d"), budget=7)


class TestSuccessorStructure:
    def test_extrema_identity(self, m2_frame):
        x = identity_modal(m2_frame)
        for point in range(x.n):
            assert successor_extrema(x, point, point) == (point, point)

    def test_extrema_in_chain_successors(self):
        # frame: 3-chain with R[0] = {0, m, 1} (a 3-chain inside)
        frames = all_lframes(3)
        x = validate_modal_lframe(
            frames[0], [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
        )
        assert isinstance(x, ModalLFrame)
        assert successor_extrema(x, 0, 1) == (0, 2)

    def test_extrema_requires_edge(self, chain2_frame):
        x = identity_modal(chain2_frame)
        with pytest.raises(PreconditionViolated):
            successor_extrema(x, 0, 1)

    def test_successor_sets_nonempty_and_meet_closed(self):
        for n in range(1, 5):
            for x in all_modal_lframes(n):
                for pt in range(x.n):
                    s = x.succ[pt]
                    assert s != 0
                    members = [w for w in range(x.n) if s >> w & 1]
                    for a in members:
                        for b in members:
                            assert s >> x.meet[a][b] & 1

    def test_non_convex_successor_set_exists_on_valid_non_tight_frame(self):
        # R[m] = {0, 1} on the 3-chain is valid per the five conditions but
        # not convex; tightening adds (m, m).  Convexity is a property of
        # tight frames (spaces), not of all valid frames.
        from wpml.duality import is_tight, tightening

        frames = all_lframes(3)
        x = validate_modal_lframe(
            frames[0], [(0, 0), (0, 2), (1, 0), (1, 2), (2, 2)]
        )
        assert isinstance(x, ModalLFrame)
        assert x.succ[1] == 0b101  # 0 and 1(=top id 2)... mask {0, 2}
        assert not is_tight(x)
        assert tightening(x)[1] & 0b010  # (m, m) appears after tightening

    def test_convexity_holds_on_tight_frames(self):
        from wpml.duality import is_tight

        for n in range(1, 5):
            for x in all_modal_lframes(n):
                if not is_tight(x):
                    continue
                for pt in range(x.n):
                    members = [w for w in range(x.n) if x.succ[pt] >> w & 1]
                    for a in members:
                        for b in members:
                            for c in range(x.n):
                                if x.le(a, c) and x.le(c, b):
                                    assert x.succ[pt] >> c & 1


class TestFrameJoin:
    def test_singleton(self, m2_frame):
        for point in range(m2_frame.n):
            assert frame_join(m2_frame, [point]) == point

    def test_incomparable_pair_joins_to_one(self, m2_frame):
        assert frame_join(m2_frame, [1, 2]) == 3

    def test_everything_joins_to_one(self, m2_frame):
        assert frame_join(m2_frame, list(range(4))) == m2_frame.one

    def test_join_is_least_upper_bound(self):
        for n in range(1, 5):
            for frame in all_lframes(n):
                for a in range(n):
                    for b in range(n):
                        j = frame_join(frame, [a, b])
                        assert frame.le(a, j) and frame.le(b, j)
                        for c in range(n):
                            if frame.le(a, c) and frame.le(b, c):
                                assert frame.le(j, c)
