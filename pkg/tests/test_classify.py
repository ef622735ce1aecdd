import numpy as np
import pytest

from thetastrata.chars import (
    Characteristic,
    all_characteristics,
    concat,
    parity,
    product_split_tuple,
    split,
)
from thetastrata.classify import (
    _contiguous_split_vanishing_count,
    _one_three_hyperelliptic_count,
    classify,
    classify_from_pattern,
    detect_split,
    vanishing_set,
)
from thetastrata.errors import CapExceededError
from thetastrata.symplectic import act_on_tuple, random_symplectic, tuples_equivalent
from thetastrata.theta import (
    block_diag,
    generic_siegel_point,
    random_siegel_point,
    siegel_action,
    validate_siegel,
)


@pytest.fixture(scope="module")
def block_13():
    rng = np.random.default_rng(101)
    return block_diag(random_siegel_point(1, rng), random_siegel_point(3, rng))


@pytest.fixture(scope="module")
def block_22():
    return block_diag(
        random_siegel_point(2, np.random.default_rng(102)),
        random_siegel_point(2, np.random.default_rng(103)),
    )


@pytest.fixture(scope="module")
def block_112():
    rng = np.random.default_rng(104)
    point = block_diag(random_siegel_point(1, rng), random_siegel_point(1, rng))
    return block_diag(point, random_siegel_point(2, rng))


class TestVanishingSet:
    def test_generic_point_has_none(self):
        rep = vanishing_set(generic_siegel_point(4, 200))
        assert rep.members == ()
        assert rep.margin == float("inf")
        assert not rep.warning

    def test_block_one_three_matches_split_tuple(self):
        blk = block_diag(validate_siegel([[1j]]), random_siegel_point(3, np.random.default_rng(7)))
        rep = vanishing_set(blk, rel_threshold=1e-6)
        assert set(rep.members) == set(product_split_tuple(4, 1))
        assert rep.margin >= 10
        assert not rep.warning

    def test_four_elliptic_union_matches_enumeration(self):
        rng = np.random.default_rng(8)
        point = random_siegel_point(1, rng)
        for _ in range(3):
            point = block_diag(point, random_siegel_point(1, rng))
        rep = vanishing_set(point)
        # oracle: a tensor of four elliptic factors kills exactly the even
        # characteristics with some odd single-column restriction
        expected = set()
        for m in all_characteristics(4, "even"):
            cols = [(m.eps[i], m.delta[i]) for i in range(4)]
            if any(e * d == 1 for e, d in cols):
                expected.add(m)
        assert set(rep.members) == expected
        assert len(expected) == 55

    def test_margin_warning_fires_for_adversarial_threshold(self):
        p = generic_siegel_point(4, 201)
        from thetastrata.theta import even_theta_constants

        mags = sorted(abs(tv.value) for tv in even_theta_constants(p, 1e-12).values())
        scale = mags[-1]
        # place the threshold just above the smallest surviving magnitude
        rep = vanishing_set(p, rel_threshold=(mags[0] / scale) * 1.05)
        assert rep.members and rep.warning and rep.margin < 10


class TestDetectSplit:
    def test_reflexive(self):
        i1 = product_split_tuple(4, 1)
        res = detect_split(list(i1), 1)
        assert res.found
        assert set(res.witness) == set(i1)
        assert tuples_equivalent(res.witness, i1)

    def test_empty_input(self):
        res = detect_split([], 2)
        assert not res.found and res.witness is None

    def test_two_two_block(self, block_22):
        members = vanishing_set(block_22).members
        res = detect_split(members, 2)
        assert res.found
        assert set(res.witness) <= set(members)
        assert tuples_equivalent(res.witness, product_split_tuple(4, 2))
        assert not detect_split(members, 1).found

    def test_one_three_block(self, block_13):
        members = vanishing_set(block_13).members
        assert detect_split(members, 1).found
        assert not detect_split(members, 2).found

    def test_invariant_under_affine_action(self, block_22):
        members = vanishing_set(block_22).members
        from thetastrata.chars import CharTuple

        gamma = random_symplectic(4, 4, 300).mod_two()
        moved = list(act_on_tuple(gamma, CharTuple(4, members)))
        assert detect_split(moved, 2).found
        assert not detect_split(moved, 1).found

    def test_node_budget_raises(self, block_22):
        members = vanishing_set(block_22).members
        with pytest.raises(CapExceededError, match="node budget"):
            detect_split(members, 1, node_budget=50)

    def test_rejects_odd_entries(self):
        with pytest.raises(ValueError, match="odd"):
            detect_split([Characteristic.from_string("1000|1000")], 1)

    def test_bad_k(self):
        with pytest.raises(ValueError, match="k must"):
            detect_split(list(product_split_tuple(4, 1)), 4)


class TestDerivedCounts:
    def test_enumerated_signature_sizes(self):
        assert _contiguous_split_vanishing_count((1, 3)) == 28
        assert _contiguous_split_vanishing_count((2, 2)) == 36
        assert _contiguous_split_vanishing_count((1, 1, 2)) == 46
        assert _contiguous_split_vanishing_count((1, 1, 1, 1)) == 55
        assert _one_three_hyperelliptic_count() == 31

    def test_signatures_match_numerics(self, block_13, block_22, block_112):
        assert len(vanishing_set(block_13)) == 28
        assert len(vanishing_set(block_22)) == 36
        assert len(vanishing_set(block_112)) == 46


class TestClassify:
    def test_generic_is_x0(self):
        for seed in (210, 211, 212):
            rep = classify(generic_siegel_point(4, seed))
            assert rep.label == "X0"
            assert rep.form_magnitudes["FT"] >= rep.threshold

    def test_four_elliptic_is_x6(self):
        rep = classify(validate_siegel(1j * np.eye(4)))
        assert rep.label == "X6"
        assert len(rep.vanishing) == 55
        found = {w.k: w.found for w in rep.splits}
        assert found == {1: True, 2: True}

    def test_one_three_is_x3(self, block_13):
        rep = classify(block_13)
        assert rep.label == "X3"
        assert len(rep.vanishing) == 28

    def test_two_two_is_x4(self, block_22):
        rep = classify(block_22)
        assert rep.label == "X4"
        found = {w.k: w.found for w in rep.splits}
        assert found == {1: False, 2: True}

    def test_one_one_two_is_x5(self, block_112):
        rep = classify(block_112)
        assert rep.label == "X5"
        found = {w.k: w.found for w in rep.splits}
        assert found == {1: True, 2: True}

    def test_conjugation_stability(self, block_22, block_13):
        from thetastrata.chars import CharTuple

        for point, label in ((block_22, "X4"), (block_13, "X3")):
            base = classify(point)
            gamma = random_symplectic(4, 3, 400)
            moved = classify(siegel_action(gamma, point))
            assert moved.label == base.label == label
            expected = set(act_on_tuple(gamma.mod_two(), CharTuple(4, base.vanishing)))
            assert set(moved.vanishing) == expected

    def test_monotone_chain(self, block_13, block_22, block_112):
        reports = [
            classify(generic_siegel_point(4, 220)),
            classify(validate_siegel(1j * np.eye(4))),
            classify(block_13),
            classify(block_22),
            classify(block_112),
        ]
        for rep in reports:
            if rep.label == "X0":
                assert rep.form_magnitudes["FT"] >= rep.threshold
            else:
                assert rep.form_magnitudes["FT"] < rep.threshold
            if rep.label in ("X3", "X4", "X5", "X6"):
                assert rep.form_magnitudes["THETANULL"] < rep.threshold
                assert rep.form_magnitudes["F1"] < rep.threshold
                assert len(rep.vanishing) >= 2

    def test_genus_guard(self):
        with pytest.raises(ValueError, match="genus 4"):
            classify(random_siegel_point(2, np.random.default_rng(0)))

    def test_report_serializes(self, block_13):
        payload = classify(block_13).to_json()
        assert payload["label"] == "X3"
        assert len(payload["vanishing"]) == 28
        assert {w["k"] for w in payload["splits"]} == {1, 2}


class TestClassifyFromPattern:
    def test_x1_and_x2(self):
        assert classify_from_pattern(True, False, False).label == "X1"
        one = list(product_split_tuple(4, 1))[0]
        assert classify_from_pattern(True, True, False, [one]).label == "X2"

    def test_x0(self):
        assert classify_from_pattern(False, False, False).label == "X0"

    def test_hyp4_branch(self):
        evens = all_characteristics(4, "even")
        two = [evens[0], evens[1]]
        rep = classify_from_pattern(True, True, True, two)
        assert rep.label == "X3"
        assert not any(w.found for w in rep.splits)

    def test_product_branch_with_flags(self):
        conj = act_on_tuple(random_symplectic(4, 4, 99).mod_two(), product_split_tuple(4, 1))
        rep = classify_from_pattern(True, True, True, list(conj), {"genus3_hyperelliptic": False})
        assert rep.label == "X3"
        rep4 = classify_from_pattern(True, True, True, list(conj), {"genus3_hyperelliptic": True})
        assert rep4.label == "X4"
        # without the flag the 28-element set resolves by its size
        assert classify_from_pattern(True, True, True, list(conj)).label == "X3"

    def test_full_split_pattern(self):
        members = [
            m for m in all_characteristics(4, "even")
            if any(e * d == 1 for e, d in zip(m.eps, m.delta))
        ]
        assert len(members) == 55
        assert classify_from_pattern(True, True, True, members).label == "X6"

    def test_inconsistent_flags(self):
        with pytest.raises(ValueError, match="theta-null"):
            classify_from_pattern(True, True, False)
        one = list(product_split_tuple(4, 1))[:1]
        with pytest.raises(ValueError, match="F_1"):
            classify_from_pattern(True, True, True, one)
        with pytest.raises(ValueError, match="F_1"):
            classify_from_pattern(True, True, False, list(product_split_tuple(4, 1))[:2])
        with pytest.raises(ValueError, match="odd"):
            classify_from_pattern(True, True, True, [Characteristic.from_string("1|1")] )
