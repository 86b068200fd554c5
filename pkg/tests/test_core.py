import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import gyrokit as gk
from conftest import corrupt_cell


def test_parse_table_roundtrip(k8):
    text = gk.dump_table(k8)
    again = gk.parse_table(text)
    assert (again.table == k8.table).all()


def test_parse_table_rejects_bad_shape():
    with pytest.raises(gk.TableFormatError):
        gk.parse_table("2\n0 1\n1")


def test_parse_table_rejects_out_of_range():
    with pytest.raises(gk.TableFormatError):
        gk.parse_table("2\n0 1\n1 7")


def test_parse_table_rejects_non_identity_row0():
    with pytest.raises(gk.TableFormatError):
        gk.parse_table("2\n1 0\n0 1")


def test_parse_table_rejects_non_latin():
    # rows are permutations but column 1 repeats
    with pytest.raises(gk.TableFormatError):
        gk.parse_table("3\n0 1 2\n1 2 0\n2 1 0")


def test_comments_and_whitespace_ignored():
    G = gk.parse_table("# comment\n2\n0 1  # trailing\n\n1 0\n")
    assert G.n == 2


def test_apply_identity(k8):
    assert gk.apply(k8, 0, 5) == 5
    assert gk.apply(k8, 5, 0) == 5


def test_apply_twist_pair_product(k8):
    assert gk.apply(k8, 1, 6) == 7


def test_apply_group_inverse(z3):
    assert gk.apply(z3, 1, 2) == 0


def test_apply_out_of_range(k8):
    with pytest.raises(gk.CarrierError):
        gk.apply(k8, 0, 8)


def test_left_inverse_examples(k8, z4):
    assert gk.left_inverse(k8, 0) == 0
    assert gk.left_inverse(k8, 3) == 3          # every element self-inverse
    assert gk.left_inverse(z4, 1) == 3


def test_left_inverse_two_sided(k8):
    for a in range(8):
        b = gk.left_inverse(k8, a)
        assert k8.apply(b, a) == 0 and k8.apply(a, b) == 0


def test_gyr_identity_leg_trivial(k8):
    for b in range(8):
        assert gk.gyr(k8, 0, b).is_identity


def test_gyr_twist_pair_values(k8):
    A = [0, 6, 5, 3, 4, 2, 1, 7]
    assert gk.gyr(k8, 1, 2) == A         # the one nontrivial gyration
    assert gk.gyr(k8, 1, 6).is_identity  # twist pair: trivial in K8 itself


def test_gyr_permutation_helpers(k8):
    p = gk.gyr(k8, 1, 2)
    assert p.compose(p.inverse()).is_identity
    assert p.cycles() == "(1 6)(2 5)"
    assert len(p) == 8


def test_axioms_pass_on_groups_and_k8(z3, z4, q8, k8):
    for G in (z3, z4, q8, k8):
        rep = gk.verify_axioms(G)
        assert rep.passed, rep.summary()


def test_axiom_triples_visited_is_cubed(k8, g24b):
    for G in (k8, g24b):
        rep = gk.verify_axioms(G)
        assert rep.meta["triples_visited"] == G.n ** 3
        assert rep.check("gyroassociativity").count == G.n ** 3


def test_identities_pass(q8, k8, g24b):
    for G in (q8, k8, g24b):
        rep = gk.verify_identities(G)
        assert rep.passed, rep.summary()


def test_gyr_composition_inverse_property(k8):
    gy = k8.gyr_all()
    for a in range(8):
        for b in range(8):
            assert (gy[a, b][gy[b, a]] == np.arange(8)).all()


def test_loop_property_entrywise(k8):
    gy = k8.gyr_all()
    M = k8.table
    for a in range(8):
        for b in range(8):
            assert (gy[M[a, b], b] == gy[a, b]).all()


def test_product_inverse_formula(k8):
    gy = k8.gyr_all()
    inv = k8.inverses()
    M = k8.table
    for a in range(8):
        for b in range(8):
            assert inv[M[a, b]] == gy[a, b][M[inv[b], inv[a]]]


def test_is_group(z4, k8):
    ok, wit = gk.is_group(z4)
    assert ok and wit is None
    ok, wit = gk.is_group(k8)
    assert not ok
    a, b, c = wit
    assert k8.apply(k8.apply(a, b), c) != k8.apply(a, k8.apply(b, c))


def test_is_group_trivial_sigma_product():
    G24a = gk.builtin("G24a")
    ok, wit = gk.is_group(G24a)
    assert not ok and wit is not None


def test_corrupted_table_swap_reported(k8):
    # exchange two entries of one row: left cancellation must break
    table = np.array(k8.table)
    table[3, 1], table[3, 2] = table[3, 2], table[3, 1]
    bad = gk.FiniteGyrogroup(table, strict=False)
    arep = gk.verify_axioms(bad)
    irep = gk.verify_identities(bad)
    assert not (arep.passed and irep.passed)
    failing = [c for c in arep.checks + irep.checks if not c.passed]
    assert any(c.witness for c in failing)


def test_corruption_never_raises(k8):
    bad = corrupt_cell(k8, 4, 5, 0)
    gk.verify_axioms(bad)
    gk.verify_identities(bad)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
def test_single_cell_corruption_always_caught(i, j, v):
    K8 = gk.builtin("K8")
    if K8.table[i, j] == v:
        v = (v + 1) % 8
    bad = corrupt_cell(K8, i, j, v)
    arep = gk.verify_axioms(bad)
    irep = gk.verify_identities(bad)
    assert not (arep.passed and irep.passed)


def test_report_serialization(k8):
    rep = gk.verify_axioms(k8)
    d = rep.to_dict()
    assert d["passed"] is True
    assert {c["name"] for c in d["checks"]} >= {"left_identity", "left_loop_property"}
    assert "PASS" in rep.summary()


def test_labels(q8):
    assert q8.label(2) == "i"
    assert q8.label(7) == "-k"


def test_order_one_and_two():
    one = gk.parse_table("1\n0")
    assert gk.verify_axioms(one).passed
    assert gk.is_group(one)[0]
    two = gk.parse_table("2\n0 1\n1 0")
    assert gk.verify_axioms(two).passed
    assert gk.verify_identities(two).passed


def test_order_64_product_verifies_and_matches_itself():
    z8, k8 = gk.builtin("Z8"), gk.builtin("K8")
    G = gk.semi_cross(z8, k8, gk.trivial_sigma(z8, k8))
    assert G.n == 64
    rep = gk.verify_axioms(G)
    assert rep.passed and rep.meta["triples_visited"] == 64 ** 3
    assert gk.find_isomorphism(G, G) is not None
