import numpy as np
import pytest

import gyrokit as gk
from conftest import corrupt_cell


def test_extension_invariants_enforced(z3, k8, g24b):
    E = gk.coordinate_extension(z3, k8, g24b)
    assert E.H is z3 and E.K is k8

    bad_beta = np.zeros(24, dtype=int)
    with pytest.raises(gk.ExtensionError):
        gk.Extension(z3, g24b, k8, [0, 8, 16], bad_beta)

    with pytest.raises(gk.ExtensionError):
        gk.Extension(z3, g24b, k8, [0, 8, 8], np.arange(24) % 8)


def test_kernel_must_be_a_group(k8, g24b):
    # K8 itself is not associative, so it cannot be the kernel
    with pytest.raises(gk.ExtensionError):
        gk.coordinate_extension(k8, gk.builtin("Z3"), g24b)


def test_is_group_gyro_extension_true(e24b):
    ok, wit = gk.is_group_gyro_extension(e24b)
    assert ok and wit is None


def test_direct_product_extension_group_gyro(z3, k8):
    G24a = gk.builtin("G24a")
    E = gk.coordinate_extension(z3, k8, G24a)
    assert gk.is_group_gyro_extension(E)[0]


def test_corrupted_extension_not_group_gyro(z3, k8, g24b):
    bad = corrupt_cell(g24b, 9, 3, 5)
    E = gk.coordinate_extension(z3, k8, bad, verify=False)
    ok, wit = gk.is_group_gyro_extension(E)
    assert not ok and wit


def test_enumerate_sections_count(e24b):
    secs = gk.enumerate_sections(e24b)
    assert len(secs) == 3 ** 7
    canon = gk.canonical_section(e24b)
    assert any((s == canon).all() for s in secs)


def test_single_fiber_extension_has_one_section(z3, k8):
    # kernel of size 1: the identity extension of K8 by itself
    one = gk.FiniteGyrogroup([[0]], name="1")
    E = gk.Extension(one, k8, k8, [0], np.arange(8))
    assert len(gk.enumerate_sections(E)) == 1


def test_section_validation(e24b):
    with pytest.raises(gk.ExtensionError):
        gk.check_section(e24b, np.zeros(8, dtype=int) + 3)  # t(0) != 0
    with pytest.raises(gk.ExtensionError):
        gk.check_section(e24b, np.arange(8) + 8)  # beta.t != id


def test_represent_identity_and_section_values(e24b, t24b):
    assert gk.represent(e24b, t24b, 0) == (0, 0)
    for x in range(8):
        assert gk.represent(e24b, t24b, int(t24b[x])) == (0, x)


def test_represent_coordinates(e24b, t24b):
    for g in range(24):
        h, x = gk.represent(e24b, t24b, g)
        assert (h, x) == (g // 8, g % 8)


def test_extract_sigma_examples(e24b, t24b):
    f3 = [0, 2, 1]
    assert (gk.extract_sigma(e24b, t24b, 0) == np.arange(3)).all()
    assert (gk.extract_sigma(e24b, t24b, 7) == f3).all()
    assert (gk.extract_sigma(e24b, t24b, 3) == np.arange(3)).all()


def test_extract_f_trivial_on_canonical_section(e24b, t24b):
    for x in range(8):
        assert gk.extract_f(e24b, t24b, x, 0) == 0
        assert gk.extract_f(e24b, t24b, 0, x) == 0
    for x in range(8):
        for y in range(8):
            assert gk.extract_f(e24b, t24b, x, y) == 0


def test_extract_f_nonzero_for_perturbed_section(e24b, t24b):
    s = t24b.copy()
    s[1] = 1 * 8 + 1  # lift x=1 with kernel part 1
    values = [gk.extract_f(e24b, s, x, y) for x in range(8) for y in range(8)]
    assert any(v != 0 for v in values)
    assert gk.extract_f(e24b, s, 1, 0) == 0  # unit arguments stay trivial


def test_extract_F_unit_arguments(e24b, t24b):
    for x in range(8):
        F = gk.extract_F(e24b, t24b, x, 0)
        assert (F == np.arange(3)[:, None]).all()
        F = gk.extract_F(e24b, t24b, 0, x)
        assert (F == np.arange(3)[:, None]).all()


def test_extract_F_twist_pair(e24b, t24b):
    # product of the pair (1,6) lands on the twisting element
    F = gk.extract_F(e24b, t24b, 1, 6)
    assert (F == np.array([0, 2, 1])[:, None]).all()


def test_extract_F_gyration_pair_trivial_kernel_part(e24b, t24b):
    F = gk.extract_F(e24b, t24b, 1, 2)
    assert (F == np.arange(3)[:, None]).all()


def test_extract_F_formula_agrees_with_readoff(e24b, t24b):
    # fast=False cross-computes; it must not raise anywhere
    for x in range(8):
        for y in range(8):
            gk.extract_F(e24b, t24b, x, y, fast=False)


def test_extract_factor_system_matches_from_sigma(z3, k8, e24b, t24b):
    fs = gk.extract_factor_system(e24b, t24b)
    fs2 = gk.from_sigma(z3, k8, gk.sigma_from_support(z3, k8, {7}))
    assert fs == fs2
    assert gk.validate(fs).passed


def test_extract_factor_system_perturbed_section_still_validates(e24b, t24b):
    s = t24b.copy()
    s[5] = 2 * 8 + 5
    fs = gk.extract_factor_system(e24b, s)
    assert gk.validate(fs).passed
    assert (fs.f != 0).any()


def test_verify_extension_identities(e24b, t24b):
    rep = gk.verify_extension_identities(e24b, t24b)
    assert rep.passed, rep.summary()
    assert rep.check("compatibility_law").count == 3 * 8 ** 3
    assert rep.check("product_decomposition").count == (3 * 8) ** 2


def test_verify_extension_identities_perturbed_section(e24b, t24b):
    s = t24b.copy()
    s[3] = 1 * 8 + 3
    rep = gk.verify_extension_identities(e24b, s)
    assert rep.passed, rep.summary()


def test_extension_identities_on_q8_variant(z3, q8):
    G24q = gk.builtin("G24q")
    E = gk.coordinate_extension(z3, q8, G24q)
    rep = gk.verify_extension_identities(E, gk.canonical_section(E))
    assert rep.passed, rep.summary()


def test_formula_readoff_agreement_on_random_sections():
    """The closed form of F and the read-off from the gyrations must agree
    for arbitrary sections, including ones with heavily nontrivial f."""
    import random
    rng = random.Random(99)
    for hn, kn, gn in [("Z3", "K8", "G24b"), ("Z4", "Q8", "G32q")]:
        H, K, G = gk.builtin(hn), gk.builtin(kn), gk.builtin(gn)
        E = gk.coordinate_extension(H, K, G)
        for _ in range(3):
            t = gk.random_section(E, rng)
            fs = gk.extract_factor_system(E, t, fast=False)
            assert gk.validate(fs).passed


def test_extension_file_roundtrip(tmp_path, z3, k8, g24b, e24b, t24b):
    k8_path = tmp_path / "k8.tbl"
    g_path = tmp_path / "g24b.tbl"
    k8_path.write_text(gk.dump_table(k8))
    g_path.write_text(gk.dump_table(g24b))
    text = gk.write_extension(e24b, str(g_path), str(k8_path), t24b)

    def resolve(ref):
        return gk.load_table(ref)

    E2, t2 = gk.read_extension(text, resolve)
    assert (E2.beta == e24b.beta).all()
    assert (E2.inclusion == e24b.inclusion).all()
    assert (t2 == t24b).all()
    assert E2.H.n == 3
