"""Acceptance suite.

One test per criterion; each prints a single PASS/FAIL line.  Every
check is exact integer arithmetic, so the stated tolerances are
equalities.  Criteria 2 and 4 assert externally reported data verbatim;
parts of that data are internally inconsistent (see the assertions for
the forced values), so those two tests document the discrepancy by
failing honestly rather than asserting weakened claims.
"""

import random
import time

import numpy as np

import gyrokit as gk
from gyrokit.catalog import (K8_XYY_REFERENCE, PAIRS_X, PAIRS_Y,
                             Q8_PAIRS_A_LISTED, Q8_XYY_REFERENCE)
from conftest import corrupt_cell

F3 = [0, 2, 1]
A_K8 = [0, 6, 5, 3, 4, 2, 1, 7]

ROUND_TRIP_PAIRS = [("Z3", "K8", {7}), ("Z4", "K8", {7}),
                    ("Z3", "Q8", {2, 3}), ("Z4", "Q8", {2, 3})]


def conclude(num, name, ok, detail=""):
    verdict = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {num:02d} {name}: {verdict}"
    if detail and not ok:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def gyr_parts(G, x, y):
    """Kernel and factor components of gyr[(0,x),(0,y)] on an order-3n table."""
    p = G.gyr_all()[x, y]
    nK = 8
    hpart = [int(p[l * nK] // nK) for l in range(G.n // nK)]
    kpart = [int(p[z] % nK) for z in range(nK)]
    return hpart, kpart


def test_criterion_01_axiom_suites():
    names = ["Z3", "Z4", "Q8", "K8", "G24a", "G24b", "G24q",
             "G32a", "G32b", "G32q"]
    start = time.perf_counter()
    ok, detail = True, ""
    for name in names:
        G = gk.builtin(name)
        rep = gk.verify_axioms(G)
        if not rep.passed:
            ok, detail = False, f"{name} failed axioms"
            break
        if rep.meta["triples_visited"] != G.n ** 3:
            ok, detail = False, f"{name} did not visit n^3 triples"
            break
    elapsed = time.perf_counter() - start
    if ok and elapsed >= 5.0:
        ok, detail = False, f"took {elapsed:.2f}s"
    conclude(1, "axiom suites on all finite builtins under 5s", ok, detail)


def test_criterion_02_order24_case_split():
    """Gyrations of G24b against the reported three-branch case split:
    (f, I) precisely on X, (I, A) precisely on Y, identity otherwise,
    over all 64 pairs and all 24 arguments.

    The product formula forces the kernel twist f on twelve further
    pairs, those with exactly one coordinate equal to 7: for such a pair
    exactly one of sigma_x, sigma_y, sigma_{(xy)^-1} is the twist, so the
    composite cannot be the identity.  The reported "otherwise" branch
    is therefore unsatisfiable on those pairs and this criterion cannot
    pass as stated; the assertion below documents that.
    """
    G = gk.builtin("G24b")
    got_f, got_a, got_id = set(), set(), set()
    ok = True
    for x in range(8):
        for y in range(8):
            hpart, kpart = gyr_parts(G, x, y)
            if hpart == F3 and kpart == list(range(8)):
                got_f.add((x, y))
            elif hpart == [0, 1, 2] and kpart == A_K8:
                got_a.add((x, y))
            elif hpart == [0, 1, 2] and kpart == list(range(8)):
                got_id.add((x, y))
            else:
                ok = False
    # gyrations must not depend on the kernel coordinates
    gy = G.gyr_all()
    for x in range(8):
        for y in range(8):
            for h in range(3):
                for k in range(3):
                    if not (gy[h * 8 + x, k * 8 + y] == gy[x, y]).all():
                        ok = False
    ok = ok and got_f == set(PAIRS_X) and got_a == set(PAIRS_Y) \
        and got_id == set((x, y) for x in range(8) for y in range(8)) \
        - set(PAIRS_X) - set(PAIRS_Y)
    extra = sorted(got_f - set(PAIRS_X))
    conclude(2, "order-24 gyration case split matches the report verbatim", ok,
             f"kernel twist also on {extra}")


def test_criterion_03_q8_variant():
    G = gk.builtin("G24q")
    q8 = gk.builtin("Q8")
    twist = {(x, y) for x in range(8) for y in range(8)
             if ((x in (2, 3)) + (y in (2, 3))
                 + (int(q8.table[x, y]) in (2, 3))) % 2 == 1}
    ok = len(twist) == 24 and Q8_PAIRS_A_LISTED <= twist
    got_f, got_id = set(), set()
    for x in range(8):
        for y in range(8):
            hpart, kpart = gyr_parts(G, x, y)
            if kpart != list(range(8)):
                ok = False
            if hpart == F3:
                got_f.add((x, y))
            elif hpart == [0, 1, 2]:
                got_id.add((x, y))
            else:
                ok = False
    ok = ok and got_f == twist and len(got_id) == 64 - 24
    ok = ok and (gk.xyy_table(q8) == Q8_XYY_REFERENCE).all()
    conclude(3, "quaternion variant: gyr exactly on the 24-pair set, "
                "squared-translation table exact", ok)


def test_criterion_04_k8_reconciliation():
    """The reconstructed K8 against the reported squared-translation table.

    Claimed: agreement on 63 of 64 cells with (7,3) the only discrepancy.
    The diagonal of (x+y)+y is forced to the identity by self-inverse
    elements, so the reported value 1 at (2,2) is also unsatisfiable and
    the true agreement is 62 of 64.  The sigma admissibility half holds.
    """
    K8 = gk.builtin("K8")
    _, diffs = gk.compare_xyy_reference(K8, K8_XYY_REFERENCE)
    cells = {(x, y) for (x, y, _, _) in diffs}
    sigma_ok = gk.validate_sigma(gk.builtin("Z3"), K8,
                                 gk.sigma_from_support(gk.builtin("Z3"), K8, {7})).passed
    ok = sigma_ok and len(diffs) == 1 and cells == {(7, 3)}
    conclude(4, "K8 squared-translation table: 63 of 64 cells, single "
                "discrepancy at (7,3); twist map admissible", ok,
             f"agreement on {64 - len(diffs)} of 64, discrepant cells {sorted(cells)}")


def _criterion5_systems():
    out = []
    for hname, kname, support in ROUND_TRIP_PAIRS:
        H, K = gk.builtin(hname), gk.builtin(kname)
        out.append((H, K, gk.trivial_factor_system(H, K)))
        out.append((H, K, gk.from_sigma(H, K, gk.sigma_from_support(H, K, support))))
    return out


def test_criterion_05_factor_system_round_trips():
    ok, detail = True, ""
    for H, K, fs in _criterion5_systems():
        G, E, t = gk.build_extension(fs)      # raises if extract.build != id
        back = gk.extract_factor_system(E, t)
        if not (back == fs):
            ok, detail = False, f"extract.build not identity over {H.name},{K.name}"
            break
        G2, _, _ = gk.build_extension(back)
        phi = np.array([int(G.table[E.inclusion[h], t[x]])
                        for h in range(H.n) for x in range(K.n)])
        entrywise = all(
            int(phi[G2.table[u, v]]) == int(G.table[phi[u], phi[v]])
            for u in range(G.n) for v in range(G.n))
        if not entrywise:
            ok, detail = False, f"rebuild not isomorphic over {H.name},{K.name}"
            break
    conclude(5, "extract.build and build.extract round trips on all four "
                "kernel/factor pairs", ok, detail)


def test_criterion_06_identity_suites():
    ok, detail = True, ""
    for H, K, fs in _criterion5_systems():
        G, E, t = gk.build_extension(fs)
        rep = gk.verify_extension_identities(E, t)
        if not rep.passed:
            ok, detail = False, f"{G.name}: {rep.summary()}"
            break
        rep = gk.verify_identities(G)
        if not rep.passed:
            ok, detail = False, f"{G.name} identity suite"
            break
    conclude(6, "extension and six-identity suites on every round-trip "
                "extension", ok, detail)


def test_criterion_07_morphism_functoriality():
    z3, z4, k8 = gk.builtin("Z3"), gk.builtin("Z4"), gk.builtin("K8")
    E1 = gk.coordinate_extension(z3, k8, gk.builtin("G24b"))
    E3 = gk.coordinate_extension(z4, k8, gk.builtin("G32b"))
    f3 = np.array(F3)
    mu_f = np.array([int(f3[g // 8]) * 8 + g % 8 for g in range(24)])
    m1 = gk.ExtensionMorphism(f3, mu_f, np.arange(8))
    m2 = gk.ExtensionMorphism(np.zeros(3, dtype=int),
                              np.array([g % 8 for g in range(24)]),
                              np.arange(8))
    t1 = gk.canonical_section(E1)
    t2 = t1.copy()
    t2[3] = 2 * 8 + 3
    t3 = gk.canonical_section(E3)
    t3[5] = 1 * 8 + 5
    ok = gk.verify_extension_morphism(m1, E1, E1)[0]
    ok = ok and gk.verify_extension_morphism(m2, E1, E3)[0]
    f1 = gk.induce_fs_morphism(m1, E1, E1, t1, t2)
    f2 = gk.induce_fs_morphism(m2, E1, E3, t2, t3)
    f21 = gk.induce_fs_morphism(gk.compose_extension_morphisms(m1, m2),
                                E1, E3, t1, t3)
    ok = ok and gk.compose_fs_morphisms(f1, f2) == f21
    for fm in (f1, f2, f21):
        good, wit = gk.verify_fs_morphism(fm, fm.fs_from, fm.fs_to)
        ok = ok and good
    conclude(7, "functoriality of induced morphisms on a three-object chain",
             ok)


def test_criterion_08_section_change():
    z3, k8 = gk.builtin("Z3"), gk.builtin("K8")
    E = gk.coordinate_extension(z3, k8, gk.builtin("G24b"))
    rng = random.Random(2008)
    ok, detail = True, ""
    for trial in range(20):
        s = gk.random_section(E, rng)
        t = gk.random_section(E, rng)
        _, rep = gk.section_change(E, s, t)
        if not rep.passed:
            ok, detail = False, f"trial {trial}: {rep.summary()}"
            break
    conclude(8, "section-change identities for 20 seeded random section "
                "pairs (seed 2008)", ok, detail)


def test_criterion_09_sigma_enumeration():
    z3 = gk.builtin("Z3")
    ok, detail = True, ""
    for kname, twist_support in (("Q8", (2, 3)), ("K8", (7,))):
        K = gk.builtin(kname)
        res = gk.enumerate_sigmas(z3, K)
        supports = {tuple(sorted(np.flatnonzero(m.values[:, 1] != 1).tolist()))
                    for m in res.maps}
        if res.candidate_count != 256:
            ok, detail = False, f"{kname}: {res.candidate_count} candidates"
        elif () not in supports or twist_support not in supports:
            ok, detail = False, f"{kname}: expected maps missing"
        elif not res.simplified_applicable or res.simplified_count != res.raw_count:
            ok, detail = False, f"{kname}: count mismatch"
    conclude(9, "sigma enumeration filters 256 candidates, contains both "
                "reported maps, raw equals simplified count", ok, detail)


def test_criterion_10_split_detection():
    ok, detail = True, ""
    for name, hname, kname in [("G24a", "Z3", "K8"), ("G24b", "Z3", "K8"),
                               ("G24q", "Z3", "Q8"), ("G32a", "Z4", "K8"),
                               ("G32b", "Z4", "K8"), ("G32q", "Z4", "Q8")]:
        H, K = gk.builtin(hname), gk.builtin(kname)
        E = gk.coordinate_extension(H, K, gk.builtin(name))
        t = gk.is_split(E)
        if t is None:
            ok, detail = False, f"{name}: no splitting found"
            break
        f = np.array([[gk.extract_f(E, t, x, y) for y in range(8)]
                      for x in range(8)])
        if (f != 0).any():
            ok, detail = False, f"{name}: extracted f not trivial"
            break
    conclude(10, "every semi cross product detected split with trivial f",
             ok, detail)


def test_criterion_11_infinite_examples():
    start = time.perf_counter()
    ok, detail = True, ""
    for name in ("Ginf_a", "Ginf_b", "Ginf_q"):
        rep = gk.verify_axioms(gk.builtin(name), window=50)
        if not rep.passed:
            ok, detail = False, f"{name} failed"
            break
        if rep.meta["window_size"] != 101 * 8:
            ok, detail = False, f"{name}: wrong window"
            break
    elapsed = time.perf_counter() - start
    if ok and elapsed >= 10.0:
        ok, detail = False, f"took {elapsed:.2f}s"
    conclude(11, "windowed axiom checks on the integer products "
                 "(|m| <= 50) under 10s", ok, detail)


def test_criterion_12_mutation_sensitivity():
    G = gk.builtin("G24b")
    rng = random.Random(1212)
    ok, detail = True, ""
    for trial in range(20):
        i, j = rng.randrange(24), rng.randrange(24)
        v = rng.randrange(24)
        if v == int(G.table[i, j]):
            v = (v + 1) % 24
        bad = corrupt_cell(G, i, j, v)
        caught = not gk.verify_axioms(bad).passed \
            or not gk.verify_identities(bad).passed
        if not caught:
            ok, detail = False, f"corruption {trial} at ({i},{j})->{v} missed"
            break
    conclude(12, "20 seeded single-cell corruptions all caught (seed 1212)",
             ok, detail)
