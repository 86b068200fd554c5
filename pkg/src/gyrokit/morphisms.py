"""Morphisms of extensions and of factor systems.

An extension morphism is a triple of homomorphisms (lambda, mu, nu)
making both squares of the ladder commute.  Fixing sections t1, t2 it
induces a factor-system morphism (nu, g, lambda) where g(x) is the
kernel part of mu(t1(x)) relative to t2; the induced triple satisfies
four compatibility conditions, and composition follows
g3(x) = lambda2(g1(x)) * g2(nu1(x)).  Two sections of one extension are
related the same way through the identity morphism.
"""

from __future__ import annotations

import numpy as np

from .core import FiniteGyrogroup, Report
from .extensions import (Extension, check_section, extract_factor_system,
                         represent, _sigma_table, _f_table, extract_F)
from .factor_systems import FactorSystem


class MorphismError(ValueError):
    """Maps with mismatched domains or broken structure."""


class MorphismConsistencyError(AssertionError):
    """An induced morphism violated a law that valid inputs cannot violate."""


class ExtensionMorphism:
    """Value tables lmb: H1 -> H2, mu: G1 -> G2, nu: K1 -> K2."""

    def __init__(self, lmb, mu, nu):
        self.lmb = np.array(lmb, dtype=np.int64)
        self.mu = np.array(mu, dtype=np.int64)
        self.nu = np.array(nu, dtype=np.int64)

    def __repr__(self):
        return (f"ExtensionMorphism(lambda={self.lmb.tolist()}, "
                f"mu={self.mu.tolist()}, nu={self.nu.tolist()})")


class FactorSystemMorphism:
    """Triple (nu, g, lambda) between two factor systems."""

    def __init__(self, fs_from: FactorSystem, fs_to: FactorSystem, nu, g, lmb):
        self.fs_from = fs_from
        self.fs_to = fs_to
        self.nu = np.array(nu, dtype=np.int64)
        self.g = np.array(g, dtype=np.int64)
        self.lmb = np.array(lmb, dtype=np.int64)
        if self.nu.shape != (fs_from.K.n,):
            raise MorphismError("nu must map the source K")
        if self.g.shape != (fs_from.K.n,):
            raise MorphismError("g must map the source K into the target H")
        if self.lmb.shape != (fs_from.H.n,):
            raise MorphismError("lambda must map the source H")

    def __eq__(self, other):
        return (isinstance(other, FactorSystemMorphism)
                and bool((self.nu == other.nu).all())
                and bool((self.g == other.g).all())
                and bool((self.lmb == other.lmb).all()))

    def __repr__(self):
        return (f"FactorSystemMorphism(nu={self.nu.tolist()}, "
                f"g={self.g.tolist()}, lambda={self.lmb.tolist()})")


def _is_homomorphism(f: np.ndarray, A: FiniteGyrogroup, B: FiniteGyrogroup):
    if f.shape != (A.n,):
        return f"map has {f.shape} values for a carrier of {A.n}"
    if f.min() < 0 or f.max() >= B.n:
        return "map leaves the target carrier"
    if f[0] != 0:
        return "identity is not preserved"
    ok = f[A.table] == B.table[np.ix_(f, f)]
    if not ok.all():
        a, b = np.unravel_index(int(np.argmin(ok)), ok.shape)
        return f"not multiplicative at ({a},{b})"
    return None


def verify_extension_morphism(m: ExtensionMorphism, E1: Extension,
                              E2: Extension) -> tuple[bool, str | None]:
    """Homomorphy of all three maps, gyration preservation by mu, and
    commutativity of both squares, checked exhaustively."""
    for name, f, A, B in (("lambda", m.lmb, E1.H, E2.H),
                          ("mu", m.mu, E1.G, E2.G),
                          ("nu", m.nu, E1.K, E2.K)):
        wit = _is_homomorphism(f, A, B)
        if wit:
            return False, f"{name}: {wit}"
    gy1, gy2 = E1.G.gyr_all(), E2.G.gyr_all()
    mu = m.mu
    for a in range(E1.G.n):
        for b in range(E1.G.n):
            if not (mu[gy1[a, b]] == gy2[mu[a], mu[b]][mu]).all():
                return False, f"mu does not intertwine gyr at ({a},{b})"
    if not (mu[E1.inclusion] == E2.inclusion[m.lmb]).all():
        return False, "inclusion square does not commute"
    if not (E2.beta[mu] == m.nu[E1.beta]).all():
        return False, "projection square does not commute"
    return True, None


def compose_extension_morphisms(m1: ExtensionMorphism,
                                m2: ExtensionMorphism) -> ExtensionMorphism:
    """m2 after m1."""
    return ExtensionMorphism(m2.lmb[m1.lmb], m2.mu[m1.mu], m2.nu[m1.nu])


def identity_extension_morphism(E: Extension) -> ExtensionMorphism:
    return ExtensionMorphism(np.arange(E.H.n), np.arange(E.G.n),
                             np.arange(E.K.n))


def induce_fs_morphism(m: ExtensionMorphism, E1: Extension, E2: Extension,
                       t1, t2) -> FactorSystemMorphism:
    """The factor-system morphism induced by fixing sections on both sides.

    g(x) is the kernel part of mu(t1(x)) relative to t2.  The induced
    triple must satisfy the four compatibility laws tying it to the two
    extracted systems; a violation signals inconsistent inputs and
    raises MorphismConsistencyError.
    """
    ok, wit = verify_extension_morphism(m, E1, E2)
    if not ok:
        raise MorphismError(f"not an extension morphism: {wit}")
    t1 = check_section(E1, t1)
    t2 = check_section(E2, t2)
    fs1 = extract_factor_system(E1, t1, fast=True)
    fs2 = extract_factor_system(E2, t2, fast=True)
    g = np.empty(E1.K.n, dtype=np.int64)
    for x in range(E1.K.n):
        h, kx = represent(E2, t2, int(m.mu[t1[x]]))
        if kx != int(m.nu[x]):
            raise MorphismConsistencyError(
                f"projection of mu(t1({x})) is not nu({x})")
        g[x] = h
    fsm = FactorSystemMorphism(fs1, fs2, m.nu, g, m.lmb)
    ok, wit = verify_fs_morphism(fsm, fs1, fs2)
    if not ok:
        raise MorphismConsistencyError(
            f"induced triple violates the factor-system morphism laws: {wit}")
    return fsm


def verify_fs_morphism(m: FactorSystemMorphism, fs1: FactorSystem,
                       fs2: FactorSystem) -> tuple[bool, str | None]:
    """The four factor-system morphism conditions, exhaustively."""
    H2, K1 = fs2.H, fs1.K
    wit = _is_homomorphism(m.nu, fs1.K, fs2.K)
    if wit:
        return False, f"nu: {wit}"
    wit = _is_homomorphism(m.lmb, fs1.H, fs2.H)
    if wit:
        return False, f"lambda: {wit}"
    HM2 = H2.table
    Hinv2 = H2.inverses()
    nH1, nK1 = fs1.H.n, K1.n
    nu, g, lmb = m.nu, m.g, m.lmb
    S1, f1, F1 = fs1.sigma, fs1.f, fs1.F
    S2, f2, F2 = fs2.sigma, fs2.f, fs2.F
    KM1 = K1.table
    gyK1 = K1.gyr_all()

    if g[0] != 0:
        return False, "g at the identity is nontrivial"

    # lambda(f1(x,y)) g(xy) == g(x) sigma2_{nu(x)}(g(y)) f2(nu(x),nu(y))
    for x in range(nK1):
        for y in range(nK1):
            lhs = int(HM2[lmb[f1[x, y]], g[KM1[x, y]]])
            rhs = int(HM2[g[x], HM2[S2[nu[x]][g[y]], f2[nu[x], nu[y]]]])
            if lhs != rhs:
                return False, f"f-compatibility fails at x={x} y={y}"

    # lambda(sigma1_x(h)) == g(x) sigma2_{nu(x)}(lambda(h)) g(x)^-1
    for x in range(nK1):
        for h in range(nH1):
            lhs = int(lmb[S1[x][h]])
            rhs = int(HM2[HM2[g[x], S2[nu[x]][lmb[h]]], Hinv2[g[x]]])
            if lhs != rhs:
                return False, f"sigma-compatibility fails at x={x} h={h}"

    # F2_(nu x, nu y)(lambda(l) g(z), nu(z)) == lambda(F1_(x,y)(l,z)) g(gyr[x,y](z))
    for x in range(nK1):
        for y in range(nK1):
            for l in range(nH1):
                for z in range(nK1):
                    lhs = int(F2[nu[x], nu[y], HM2[lmb[l], g[z]], nu[z]])
                    rhs = int(HM2[lmb[F1[x, y, l, z]], g[gyK1[x, y, z]]])
                    if lhs != rhs:
                        return False, f"F-compatibility fails at x={x} y={y} l={l} z={z}"
    return True, None


def compose_fs_morphisms(m1: FactorSystemMorphism,
                         m2: FactorSystemMorphism) -> FactorSystemMorphism:
    """m2 after m1, with g3(x) = lambda2(g1(x)) * g2(nu1(x)) in the target H."""
    if m1.fs_to is not m2.fs_from and not (m1.fs_to == m2.fs_from):
        raise MorphismError("codomain of the first morphism is not the "
                            "domain of the second")
    H3 = m2.fs_to.H
    g3 = np.array([int(H3.table[m2.lmb[m1.g[x]], m2.g[m1.nu[x]]])
                   for x in range(m1.fs_from.K.n)], dtype=np.int64)
    out = FactorSystemMorphism(m1.fs_from, m2.fs_to,
                               m2.nu[m1.nu], g3, m2.lmb[m1.lmb])
    ok, wit = verify_fs_morphism(out, m1.fs_from, m2.fs_to)
    if not ok:
        raise MorphismConsistencyError(f"composite morphism fails: {wit}")
    return out


def identity_fs_morphism(fs: FactorSystem) -> FactorSystemMorphism:
    return FactorSystemMorphism(fs, fs, np.arange(fs.K.n),
                                np.zeros(fs.K.n, dtype=np.int64),
                                np.arange(fs.H.n))


def section_change(E: Extension, s, t) -> tuple[np.ndarray, Report]:
    """The comparison map g with s(x) = g(x) + t(x), plus its identity suite.

    The three identities relate the data extracted along s to the data
    extracted along t:
      f_s(x,y) g(xy) == g(x) sigma_t_x(g(y)) f_t(x,y)
      sigma_s_x(h)   == g(x) sigma_t_x(h) g(x)^-1
      F_t_(x,y)(l g(z), z) == F_s_(x,y)(l, z) g(gyr[x,y](z))
    """
    s = check_section(E, s)
    t = check_section(E, t)
    H, K = E.H, E.K
    nH, nK = H.n, K.n
    g = np.empty(nK, dtype=np.int64)
    for x in range(nK):
        h, kx = represent(E, t, int(s[x]))
        if kx != x:
            raise MorphismError("sections do not project identically")
        g[x] = h
    HM = H.table
    Hinv = H.inverses()
    KM = K.table
    gyK = K.gyr_all()
    sig_s, f_s = _sigma_table(E, s), _f_table(E, s)
    sig_t, f_t = _sigma_table(E, t), _f_table(E, t)
    rep = Report(f"section change on {E.G.name}")

    wit, count = None, 0
    for x in range(nK):
        for y in range(nK):
            lhs = int(HM[f_s[x, y], g[KM[x, y]]])
            rhs = int(HM[g[x], HM[sig_t[x][g[y]], f_t[x, y]]])
            count += 1
            if wit is None and lhs != rhs:
                wit = f"x={x} y={y}"
    rep.add("f_comparison", wit is None, wit, count)

    wit, count = None, 0
    for x in range(nK):
        for h in range(nH):
            lhs = int(sig_s[x][h])
            rhs = int(HM[HM[g[x], sig_t[x][h]], Hinv[g[x]]])
            count += 1
            if wit is None and lhs != rhs:
                wit = f"x={x} h={h}"
    rep.add("sigma_comparison", wit is None, wit, count)

    wit, count = None, 0
    for x in range(nK):
        for y in range(nK):
            Fs = extract_F(E, s, x, y, fast=True)
            Ft = extract_F(E, t, x, y, fast=True)
            for l in range(nH):
                for z in range(nK):
                    lhs = int(Ft[HM[l, g[z]], z])
                    rhs = int(HM[Fs[l, z], g[gyK[x, y, z]]])
                    count += 1
                    if wit is None and lhs != rhs:
                        wit = f"x={x} y={y} l={l} z={z}"
    rep.add("F_comparison", wit is None, wit, count)
    return g, rep


def read_extension_morphism(text: str) -> ExtensionMorphism:
    """Parse the three value blocks ``lambda``, ``mu``, ``nu``."""
    blocks: dict[str, list[int]] = {"lambda": [], "mu": [], "nu": []}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in blocks:
            current = line
        elif current is not None:
            blocks[current].extend(int(tok) for tok in line.split())
        else:
            raise MorphismError(f"unexpected line: {raw!r}")
    for name in blocks:
        if not blocks[name]:
            raise MorphismError(f"morphism file is missing the {name} block")
    return ExtensionMorphism(blocks["lambda"], blocks["mu"], blocks["nu"])


def write_extension_morphism(m: ExtensionMorphism) -> str:
    return "\n".join([
        "lambda", " ".join(map(str, m.lmb.tolist())),
        "mu", " ".join(map(str, m.mu.tolist())),
        "nu", " ".join(map(str, m.nu.tolist()))]) + "\n"


def random_section(E: Extension, rng) -> np.ndarray:
    """A uniformly random section drawn with the supplied RNG."""
    fibers = [np.flatnonzero(E.beta == x) for x in range(E.K.n)]
    t = np.array([0] + [int(rng.choice(f)) for f in fibers[1:]], dtype=np.int64)
    return check_section(E, t)
