"""Short exact sequences of gyrogroups with a group kernel.

An extension is a sequence H -> G -> K with H a group embedded as the
kernel of a surjection beta: G -> K.  It is kernel-inert when every
gyration gyr[h, g] with h in the embedded kernel is trivial; under that
condition every g factors uniquely as g = h + t(x) for any section t,
and the section data unpacks into three maps:

  sigma_x(h) = (t(x) + h) + t(x)^-1        an automorphism of H per x
  f(x, y)    = kernel part of t(x) + t(y)  so t(x)+t(y) = f(x,y)+t(xy)
  F_(x,y)(l, z)                            the kernel part of
               gyr[h t(x), k t(y)](l t(z)), independent of h and k

F is computed two ways, from a closed formula in sigma and f and read
directly off the gyrations of G, and both must agree.
"""

from __future__ import annotations

import itertools

import numpy as np

from .core import FiniteGyrogroup, Report
from . import structure


class ExtensionError(ValueError):
    """The supplied maps do not form an extension."""


class RepresentationError(ValueError):
    """An element does not factor uniquely through the section."""


class Extension:
    """(H, G, K, inclusion, beta) with all invariants verified on build.

    `verify=False` skips the invariant checks; that exists only so
    deliberately broken data can be fed to the diagnostic predicates.
    """

    def __init__(self, H: FiniteGyrogroup, G: FiniteGyrogroup,
                 K: FiniteGyrogroup, inclusion, beta, verify: bool = True):
        self.H, self.G, self.K = H, G, K
        self.inclusion = np.array(inclusion, dtype=np.int64)
        self.beta = np.array(beta, dtype=np.int64)
        if self.inclusion.shape != (H.n,):
            raise ExtensionError("inclusion must list one image per H element")
        if self.beta.shape != (G.n,):
            raise ExtensionError("beta must list one image per G element")
        if verify:
            self._verify()
        self._h_of_g = {int(g): h for h, g in enumerate(self.inclusion)}

    def _verify(self):
        H, G, K, i, beta = self.H, self.G, self.K, self.inclusion, self.beta
        if len(set(i.tolist())) != H.n:
            raise ExtensionError("inclusion is not injective")
        if i[0] != 0:
            raise ExtensionError("inclusion must send identity to identity")
        grp, wit = _is_group_table(H)
        if not grp:
            raise ExtensionError(f"kernel is not a group: non-associative at {wit}")
        for a in range(H.n):
            for b in range(H.n):
                if i[H.table[a, b]] != G.table[i[a], i[b]]:
                    raise ExtensionError(f"inclusion not a homomorphism at ({a},{b})")
        if set(beta.tolist()) != set(range(K.n)):
            raise ExtensionError("beta is not surjective")
        BT = beta[G.table]
        if not (BT == K.table[np.ix_(beta, beta)]).all():
            raise ExtensionError("beta is not a homomorphism")
        kernel = sorted(int(g) for g in np.flatnonzero(beta == 0))
        if kernel != sorted(int(g) for g in i):
            raise ExtensionError("image of the inclusion differs from ker(beta)")
        nrep = structure.is_normal(G, kernel)
        if not nrep.passed:
            raise ExtensionError(f"kernel is not normal:\n{nrep.summary()}")

    def h_index(self, g: int) -> int:
        """H-index of an element of the embedded kernel."""
        try:
            return self._h_of_g[int(g)]
        except KeyError:
            raise RepresentationError(f"{g} is not in the embedded kernel") from None

    def __repr__(self):
        return f"Extension({self.H.name} -> {self.G.name} -> {self.K.name})"


def _is_group_table(H: FiniteGyrogroup):
    M = H.table
    for a in range(H.n):
        for b in range(H.n):
            for c in range(H.n):
                if M[M[a, b], c] != M[a, M[b, c]]:
                    return False, (a, b, c)
    return True, None


def coordinate_extension(H: FiniteGyrogroup, K: FiniteGyrogroup,
                         G: FiniteGyrogroup, verify: bool = True) -> Extension:
    """Extension around a product table indexed by (h, x) -> h*|K| + x."""
    if G.n != H.n * K.n:
        raise ExtensionError("carrier size must be |H| * |K|")
    incl = np.arange(H.n) * K.n
    beta = np.arange(G.n) % K.n
    return Extension(H, G, K, incl, beta, verify=verify)


def read_extension(text: str, resolve) -> tuple[Extension, np.ndarray | None]:
    """Parse an extension file.

    Lines: ``G <ref>``, ``K <ref>``, a ``beta`` block of |G| integers,
    and an optional ``section`` block of |K| integers.  `resolve` maps a
    builtin name or table path to a structure.  The kernel H is derived
    from ker(beta) with its induced table.
    """
    g_ref = k_ref = None
    section_name = None
    blocks: dict[str, list[int]] = {"beta": [], "section": []}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "G" and section_name is None:
            g_ref = line.split(None, 1)[1].strip()
        elif head == "K" and section_name is None:
            k_ref = line.split(None, 1)[1].strip()
        elif line in ("beta", "section"):
            section_name = line
        elif section_name is not None:
            blocks[section_name].extend(int(tok) for tok in line.split())
        else:
            raise ExtensionError(f"unexpected line: {raw!r}")
    if g_ref is None or k_ref is None:
        raise ExtensionError("extension file must name G and K")
    G, K = resolve(g_ref), resolve(k_ref)
    beta = np.array(blocks["beta"], dtype=np.int64)
    if beta.shape != (G.n,):
        raise ExtensionError(f"beta must have {G.n} entries, got {len(beta)}")
    kernel = sorted(int(g) for g in np.flatnonzero(beta == 0))
    hidx = {g: i for i, g in enumerate(kernel)}
    try:
        H = FiniteGyrogroup(
            [[hidx[int(G.table[a, b])] for b in kernel] for a in kernel],
            name="ker", strict=False)
    except KeyError:
        raise ExtensionError("ker(beta) is not closed under the product") from None
    E = Extension(H, G, K, np.array(kernel, dtype=np.int64), beta)
    t = None
    if blocks["section"]:
        t = check_section(E, np.array(blocks["section"], dtype=np.int64))
    return E, t


def write_extension(E: Extension, g_ref: str, k_ref: str, t=None) -> str:
    lines = [f"G {g_ref}", f"K {k_ref}", "beta",
             " ".join(str(int(v)) for v in E.beta)]
    if t is not None:
        lines += ["section", " ".join(str(int(v)) for v in t)]
    return "\n".join(lines) + "\n"


def check_section(E: Extension, t) -> np.ndarray:
    t = np.array(t, dtype=np.int64)
    if t.shape != (E.K.n,):
        raise ExtensionError("section must list one G element per K element")
    if t[0] != 0:
        raise ExtensionError("section must send identity to identity")
    if not (E.beta[t] == np.arange(E.K.n)).all():
        raise ExtensionError("beta . t is not the identity on K")
    return t


def canonical_section(E: Extension) -> np.ndarray:
    """For each x the minimal preimage; equals x itself on coordinate extensions."""
    t = np.array([int(np.flatnonzero(E.beta == x)[0]) for x in range(E.K.n)])
    return check_section(E, t)


def enumerate_sections(E: Extension):
    """All sections; there are |H|^(|K|-1) of them."""
    fibers = [np.flatnonzero(E.beta == x) for x in range(E.K.n)]
    out = []
    for tail in itertools.product(*(f.tolist() for f in fibers[1:])):
        out.append(np.array((0,) + tail, dtype=np.int64))
    return out


def is_group_gyro_extension(E: Extension) -> tuple[bool, str | None]:
    """Whether every gyration with one leg in the kernel is trivial."""
    gy = E.G.gyr_all()
    idn = np.arange(E.G.n)
    for h in E.inclusion:
        for g in range(E.G.n):
            if not (gy[h, g] == idn).all():
                return False, f"gyr[{int(h)},{g}] nontrivial"
            if not (gy[g, h] == idn).all():
                return False, f"gyr[{g},{int(h)}] nontrivial"
    return True, None


def _require_kernel_inert(E: Extension):
    ok, wit = is_group_gyro_extension(E)
    if not ok:
        raise ExtensionError(f"extension is not kernel-inert: {wit}")


def represent(E: Extension, t, g: int) -> tuple[int, int]:
    """Factor g as (h, x) with x = beta(g).

    Kernel-inert extensions give g = i(h) + t(x); in general the
    factorization reads g = gyr[t(x), i(h)](i(h) + t(x)).  Uniqueness is
    verified by scanning every h.
    """
    t = check_section(E, t)
    G = E.G
    x = int(E.beta[g])
    gy = G.gyr_all()
    M = G.table
    hits = []
    for h in range(E.H.n):
        ih = int(E.inclusion[h])
        if gy[t[x], ih][M[ih, t[x]]] == g:
            hits.append(h)
    if len(hits) != 1:
        raise RepresentationError(
            f"element {g} has {len(hits)} factorizations through the section")
    return hits[0], x


def extract_sigma(E: Extension, t, x: int) -> np.ndarray:
    """The automorphism h -> (t(x) + h) + t(x)^-1 of H, as a permutation."""
    t = check_section(E, t)
    _require_kernel_inert(E)
    G, H = E.G, E.H
    M = G.table
    inv = G.inverses()
    out = np.empty(H.n, dtype=np.int64)
    for h in range(H.n):
        val = int(M[M[t[x], E.inclusion[h]], inv[t[x]]])
        out[h] = E.h_index(val)
    if not H.is_automorphism(out):
        raise ExtensionError(f"conjugation by t({x}) is not an automorphism of H")
    return out


def extract_f(E: Extension, t, x: int, y: int) -> int:
    """The unique h with t(x) + t(y) = i(h) + t(x y)."""
    t = check_section(E, t)
    _require_kernel_inert(E)
    G = E.G
    prod = int(G.table[t[x], t[y]])
    h, xy = represent(E, t, prod)
    if xy != int(E.K.table[x, y]):
        raise ExtensionError("projection of t(x)+t(y) is not x+y")
    return h


def _sigma_table(E, t):
    return np.array([extract_sigma(E, t, x) for x in range(E.K.n)])


def _f_table(E, t):
    return np.array([[extract_f(E, t, x, y) for y in range(E.K.n)]
                     for x in range(E.K.n)], dtype=np.int64)


def extract_F(E: Extension, t, x: int, y: int, fast: bool = False,
              _sig=None, _f=None) -> np.ndarray:
    """The (|H|, |K|) table of kernel parts of gyr[h t(x), k t(y)](l t(z)).

    Read off the gyrations of G and checked to be independent of h and
    k; unless `fast` is set the closed formula in sigma and f is
    evaluated as well and both computations must agree.
    """
    t = check_section(E, t)
    _require_kernel_inert(E)
    G, H, K = E.G, E.H, E.K
    M, gy = G.table, G.gyr_all()
    nH, nK = H.n, K.n

    base = gy[t[x], t[y]]
    for h in range(nH):
        for k in range(nH):
            a = int(M[E.inclusion[h], t[x]])
            b = int(M[E.inclusion[k], t[y]])
            if not (gy[a, b] == base).all():
                raise ExtensionError(
                    f"gyration at ({x},{y}) depends on the kernel parts h={h}, k={k}")

    gyK = K.gyr_all()
    out = np.empty((nH, nK), dtype=np.int64)
    for l in range(nH):
        for z in range(nK):
            val = int(base[M[E.inclusion[l], t[z]]])
            hpart, kpart = represent(E, t, val)
            if kpart != int(gyK[x, y, z]):
                raise ExtensionError(
                    f"gyration factor part at ({x},{y},{l},{z}) mismatches gyr_K")
            out[l, z] = hpart

    if not fast:
        sig = _sig if _sig is not None else _sigma_table(E, t)
        f = _f if _f is not None else _f_table(E, t)
        formula = _F_formula(E, sig, f, x, y)
        if not (formula == out).all():
            raise ExtensionError(
                f"closed formula and read-off for F at ({x},{y}) disagree")
    return out


def _F_formula(E: Extension, sig, f, x: int, y: int) -> np.ndarray:
    """Closed form of F_(x,y) in sigma and f.

    F(l,z) = f((xy)^-1, xy)^-1
             . sigma_{(xy)^-1}( f(x,y)^-1 sigma_x(sigma_y(l) f(y,z)) f(x,yz) )
             . f((xy)^-1, x(yz))
    with all products taken inside the group H.
    """
    H, K = E.H, E.K
    HM = H.table
    Hinv = H.inverses()
    KM = K.table
    Kinv = K.inverses()
    nH, nK = H.n, K.n
    xy = int(KM[x, y])
    xyi = int(Kinv[xy])
    lead = int(Hinv[f[xyi, xy]])
    out = np.empty((nH, nK), dtype=np.int64)
    for l in range(nH):
        for z in range(nK):
            yz = int(KM[y, z])
            xyz = int(KM[x, yz])
            inner = int(HM[sig[y][l], f[y, z]])
            inner = int(HM[Hinv[f[x, y]], HM[sig[x][inner], f[x, yz]]])
            val = int(HM[lead, HM[sig[xyi][inner], f[xyi, xyz]]])
            out[l, z] = val
    return out


def extract_factor_system(E: Extension, t, fast: bool = False):
    """Bundle (sigma, f, F) extracted along the section into a factor system."""
    from .factor_systems import FactorSystem

    t = check_section(E, t)
    _require_kernel_inert(E)
    sig = _sigma_table(E, t)
    f = _f_table(E, t)
    nK = E.K.n
    F = np.empty((nK, nK, E.H.n, nK), dtype=np.int64)
    for x in range(nK):
        for y in range(nK):
            F[x, y] = extract_F(E, t, x, y, fast=fast, _sig=sig, _f=f)
    return FactorSystem(E.H, E.K, sig, f, F)


def verify_extension_identities(E: Extension, t) -> Report:
    """Exhaustive identity suite along a section of a kernel-inert extension.

    Covers the product decomposition law, the section-inverse formula,
    the compatibility law tying sigma, f and F together, the four
    kernel-inertness consequences, and the three structural properties
    of F (unit arguments, multiplicativity, invariance under the loop
    shift).
    """
    t = check_section(E, t)
    _require_kernel_inert(E)
    G, H, K = E.G, E.H, E.K
    M = G.table
    inv = G.inverses()
    HM, Hinv = H.table, H.inverses()
    KM, Kinv = K.table, K.inverses()
    nH, nK = H.n, K.n
    i = E.inclusion
    gy = G.gyr_all()
    gyK = K.gyr_all()
    sig = _sigma_table(E, t)
    f = _f_table(E, t)
    F = np.empty((nK, nK, nH, nK), dtype=np.int64)
    for x in range(nK):
        for y in range(nK):
            F[x, y] = extract_F(E, t, x, y, fast=True)
    rep = Report(f"extension identities of {G.name}")

    # (h t(x)) (k t(y)) == (h sigma_x(k) f(x,y)) t(xy)
    wit, count = None, 0
    for h in range(nH):
        for x in range(nK):
            left_part = int(M[i[h], t[x]])
            for k in range(nH):
                for y in range(nK):
                    lhs = int(M[left_part, M[i[k], t[y]]])
                    hh = int(HM[h, HM[sig[x][k], f[x, y]]])
                    rhs = int(M[i[hh], t[KM[x, y]]])
                    count += 1
                    if wit is None and lhs != rhs:
                        wit = f"h={h} x={x} k={k} y={y}"
    rep.add("product_decomposition", wit is None, wit, count)

    # t(x)^-1 == f(x^-1, x)^-1 t(x^-1)
    wit = None
    for x in range(nK):
        xi = int(Kinv[x])
        rhs = int(M[i[Hinv[f[xi, x]]], t[xi]])
        if wit is None and int(inv[t[x]]) != rhs:
            wit = f"x={x}"
    rep.add("section_inverse_formula", wit is None, wit, nK)

    # sigma_x(sigma_y(l) f(y,z)) f(x,yz) ==
    #   f(x,y) sigma_{xy}(F_(x,y)(l,z)) f(xy, gyr[x,y](z))
    wit, count = None, 0
    for l in range(nH):
        for x in range(nK):
            for y in range(nK):
                xy = int(KM[x, y])
                for z in range(nK):
                    lhs = int(HM[sig[x][HM[sig[y][l], f[y, z]]], f[x, KM[y, z]]])
                    rhs = int(HM[f[x, y], HM[sig[xy][F[x, y, l, z]],
                                             f[xy, gyK[x, y, z]]]])
                    count += 1
                    if wit is None and lhs != rhs:
                        wit = f"l={l} x={x} y={y} z={z}"
    rep.add("compatibility_law", wit is None, wit, count)

    # kernel-inertness consequences
    wit, count = None, 0
    for x in range(nK):
        seen = {}
        for h in range(nH):
            v = int(M[i[h], t[x]])
            if wit is None and v in seen:
                wit = f"h={seen[v]} and h'={h} at x={x}"
            seen[v] = h
            count += 1
    rep.add("kernel_part_cancellation", wit is None, wit, count)

    wit, count = None, 0
    for x in range(nK):
        xi = int(Kinv[x])
        sx_inv = np.empty(nH, dtype=np.int64)
        sx_inv[sig[x]] = np.arange(nH)
        for h in range(nH):
            rhs = int(HM[Hinv[f[xi, x]], HM[sig[xi][h], f[xi, x]]])
            count += 1
            if wit is None and int(sx_inv[h]) != rhs:
                wit = f"x={x} h={h}"
    rep.add("sigma_inverse_conjugation", wit is None, wit, count)

    wit = None
    for x in range(nK):
        xi = int(Kinv[x])
        val = int(HM[sig[x][Hinv[f[xi, x]]], f[x, xi]])
        if wit is None and val != 0:
            wit = f"x={x}"
    rep.add("sigma_f_inverse_unit", wit is None, wit, nK)

    idn = np.arange(G.n)
    wit, count = None, 0
    for x in range(nK):
        for h in range(nH):
            a = int(M[t[x], i[h]])
            count += 1
            if wit is None and not (gy[a, inv[t[x]]] == idn).all():
                wit = f"x={x} h={h}"
    rep.add("section_conjugate_gyration_trivial", wit is None, wit, count)

    # F with a unit argument is the identity on the kernel part
    wit, count = None, 0
    for x in range(nK):
        for l in range(nH):
            for z in range(nK):
                count += 2
                if wit is None and (F[x, 0, l, z] != l or F[0, x, l, z] != l):
                    wit = f"x={x} l={l} z={z}"
    rep.add("F_unit_arguments", wit is None, wit, count)

    # F_(x,y)(l1 sigma_{z1}(l2) f(z1,z2), z1 z2) ==
    #   F(l1,z1) sigma_{gyr[x,y](z1)}(F(l2,z2)) f(gyr[x,y](z1), gyr[x,y](z2))
    wit, count = None, 0
    for x in range(nK):
        for y in range(nK):
            g = gyK[x, y]
            for l1 in range(nH):
                for z1 in range(nK):
                    for l2 in range(nH):
                        for z2 in range(nK):
                            arg = int(HM[l1, HM[sig[z1][l2], f[z1, z2]]])
                            lhs = int(F[x, y, arg, KM[z1, z2]])
                            rhs = int(HM[F[x, y, l1, z1],
                                         HM[sig[g[z1]][F[x, y, l2, z2]],
                                            f[g[z1], g[z2]]]])
                            count += 1
                            if wit is None and lhs != rhs:
                                wit = f"x={x} y={y} l1={l1} z1={z1} l2={l2} z2={z2}"
    rep.add("F_multiplicativity", wit is None, wit, count)

    wit, count = None, 0
    for x in range(nK):
        for y in range(nK):
            count += 1
            if wit is None and not (F[KM[x, y], y] == F[x, y]).all():
                wit = f"x={x} y={y}"
    rep.add("F_loop_shift", wit is None, wit, count)
    return rep
