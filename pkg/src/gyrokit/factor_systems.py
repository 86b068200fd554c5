"""Factor systems (K, H, sigma, f, F) and the extension each one builds.

The six defining conditions are validated exhaustively.  `build_extension`
realizes a validated system on the carrier H x K with the product
(a,x)(b,y) = (a sigma_x(b) f(x,y), xy), then re-verifies everything: the
axioms, the claimed gyration formula against the gyrations read off the
table, and that extracting along the canonical section returns the
input system exactly.
"""

from __future__ import annotations

import numpy as np

from .core import FiniteGyrogroup, Report, RuleGyrogroup, verify_axioms
from . import extensions as ext
from . import semicross


class ConsistencyError(AssertionError):
    """A cross-check that should be unreachable for validated input failed."""


class FactorSystem:
    """Dense tables: sigma (nK, nH), f (nK, nK), F (nK, nK, nH, nK)."""

    def __init__(self, H: FiniteGyrogroup, K: FiniteGyrogroup, sigma, f, F):
        self.H, self.K = H, K
        self.sigma = np.array(sigma, dtype=np.int64)
        self.f = np.array(f, dtype=np.int64)
        self.F = np.array(F, dtype=np.int64)
        nH, nK = H.n, K.n
        if self.sigma.shape != (nK, nH):
            raise ValueError(f"sigma must have shape {(nK, nH)}")
        if self.f.shape != (nK, nK):
            raise ValueError(f"f must have shape {(nK, nK)}")
        if self.F.shape != (nK, nK, nH, nK):
            raise ValueError(f"F must have shape {(nK, nK, nH, nK)}")
        for name, arr, hi in (("sigma", self.sigma, nH), ("f", self.f, nH),
                              ("F", self.F, nH)):
            if arr.min() < 0 or arr.max() >= hi:
                raise ValueError(f"{name} values must be H indices")

    def __eq__(self, other):
        return (isinstance(other, FactorSystem)
                and self.sigma.shape == other.sigma.shape
                and self.f.shape == other.f.shape
                and self.F.shape == other.F.shape
                and bool((self.sigma == other.sigma).all())
                and bool((self.f == other.f).all())
                and bool((self.F == other.F).all()))

    def __repr__(self):
        return f"FactorSystem({self.H.name}, {self.K.name})"


def trivial_factor_system(H, K: FiniteGyrogroup):
    """sigma trivial, f at the identity, F the projection onto its kernel slot."""
    if isinstance(H, RuleGyrogroup):
        return IntegerFactorSystem(K, np.ones(K.n, dtype=np.int64),
                                   np.zeros((K.n, K.n), dtype=np.int64),
                                   np.ones((K.n, K.n), dtype=np.int64))
    nH, nK = H.n, K.n
    sigma = np.tile(np.arange(nH), (nK, 1))
    f = np.zeros((nK, nK), dtype=np.int64)
    F = np.broadcast_to(np.arange(nH)[None, None, :, None],
                        (nK, nK, nH, nK)).copy()
    return FactorSystem(H, K, sigma, f, F)


def from_sigma(H, K: FiniteGyrogroup, sigma) -> "FactorSystem":
    """The split factor system of an admissible sigma map.

    f is identically the identity and F_(x,y) applies
    sigma_{(xy)^-1} . sigma_x . sigma_y to the kernel slot, independent
    of the trailing argument.
    """
    if isinstance(H, RuleGyrogroup):
        return _integer_from_support(K, sigma)
    if not isinstance(sigma, semicross.SigmaMap):
        sigma = semicross.SigmaMap(H, K, sigma)
    rep = semicross.validate_sigma(H, K, sigma)
    if not rep.passed:
        raise semicross.SigmaError(f"sigma is not admissible:\n{rep.summary()}")
    nH, nK = H.n, K.n
    S = sigma.values
    invK = K.inverses()
    f = np.zeros((nK, nK), dtype=np.int64)
    F = np.empty((nK, nK, nH, nK), dtype=np.int64)
    for x in range(nK):
        for y in range(nK):
            comp = S[invK[K.table[x, y]]][S[x][S[y]]]
            F[x, y] = comp[:, None]
    return FactorSystem(H, K, S.copy(), f, F)


def validate(FS) -> Report:
    """Exhaustively check the six factor-system conditions with witnesses."""
    if isinstance(FS, IntegerFactorSystem):
        return FS.validate_windowed()
    H, K = FS.H, FS.K
    nH, nK = H.n, K.n
    S, f, F = FS.sigma, FS.f, FS.F
    HM, KM = H.table, K.table
    rep = Report(f"factor system over {H.name}, {K.name}")

    for x in range(nK):
        if not H.is_automorphism(S[x]):
            rep.add("sigma_values_automorphisms", False, f"x={x}", nK)
            break
    else:
        rep.add("sigma_values_automorphisms", True, None, nK)

    gyK = K.gyr_all()
    idH = np.arange(nH)

    rep.add("c1_sigma_identity", bool((S[0] == idH).all()),
            None if (S[0] == idH).all() else "sigma at identity", 1)

    wit = None
    for x in range(nK):
        if wit is None and (f[x, 0] != 0 or f[0, x] != 0):
            wit = f"x={x}"
    rep.add("c2_f_unit_arguments", wit is None, wit, 2 * nK)

    # f(x,y) sigma_{xy}(F_(x,y)(l,z)) f(xy, gyr[x,y](z))
    #   == sigma_x(sigma_y(l) f(y,z)) f(x, yz)
    wit, count = None, 0
    for x in range(nK):
        for y in range(nK):
            xy = int(KM[x, y])
            for z in range(nK):
                gz = int(gyK[x, y, z])
                for l in range(nH):
                    lhs = int(HM[f[x, y], HM[S[xy][F[x, y, l, z]], f[xy, gz]]])
                    rhs = int(HM[S[x][HM[S[y][l], f[y, z]]], f[x, KM[y, z]]])
                    count += 1
                    if wit is None and lhs != rhs:
                        wit = f"x={x} y={y} z={z} l={l}"
    rep.add("c3_compatibility", wit is None, wit, count)

    wit, count = None, 0
    for x in range(nK):
        for l in range(nH):
            for z in range(nK):
                count += 2
                if wit is None and (F[x, 0, l, z] != l or F[0, x, l, z] != l):
                    wit = f"x={x} l={l} z={z}"
    rep.add("c4_F_unit_arguments", wit is None, wit, count)

    wit, count = None, 0
    for x in range(nK):
        for y in range(nK):
            g = gyK[x, y]
            for l1 in range(nH):
                for z1 in range(nK):
                    for l2 in range(nH):
                        for z2 in range(nK):
                            arg = int(HM[l1, HM[S[z1][l2], f[z1, z2]]])
                            lhs = int(F[x, y, arg, KM[z1, z2]])
                            rhs = int(HM[F[x, y, l1, z1],
                                         HM[S[g[z1]][F[x, y, l2, z2]],
                                            f[g[z1], g[z2]]]])
                            count += 1
                            if wit is None and lhs != rhs:
                                wit = (f"x={x} y={y} l1={l1} z1={z1} "
                                       f"l2={l2} z2={z2}")
    rep.add("c5_F_multiplicativity", wit is None, wit, count)

    wit, count = None, 0
    for x in range(nK):
        for y in range(nK):
            count += 1
            if wit is None and not (F[KM[x, y], y] == F[x, y]).all():
                wit = f"x={x} y={y}"
    rep.add("c6_F_loop_shift", wit is None, wit, count)
    return rep


def build_extension(FS: FactorSystem):
    """Realize a validated factor system as (G, E, t).

    The product table on H x K must pass all axioms, its gyrations must
    match (F_(x,y)(c,z), gyr[x,y](z)) everywhere, and extracting the
    factor system back along t(x) = (e, x) must return the input
    exactly.  Any failure here means validation let a bad system
    through and raises ConsistencyError.
    """
    rep = validate(FS)
    if not rep.passed:
        raise ValueError(f"factor system does not validate:\n{rep.summary()}")
    H, K = FS.H, FS.K
    nH, nK = H.n, K.n
    n = nH * nK
    S, f, F = FS.sigma, FS.f, FS.F
    HM, KM = H.table, K.table
    T = np.empty((n, n), dtype=np.int64)
    for a in range(nH):
        for x in range(nK):
            row = np.empty(n, dtype=np.int64)
            for b in range(nH):
                hpart = HM[HM[a, S[x][b]], f[x]]      # a sigma_x(b) f(x,y) over y
                row[b * nK:(b + 1) * nK] = hpart * nK + KM[x]
            T[a * nK + x] = row
    G = FiniteGyrogroup(T, name=f"built<{H.name},{K.name}>")

    arep = verify_axioms(G)
    if not arep.passed:
        raise ConsistencyError(
            f"built table failed axioms, validation missed a condition:\n"
            f"{arep.summary()}")

    gy = G.gyr_all()
    gyK = K.gyr_all()
    for x in range(nK):
        for y in range(nK):
            want = np.empty(n, dtype=np.int64)
            for c in range(nH):
                want[c * nK:(c + 1) * nK] = F[x, y, c] * nK + gyK[x, y]
            for a in range(nH):
                for b in range(nH):
                    if not (gy[a * nK + x, b * nK + y] == want).all():
                        raise ConsistencyError(
                            f"gyration of the built table differs from the "
                            f"stated formula at ({a},{x}),({b},{y})")

    E = ext.coordinate_extension(H, K, G)
    t = np.arange(nK, dtype=np.int64)
    back = ext.extract_factor_system(E, t)
    if not (back == FS):
        raise ConsistencyError("extraction along the canonical section does "
                               "not return the input factor system")
    return G, E, t


# -- rule-backed variant over the integers -----------------------------------


class IntegerFactorSystem:
    """Factor system with kernel the integers; automorphisms are signs.

    sigma_sign[x] in {+1, -1}; f is an integer table (0 is the unit);
    F_(x,y) multiplies the kernel slot by F_sign[x, y] independently of
    the trailing argument.
    """

    def __init__(self, K: FiniteGyrogroup, sigma_sign, f, F_sign):
        self.K = K
        self.sigma_sign = np.array(sigma_sign, dtype=np.int64)
        self.f = np.array(f, dtype=np.int64)
        self.F_sign = np.array(F_sign, dtype=np.int64)
        if self.sigma_sign.shape != (K.n,):
            raise ValueError("sigma_sign must have one sign per K element")
        if set(np.abs(self.sigma_sign).tolist()) != {1}:
            raise ValueError("sigma_sign entries must be +1 or -1")
        if self.f.shape != (K.n, K.n):
            raise ValueError("f must be an nK x nK integer table")
        if self.F_sign.shape != (K.n, K.n):
            raise ValueError("F_sign must be an nK x nK sign table")

    def validate_windowed(self, bound: int = 50) -> Report:
        """The six conditions with kernel values ranging over [-bound, bound]."""
        K = self.K
        nK = K.n
        S, f, Fs = self.sigma_sign, self.f, self.F_sign
        KM = K.table
        gyK = K.gyr_all()
        rep = Report(f"windowed factor system over Z, {K.name}",
                     meta={"bound": bound})
        ls = np.arange(-bound, bound + 1)

        rep.add("c1_sigma_identity", S[0] == 1,
                None if S[0] == 1 else "sign at identity is -1", 1)

        wit = None
        for x in range(nK):
            if wit is None and (f[x, 0] != 0 or f[0, x] != 0):
                wit = f"x={x}"
        rep.add("c2_f_unit_arguments", wit is None, wit, 2 * nK)

        wit, count = None, 0
        for x in range(nK):
            for y in range(nK):
                xy = int(KM[x, y])
                for z in range(nK):
                    gz = int(gyK[x, y, z])
                    lhs = f[x, y] + S[xy] * Fs[x, y] * ls + f[xy, gz]
                    rhs = S[x] * (S[y] * ls + f[y, z]) + f[x, KM[y, z]]
                    count += len(ls)
                    if wit is None and not (lhs == rhs).all():
                        wit = f"x={x} y={y} z={z}"
        rep.add("c3_compatibility", wit is None, wit, count)

        wit, count = None, 0
        for x in range(nK):
            for z in range(nK):
                count += 2 * len(ls)
                if wit is None and (Fs[x, 0] != 1 or Fs[0, x] != 1):
                    wit = f"x={x} z={z}"
        rep.add("c4_F_unit_arguments", wit is None, wit, count)

        wit, count = None, 0
        sample = np.array([-bound, -1, 0, 1, bound])
        for x in range(nK):
            for y in range(nK):
                g = gyK[x, y]
                for z1 in range(nK):
                    for z2 in range(nK):
                        l1 = ls[:, None]
                        l2 = sample[None, :]
                        arg = l1 + S[z1] * l2 + f[z1, z2]
                        lhs = Fs[x, y] * arg
                        rhs = (Fs[x, y] * l1
                               + S[g[z1]] * (Fs[x, y] * l2)
                               + f[g[z1], g[z2]])
                        count += arg.size
                        if wit is None and not (lhs == rhs).all():
                            wit = f"x={x} y={y} z1={z1} z2={z2}"
        rep.add("c5_F_multiplicativity", wit is None, wit, count)

        wit, count = None, 0
        for x in range(nK):
            for y in range(nK):
                count += 1
                if wit is None and Fs[KM[x, y], y] != Fs[x, y]:
                    wit = f"x={x} y={y}"
        rep.add("c6_F_loop_shift", wit is None, wit, count)
        return rep

    def __repr__(self):
        return f"IntegerFactorSystem(Z, {self.K.name})"


def _integer_from_support(K: FiniteGyrogroup, sigma) -> IntegerFactorSystem:
    """Integer-kernel split system: sigma given as a sign vector or support set."""
    if isinstance(sigma, (set, frozenset, list, tuple)):
        signs = np.ones(K.n, dtype=np.int64)
        for x in sigma:
            signs[x] = -1
    else:
        signs = np.array(sigma, dtype=np.int64)
    invK = K.inverses()
    Fs = np.empty((K.n, K.n), dtype=np.int64)
    for x in range(K.n):
        for y in range(K.n):
            Fs[x, y] = signs[invK[K.table[x, y]]] * signs[x] * signs[y]
    return IntegerFactorSystem(K, signs, np.zeros((K.n, K.n), dtype=np.int64), Fs)


# -- file format --------------------------------------------------------------


def write_factor_system(FS: FactorSystem, h_ref: str, k_ref: str) -> str:
    """Serialize with H and K referenced by builtin name or table path."""
    lines = [f"H {h_ref}", f"K {k_ref}", "SIGMA"]
    lines += [" ".join(map(str, row)) for row in FS.sigma.tolist()]
    lines.append("F")
    nK = FS.K.n
    for x in range(nK):
        for y in range(nK):
            lines.append(f"# block ({x},{y})")
            lines += [" ".join(map(str, row)) for row in FS.F[x, y].tolist()]
    lines.append("f")
    lines += [" ".join(map(str, row)) for row in FS.f.tolist()]
    return "\n".join(lines) + "\n"


def read_factor_system(text: str, resolve) -> FactorSystem:
    """Parse the SIGMA/F/f section format; `resolve` maps a reference to a structure."""
    h_ref = k_ref = None
    section = None
    payload: dict[str, list[int]] = {"SIGMA": [], "F": [], "f": []}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "H" and section is None:
            h_ref = line.split(None, 1)[1].strip()
        elif head == "K" and section is None:
            k_ref = line.split(None, 1)[1].strip()
        elif head in ("SIGMA", "F", "f") and line == head:
            section = head
        else:
            if section is None:
                raise ValueError(f"unexpected line outside any section: {raw!r}")
            payload[section].extend(int(tok) for tok in line.split())
    if h_ref is None or k_ref is None:
        raise ValueError("factor system file must name H and K")
    H, K = resolve(h_ref), resolve(k_ref)
    nH, nK = H.n, K.n
    sigma = np.array(payload["SIGMA"], dtype=np.int64).reshape(nK, nH)
    F = np.array(payload["F"], dtype=np.int64).reshape(nK, nK, nH, nK)
    f = np.array(payload["f"], dtype=np.int64).reshape(nK, nK)
    return FactorSystem(H, K, sigma, f, F)
