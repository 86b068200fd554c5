"""Gyrogroup carriers and exhaustive law checking.

A gyrogroup is a magma with a left identity, left inverses, the left
gyroassociative law a(bc) = (ab) gyr[a,b](c) where every gyration
gyr[a,b] is an automorphism, and the left loop property
gyr[ab, b] = gyr[a, b].  Finite structures are stored as dense Cayley
tables; infinite ones are backed by operation oracles and checked on
finite windows.

Gyrations are never trusted from input: they are always recomputed from
the table via the gyrator identity gyr[a,b](c) = (ab)^-1 (a(bc)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


class TableFormatError(ValueError):
    """Malformed table input: bad shape, out-of-range entries, broken rows."""


class CarrierError(ValueError):
    """An element index outside the declared carrier."""


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: str | None = None
    count: int = 0

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed),
                "witness": self.witness, "count": int(self.count)}


@dataclass
class Report:
    """Pass/fail bundle for a family of exhaustive checks."""

    title: str
    checks: list[CheckResult] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name, passed, witness=None, count=0):
        self.checks.append(CheckResult(name, bool(passed), witness, count))

    def to_dict(self):
        return {"title": self.title, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks],
                "meta": self.meta}

    def summary(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{'ok' if c.passed else 'FAIL'}] {c.name}"
            if c.count:
                line += f" ({c.count} cases)"
            if c.witness and not c.passed:
                line += f"  witness: {c.witness}"
            lines.append(line)
        return "\n".join(lines)


class GyroPermutation:
    """A carrier permutation, usually one gyration gyr[a,b]."""

    def __init__(self, images):
        self.images = np.asarray(images, dtype=np.int64)

    def __call__(self, c: int) -> int:
        return int(self.images[c])

    def __eq__(self, other):
        if isinstance(other, GyroPermutation):
            other = other.images
        return self.images.shape == np.shape(other) and bool(
            (self.images == other).all())

    def __len__(self):
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return bool((self.images == np.arange(len(self.images))).all())

    def inverse(self) -> "GyroPermutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(self.images))
        return GyroPermutation(inv)

    def compose(self, other: "GyroPermutation") -> "GyroPermutation":
        """self after other: (self . other)(c) = self(other(c))."""
        return GyroPermutation(self.images[other.images])

    def cycles(self) -> str:
        seen, parts = set(), []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                seen.add(i)
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = int(self.images[j])
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) if parts else "()"

    def __repr__(self):
        return f"GyroPermutation({self.images.tolist()})"


def is_permutation(row) -> bool:
    row = np.asarray(row)
    return bool((np.sort(row) == np.arange(len(row))).all())


class FiniteGyrogroup:
    """Finite magma given by a Cayley table; element 0 is the identity.

    `strict=True` enforces the table-file invariants on construction
    (row 0 and column 0 are the identity, every row and column is a
    permutation).  Pass `strict=False` to hold a possibly corrupted
    table for diagnosis; the verification routines then report what is
    broken instead of raising.
    """

    def __init__(self, table, name: str = "", labels=None, strict: bool = True):
        table = np.array(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise TableFormatError(f"table must be square, got shape {table.shape}")
        n = table.shape[0]
        if n == 0:
            raise TableFormatError("empty table")
        if table.min() < 0 or table.max() >= n:
            raise TableFormatError("table entries must lie in [0, n-1]")
        if strict:
            if not (table[0] == np.arange(n)).all():
                raise TableFormatError("row 0 must be the identity permutation")
            if not (table[:, 0] == np.arange(n)).all():
                raise TableFormatError("column 0 must be the identity permutation")
            for i in range(n):
                if not is_permutation(table[i]):
                    raise TableFormatError(f"row {i} is not a permutation")
                if not is_permutation(table[:, i]):
                    raise TableFormatError(f"column {i} is not a permutation")
        self.table = table
        self.table.setflags(write=False)
        self.name = name or f"gyrogroup<{n}>"
        if labels is not None and len(labels) != n:
            raise TableFormatError("label count must match carrier size")
        self.labels = list(labels) if labels is not None else None
        self._inv = None
        self._gyr = None

    # -- basic structure ---------------------------------------------------

    @property
    def n(self) -> int:
        return self.table.shape[0]

    @property
    def identity(self) -> int:
        return 0

    def carrier(self) -> range:
        return range(self.n)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def _index(self, a) -> int:
        a = int(a)
        if not 0 <= a < self.n:
            raise CarrierError(f"element {a} outside carrier of size {self.n}")
        return a

    def apply(self, a: int, b: int) -> int:
        return int(self.table[self._index(a), self._index(b)])

    def inverses(self) -> np.ndarray:
        """Left-inverse table; entry -1 where no left inverse exists."""
        if self._inv is None:
            inv = np.full(self.n, -1, dtype=np.int64)
            cols = self.table == 0
            for a in range(self.n):
                hits = np.flatnonzero(cols[:, a])
                if len(hits) >= 1:
                    inv[a] = hits[0]
            inv.setflags(write=False)
            self._inv = inv
        return self._inv

    def left_inverse(self, a: int) -> int:
        v = int(self.inverses()[self._index(a)])
        if v < 0:
            raise CarrierError(f"element {a} has no left inverse (broken table)")
        return v

    def gyr_all(self) -> np.ndarray:
        """(n, n, n) tensor: gyr_all[a, b, c] = gyr[a,b](c), by the gyrator identity.

        Requires every element to have a left inverse; callers probing
        corrupted tables should check `inverses()` first.
        """
        if self._gyr is None:
            M = self.table
            inv = self.inverses()
            if (inv < 0).any():
                raise CarrierError("gyrations undefined: some element lacks a left inverse")
            # gyr[a,b](c) = (ab)^-1 (a (b c))
            a_bc = M[:, M]                      # [a, b, c] -> a(bc)
            ab_inv = inv[M]                     # [a, b] -> (ab)^-1
            rows = M[ab_inv]                    # [a, b, :] row of (ab)^-1
            self._gyr = np.take_along_axis(rows, a_bc, axis=2)
            self._gyr.setflags(write=False)
        return self._gyr

    def gyr_perm(self, a: int, b: int) -> np.ndarray:
        return self.gyr_all()[self._index(a), self._index(b)]

    def is_automorphism(self, perm) -> bool:
        perm = np.asarray(perm)
        if not is_permutation(perm):
            return False
        M = self.table
        return bool((perm[M] == M[np.ix_(perm, perm)]).all())

    def left_order(self, a: int) -> int:
        """Least k with the left power a^(k) = a(a(...a)) equal to e."""
        a = self._index(a)
        x, k = a, 1
        while x != 0:
            x = int(self.table[a, x])
            k += 1
            if k > self.n + 1:
                return -1
        return k

    def __eq__(self, other):
        return (isinstance(other, FiniteGyrogroup)
                and self.table.shape == other.table.shape
                and bool((self.table == other.table).all()))

    def __repr__(self):
        return f"FiniteGyrogroup({self.name!r}, n={self.n})"


class RuleGyrogroup:
    """Gyrogroup over a possibly infinite carrier, given by oracles.

    `op`, `inv` and `window` must be consistent: operations on sampled
    elements return carrier elements.  When `vectorized` is set, `op`
    and `inv` also accept numpy int64 arrays of encoded elements, and
    `window` returns an int64 array; the windowed verifier then runs
    fully vectorized.
    """

    def __init__(self, name, identity, op, inv, window,
                 describe=None, vectorized=False):
        self.name = name
        self.identity = identity
        self.op = op
        self.inv = inv
        self.window = window
        self.describe = describe or str
        self.vectorized = vectorized

    def apply(self, a, b):
        return self.op(a, b)

    def left_inverse(self, a):
        return self.inv(a)

    def gyr(self, a, b, c):
        """gyr[a,b](c) from the gyrator identity."""
        ab = self.op(a, b)
        return self.op(self.inv(ab), self.op(a, self.op(b, c)))

    def __repr__(self):
        return f"RuleGyrogroup({self.name!r})"


# -- table file format ------------------------------------------------------


def parse_table(text: str, name: str = "", strict: bool = True) -> FiniteGyrogroup:
    """Parse the plain-text table format: first token n, then n rows of n ints."""
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens:
        raise TableFormatError("empty table file")
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise TableFormatError(f"non-integer token in table file: {exc}") from None
    n = values[0]
    if n <= 0:
        raise TableFormatError(f"declared size {n} must be positive")
    if len(values) != 1 + n * n:
        raise TableFormatError(
            f"expected {n * n} entries after the size token, got {len(values) - 1}")
    table = np.array(values[1:], dtype=np.int64).reshape(n, n)
    return FiniteGyrogroup(table, name=name, strict=strict)


def load_table(path, strict: bool = True) -> FiniteGyrogroup:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    name = str(path).rsplit("/", 1)[-1]
    if name.endswith(".tbl"):
        name = name[:-4]
    return parse_table(text, name=name, strict=strict)


def dump_table(G: FiniteGyrogroup) -> str:
    lines = [f"# {G.name}", str(G.n)]
    lines += [" ".join(str(int(v)) for v in row) for row in G.table]
    return "\n".join(lines) + "\n"


# -- axiom verification ------------------------------------------------------


def verify_axioms(G, window: int = 50, probe: int = 3, seed: int = 0,
                  samples: int = 4, threads: int = 1) -> Report:
    """Check the four gyrogroup axioms.

    Table-backed structures are checked exhaustively: the
    gyroassociativity pass visits exactly n^3 triples and every
    gyration is verified to be an automorphism.  Rule-backed structures
    are checked on the finite window (`window` bounds the sampled
    carrier, `probe` a smaller argument window, and `samples` seeded
    argument pairs per element pair for the automorphism law).

    Failures are reported with witnesses, never raised.
    """
    if isinstance(G, RuleGyrogroup):
        return _verify_axioms_windowed(G, window, probe, seed, samples, threads)

    M = G.table
    n = G.n
    rep = Report(f"axioms of {G.name}", meta={"n": n})

    bad = np.flatnonzero(M[0] != np.arange(n))
    rep.add("left_identity", len(bad) == 0,
            None if len(bad) == 0 else f"e+{bad[0]} = {int(M[0, bad[0]])}", n)

    inv = G.inverses()
    missing = np.flatnonzero(inv < 0)
    rep.add("left_inverses", len(missing) == 0,
            None if len(missing) == 0 else f"no b with b+{int(missing[0])} = e", n)
    if len(missing):
        rep.add("gyroassociativity", False, "gyrations undefined without inverses", 0)
        rep.add("gyr_automorphisms", False, "gyrations undefined without inverses", 0)
        rep.add("left_loop_property", False, "gyrations undefined without inverses", 0)
        return rep

    gy = G.gyr_all()
    a_bc = M[:, M]
    # a(bc) == (ab) gyr[a,b](c) over all n^3 triples
    lhs = a_bc
    rows_ab = M[M]                                  # [a, b, :] row of ab
    rhs = np.take_along_axis(rows_ab, gy, axis=2)
    ok = lhs == rhs
    wit = None
    if not ok.all():
        a, b, c = np.unravel_index(int(np.argmin(ok)), ok.shape)
        wit = (f"a={a} b={b} c={c}: a(bc)={int(lhs[a, b, c])} "
               f"(ab)gyr[a,b](c)={int(rhs[a, b, c])}")
    rep.add("gyroassociativity", bool(ok.all()), wit, n ** 3)
    rep.meta["triples_visited"] = n ** 3

    # every gyr[a,b] bijective and operation preserving
    sorted_gy = np.sort(gy, axis=2)
    bij = (sorted_gy == np.arange(n)).all(axis=2)
    wit = None
    if not bij.all():
        a, b = np.unravel_index(int(np.argmin(bij)), bij.shape)
        wit = f"gyr[{a},{b}] is not a bijection"
    hom_ok = bij.all()
    if hom_ok:
        # gyr[a,b](c d) == gyr[a,b](c) gyr[a,b](d); n <= 64 keeps this cheap
        for a in range(n):
            for b in range(n):
                p = gy[a, b]
                if not (p[M] == M[np.ix_(p, p)]).all():
                    hom_ok = False
                    wit = f"gyr[{a},{b}] does not preserve the operation"
                    break
            if not hom_ok:
                break
    rep.add("gyr_automorphisms", bool(hom_ok), wit, n * n)

    # gyr[ab, b] == gyr[a, b]
    loop_ok = True
    wit = None
    shifted = gy[M, np.arange(n)[None, :].repeat(n, axis=0)]
    ok = (shifted == gy).all(axis=2)
    if not ok.all():
        loop_ok = False
        a, b = np.unravel_index(int(np.argmin(ok)), ok.shape)
        wit = f"gyr[{a}+{b}, {b}] != gyr[{a},{b}]"
    rep.add("left_loop_property", loop_ok, wit, n * n)
    return rep


def _pair_chunks(total, size):
    for lo in range(0, total, size):
        yield lo, min(lo + size, total)


def _verify_axioms_windowed(R: RuleGyrogroup, window, probe, seed, samples,
                            threads) -> Report:
    """Windowed axiom check for rule-backed structures.

    Quantification: identity and inverses over the full window W;
    gyroassociativity and the left loop property over all pairs from W
    with arguments from the probe window P, plus all pairs from P with
    arguments from W; the automorphism law exhaustively on P and on
    seeded sampled argument pairs for every pair from W.
    """
    rep = Report(f"windowed axioms of {R.name}",
                 meta={"window": window, "probe": probe, "seed": seed,
                       "samples": samples})
    if not R.vectorized:
        return _verify_axioms_windowed_slow(R, window, probe, seed, samples, rep)

    W = np.asarray(R.window(window))
    P = np.asarray(R.window(min(probe, window)))
    rep.meta["window_size"] = int(len(W))
    op, inv = R.op, R.inv
    e = R.identity

    ia = op(np.full(len(W), e, dtype=W.dtype), W)
    okm = ia == W
    rep.add("left_identity", bool(okm.all()),
            None if okm.all() else R.describe(int(W[int(np.argmin(okm))])), len(W))

    li = op(inv(W), W)
    okm = li == e
    rep.add("left_inverses", bool(okm.all()),
            None if okm.all() else R.describe(int(W[int(np.argmin(okm))])), len(W))

    def laws_block(A, B, C):
        """Gyroassociativity and the left loop law for pairs zip(A, B)
        against every argument in C; one shared evaluation of gyr."""
        a, b, c = A[:, None], B[:, None], C[None, :]
        ab_flat = op(A, B)
        iab = inv(ab_flat)[:, None]
        iabb = inv(op(ab_flat, B))[:, None]
        ab = ab_flat[:, None]
        bc = op(b, c)
        a_bc = op(a, bc)
        g = op(iab, a_bc)
        assoc = op(ab, g) == a_bc
        loop = op(iabb, op(ab, bc)) == g
        return assoc, loop

    def auto_block(A, B, c, d):
        a, b = A[:, None], B[:, None]
        ab = op(A, B)[:, None]
        lhs = op(inv(ab), op(a, op(b, op(c, d))))
        rhs = op(op(inv(ab), op(a, op(b, c))), op(inv(ab), op(a, op(b, d))))
        return lhs == rhs

    nW, nP = len(W), len(P)
    AA, BB = np.meshgrid(np.arange(nW), np.arange(nW), indexing="ij")
    AA, BB = AA.ravel(), BB.ravel()
    chunk = max(1, 2_000_000 // max(nP, 1))

    def run_chunk(lo_hi):
        lo, hi = lo_hi
        A, B = W[AA[lo:hi]], W[BB[lo:hi]]
        out = {}
        assoc, loop = laws_block(A, B, P)
        out["assoc"] = (assoc, A, B, P)
        out["loop"] = (loop, A, B, P)
        rng = np.random.default_rng([seed, lo])
        ci = rng.integers(0, nP, size=(hi - lo, samples))
        di = rng.integers(0, nP, size=(hi - lo, samples))
        c, d = P[ci], P[di]
        out["auto"] = (auto_block(A, B, c, d), A, B, c, d)
        return out

    results = []
    chunks = list(_pair_chunks(nW * nW, chunk))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run_chunk, chunks))
    else:
        results = [run_chunk(ch) for ch in chunks]

    assoc_ok, assoc_wit, assoc_count = True, None, 0
    loop_ok, loop_wit, loop_count = True, None, 0
    auto_ok, auto_wit, auto_count = True, None, 0
    for out in results:
        ok, A, B, C = out["assoc"]
        assoc_count += ok.size
        if assoc_ok and not ok.all():
            i, j = np.unravel_index(int(np.argmin(ok)), ok.shape)
            assoc_ok, assoc_wit = False, (
                f"a={R.describe(int(A[i]))} b={R.describe(int(B[i]))} "
                f"c={R.describe(int(C[j]))}")
        ok, A, B, C = out["loop"]
        loop_count += ok.size
        if loop_ok and not ok.all():
            i, j = np.unravel_index(int(np.argmin(ok)), ok.shape)
            loop_ok, loop_wit = False, (
                f"a={R.describe(int(A[i]))} b={R.describe(int(B[i]))} "
                f"c={R.describe(int(C[j]))}")
        ok, A, B, c, d = out["auto"]
        auto_count += ok.size
        if auto_ok and not ok.all():
            i, j = np.unravel_index(int(np.argmin(ok)), ok.shape)
            auto_ok, auto_wit = False, (
                f"a={R.describe(int(A[i]))} b={R.describe(int(B[i]))} "
                f"c={R.describe(int(c[i, j]))} d={R.describe(int(d[i, j]))}")

    # small pair window against the full argument window
    PA, PB = np.meshgrid(np.arange(nP), np.arange(nP), indexing="ij")
    A, B = P[PA.ravel()], P[PB.ravel()]
    ok, ok_loop = laws_block(A, B, W)
    assoc_count += ok.size
    if assoc_ok and not ok.all():
        i, j = np.unravel_index(int(np.argmin(ok)), ok.shape)
        assoc_ok, assoc_wit = False, (
            f"a={R.describe(int(A[i]))} b={R.describe(int(B[i]))} "
            f"c={R.describe(int(W[j]))}")
    loop_count += ok_loop.size
    if loop_ok and not ok_loop.all():
        i, j = np.unravel_index(int(np.argmin(ok_loop)), ok_loop.shape)
        loop_ok, loop_wit = False, (
            f"a={R.describe(int(A[i]))} b={R.describe(int(B[i]))} "
            f"c={R.describe(int(W[j]))}")
    # exhaustive automorphism law on the inner probe window
    Q = np.asarray(R.window(min(2, probe, window)))
    nQ = len(Q)
    QA, QB = np.meshgrid(np.arange(nQ), np.arange(nQ), indexing="ij")
    Aq, Bq = Q[QA.ravel()], Q[QB.ravel()]
    c, d = Q[QA.ravel()][None, :], Q[QB.ravel()][None, :]
    ok = auto_block(Aq, Bq, c, d)
    auto_count += ok.size
    if auto_ok and not ok.all():
        i, j = np.unravel_index(int(np.argmin(ok)), ok.shape)
        auto_ok, auto_wit = False, (
            f"a={R.describe(int(Aq[i]))} b={R.describe(int(Bq[i]))} "
            f"c={R.describe(int(c[0, j]))} d={R.describe(int(d[0, j]))}")

    rep.add("gyroassociativity", assoc_ok, assoc_wit, assoc_count)
    rep.add("gyr_automorphisms", auto_ok, auto_wit, auto_count)
    rep.add("left_loop_property", loop_ok, loop_wit, loop_count)
    return rep


def _verify_axioms_windowed_slow(R, window, probe, seed, samples, rep):
    """Pure-python fallback for rule structures without vectorized oracles."""
    import random as _random

    W = list(R.window(window))
    P = list(R.window(min(probe, window)))
    rep.meta["window_size"] = len(W)
    op, inv, e = R.op, R.inv, R.identity

    wit = next((a for a in W if op(e, a) != a), None)
    rep.add("left_identity", wit is None,
            None if wit is None else R.describe(wit), len(W))
    wit = next((a for a in W if op(inv(a), a) != e), None)
    rep.add("left_inverses", wit is None,
            None if wit is None else R.describe(wit), len(W))

    rng = _random.Random(seed)

    def gyr(a, b, c):
        ab = op(a, b)
        return op(inv(ab), op(a, op(b, c)))

    assoc_ok, assoc_wit, n_assoc = True, None, 0
    loop_ok, loop_wit, n_loop = True, None, 0
    auto_ok, auto_wit, n_auto = True, None, 0
    phases = [(itertools.product(W, W), P), (itertools.product(P, P), W)]
    for pairs, args in phases:
        for a, b in pairs:
            ab = op(a, b)
            abb = op(ab, b)
            for c in args:
                g = gyr(a, b, c)
                n_assoc += 1
                if assoc_ok and op(ab, g) != op(a, op(b, c)):
                    assoc_ok, assoc_wit = False, (
                        f"{R.describe(a)},{R.describe(b)},{R.describe(c)}")
                n_loop += 1
                if loop_ok and op(inv(abb), op(ab, op(b, c))) != g:
                    loop_ok, loop_wit = False, (
                        f"{R.describe(a)},{R.describe(b)},{R.describe(c)}")
            for _ in range(samples):
                c, d = rng.choice(P), rng.choice(P)
                n_auto += 1
                if auto_ok and gyr(a, b, op(c, d)) != op(gyr(a, b, c), gyr(a, b, d)):
                    auto_ok, auto_wit = False, (
                        f"{R.describe(a)},{R.describe(b)} at "
                        f"{R.describe(c)},{R.describe(d)}")
    rep.add("gyroassociativity", assoc_ok, assoc_wit, n_assoc)
    rep.add("gyr_automorphisms", auto_ok, auto_wit, n_auto)
    rep.add("left_loop_property", loop_ok, loop_wit, n_loop)
    return rep


# -- derived identities ------------------------------------------------------


def verify_identities(G, window: int = 50, probe: int = 3) -> Report:
    """Check the six standard gyrogroup identities.

    left cancellation, two-sidedness of inverses, the inverse-shift law
    gyr[ab, a^-1] = gyr[a,b], the gyrator identity, inversive symmetry
    gyr^-1[a,b] = gyr[b,a], and (ab)^-1 = gyr[a,b](b^-1 a^-1).
    Exhaustive for tables; windowed for rule-backed structures, with
    gyration identities compared on probe-window arguments.
    """
    if isinstance(G, RuleGyrogroup):
        return _verify_identities_windowed(G, window, probe)
    M = G.table
    n = G.n
    rep = Report(f"identities of {G.name}", meta={"n": n})
    ar = np.arange(n)

    inv = G.inverses()
    if (inv < 0).any():
        a = int(np.flatnonzero(inv < 0)[0])
        for name in ("left_cancellation", "inverse_two_sided", "gyr_inverse_shift",
                     "gyrator_identity", "gyr_inversive_symmetry",
                     "product_inverse_formula"):
            rep.add(name, False, f"element {a} has no left inverse", 0)
        return rep

    # a^-1 (a b) == b
    lc = np.take_along_axis(M[inv], M, axis=1)
    ok = lc == ar[None, :]
    wit = None
    if not ok.all():
        a, b = np.unravel_index(int(np.argmin(ok)), ok.shape)
        wit = f"a={a} b={b}"
    rep.add("left_cancellation", bool(ok.all()), wit, n * n)

    ok = (M == 0) == (M.T == 0)
    wit = None
    if not ok.all():
        a, b = np.unravel_index(int(np.argmin(ok)), ok.shape)
        wit = f"a={a} b={b}"
    rep.add("inverse_two_sided", bool(ok.all()), wit, n * n)

    gy = G.gyr_all()
    # gyr[ab, a^-1] == gyr[a, b]
    shifted = gy[M, np.broadcast_to(inv[:, None], (n, n))]
    ok = (shifted == gy).all(axis=2)
    wit = None
    if not ok.all():
        a, b = np.unravel_index(int(np.argmin(ok)), ok.shape)
        wit = f"a={a} b={b}"
    rep.add("gyr_inverse_shift", bool(ok.all()), wit, n * n)

    # (ab) gyr[a,b](c) == a(bc): the gyrator identity read against the table
    rows_ab = M[M]
    ok = (np.take_along_axis(rows_ab, gy, axis=2) == M[:, M])
    wit = None
    if not ok.all():
        a, b, c = np.unravel_index(int(np.argmin(ok)), ok.shape)
        wit = f"a={a} b={b} c={c}"
    rep.add("gyrator_identity", bool(ok.all()), wit, n ** 3)

    # gyr[a,b] . gyr[b,a] == id
    comp = np.take_along_axis(gy, gy.transpose(1, 0, 2), axis=2)
    ok = (comp == ar[None, None, :]).all(axis=2)
    wit = None
    if not ok.all():
        a, b = np.unravel_index(int(np.argmin(ok)), ok.shape)
        wit = f"a={a} b={b}"
    rep.add("gyr_inversive_symmetry", bool(ok.all()), wit, n * n)

    # (ab)^-1 == gyr[a,b](b^-1 a^-1)
    binv_ainv = M[inv][:, inv].T  # [a, b] -> b^-1 a^-1
    img = np.take_along_axis(gy, binv_ainv[:, :, None], axis=2)[:, :, 0]
    ok = img == inv[M]
    wit = None
    if not ok.all():
        a, b = np.unravel_index(int(np.argmin(ok)), ok.shape)
        wit = f"a={a} b={b}"
    rep.add("product_inverse_formula", bool(ok.all()), wit, n * n)
    return rep


def _verify_identities_windowed(R: RuleGyrogroup, window: int, probe: int) -> Report:
    """The six identities over window pairs, with gyrations compared on
    probe arguments; probe pairs also get full-window arguments."""
    rep = Report(f"windowed identities of {R.name}",
                 meta={"window": window, "probe": probe})
    op, inv, e = R.op, R.inv, R.identity
    if not R.vectorized:
        raise TypeError("windowed identities need vectorized oracles")
    W = np.asarray(R.window(window))
    P = np.asarray(R.window(min(probe, window)))
    rep.meta["window_size"] = int(len(W))
    nW, nP = len(W), len(P)

    state = {name: (True, None, 0) for name in
             ("left_cancellation", "inverse_two_sided", "gyr_inverse_shift",
              "gyrator_identity", "gyr_inversive_symmetry",
              "product_inverse_formula")}

    def note(name, ok_mask, describe):
        ok, wit, count = state[name]
        count += ok_mask.size
        if ok and not ok_mask.all():
            ok, wit = False, describe(np.unravel_index(
                int(np.argmin(ok_mask)), ok_mask.shape))
        state[name] = (ok, wit, count)

    def pair_phase(A, B, C):
        AB = op(A, B)
        iA = inv(A)
        note("left_cancellation", op(iA, AB) == B,
             lambda i: R.describe(int(A[i[0]])))
        note("inverse_two_sided", (AB == e) == (op(B, A) == e),
             lambda i: R.describe(int(A[i[0]])))
        binv_ainv = op(inv(B), iA)
        g6 = op(inv(AB), op(A, op(B, binv_ainv)))
        note("product_inverse_formula", g6 == inv(AB),
             lambda i: R.describe(int(A[i[0]])))
        a, b, c = A[:, None], B[:, None], C[None, :]
        ab, ia = AB[:, None], iA[:, None]
        iab = inv(AB)[:, None]
        g = op(iab, op(a, op(b, c)))
        note("gyrator_identity", op(ab, g) == op(a, op(b, c)),
             lambda i: f"{R.describe(int(A[i[0]]))},{R.describe(int(C[i[1]]))}")
        g3 = op(inv(op(AB, iA))[:, None], op(ab, op(ia, c)))
        note("gyr_inverse_shift", g3 == g,
             lambda i: f"{R.describe(int(A[i[0]]))},{R.describe(int(B[i[0]]))}")
        gba = op(inv(op(B, A))[:, None], op(b, op(a, c)))
        back = op(iab, op(a, op(b, gba)))
        note("gyr_inversive_symmetry", back == c,
             lambda i: f"{R.describe(int(A[i[0]]))},{R.describe(int(B[i[0]]))}")

    AA, BB = np.meshgrid(np.arange(nW), np.arange(nW), indexing="ij")
    AA, BB = AA.ravel(), BB.ravel()
    chunk = max(1, 2_000_000 // max(nP, 1))
    for lo, hi in _pair_chunks(nW * nW, chunk):
        pair_phase(W[AA[lo:hi]], W[BB[lo:hi]], P)
    PA, PB = np.meshgrid(np.arange(nP), np.arange(nP), indexing="ij")
    pair_phase(P[PA.ravel()], P[PB.ravel()], W)

    for name, (ok, wit, count) in state.items():
        rep.add(name, ok, wit, count)
    return rep


def is_group(G, window: int = 20) -> tuple[bool, tuple | None]:
    """True iff every gyration is trivial; else a non-associative witness triple."""
    if isinstance(G, RuleGyrogroup):
        W = list(G.window(window))
        for a in W:
            for b in W:
                for c in W:
                    if G.op(G.op(a, b), c) != G.op(a, G.op(b, c)):
                        return False, (a, b, c)
        return True, None
    gy = G.gyr_all()
    n = G.n
    moved = gy != np.arange(n)[None, None, :]
    if not moved.any():
        return True, None
    a, b, c = np.unravel_index(int(np.argmax(moved)), moved.shape)
    return False, (int(a), int(b), int(c))
