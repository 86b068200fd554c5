"""Subgroups, normality, quotients and isomorphism search.

A subgroup of a gyrogroup is a subset that forms a group under the
restricted operation.  It is normal when every gyration with one leg in
the subgroup is trivial, all gyrations map the subgroup into itself,
and left and right translates of the subgroup agree; the quotient by a
normal subgroup is again a gyrogroup.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from .core import CarrierError, FiniteGyrogroup, Report, verify_axioms


class PreconditionError(ValueError):
    """A structural precondition (subgroup, normality) does not hold."""


def _clean_subset(G: FiniteGyrogroup, subset) -> list[int]:
    out = sorted({int(a) for a in subset})
    for a in out:
        if not 0 <= a < G.n:
            raise CarrierError(f"element {a} outside carrier of {G.name}")
    return out


def is_subgroup(G: FiniteGyrogroup, subset) -> tuple[bool, str | None]:
    """Whether the subset is a group under the restriction of the operation."""
    S = _clean_subset(G, subset)
    if 0 not in S:
        return False, "identity missing"
    inS = set(S)
    M = G.table
    for a in S:
        for b in S:
            if int(M[a, b]) not in inS:
                return False, f"not closed: {a}+{b} = {int(M[a, b])}"
    inv = G.inverses()
    for a in S:
        if int(inv[a]) not in inS:
            return False, f"inverse of {a} not in subset"
    for a in S:
        for b in S:
            for c in S:
                if M[M[a, b], c] != M[a, M[b, c]]:
                    return False, f"not associative at ({a},{b},{c})"
    return True, None


def is_normal(G: FiniteGyrogroup, subset) -> Report:
    """The three normality conditions, checked exhaustively with witnesses."""
    S = _clean_subset(G, subset)
    ok, wit = is_subgroup(G, S)
    if not ok:
        raise PreconditionError(f"subset is not a subgroup: {wit}")
    rep = Report(f"normality of {{{','.join(map(str, S))}}} in {G.name}")
    gy = G.gyr_all()
    idn = np.arange(G.n)
    M = G.table

    wit = None
    for g in range(G.n):
        for h in S:
            if not (gy[g, h] == idn).all():
                wit = f"gyr[{g},{h}] nontrivial"
                break
        if wit:
            break
    rep.add("gyrations_with_subgroup_trivial", wit is None, wit, G.n * len(S))

    inS = set(S)
    wit = None
    for g in range(G.n):
        for gp in range(G.n):
            if any(int(gy[g, gp, h]) not in inS for h in S):
                wit = f"gyr[{g},{gp}] moves the subgroup out of itself"
                break
        if wit:
            break
    rep.add("subgroup_stable_under_gyrations", wit is None, wit,
            G.n * G.n * len(S))

    wit = None
    for g in range(G.n):
        left = {int(M[g, h]) for h in S}
        right = {int(M[h, g]) for h in S}
        if left != right:
            wit = f"{g}+H != H+{g}"
            break
    rep.add("left_right_translates_agree", wit is None, wit, G.n)
    return rep


def cosets(G: FiniteGyrogroup, subset) -> list[tuple[int, ...]]:
    """Left cosets g+H of a normal subgroup, as sorted disjoint tuples."""
    rep = is_normal(G, subset)
    if not rep.passed:
        raise PreconditionError(f"subset is not normal:\n{rep.summary()}")
    S = _clean_subset(G, subset)
    M = G.table
    out, seen = [], set()
    for g in range(G.n):
        if g in seen:
            continue
        cs = tuple(sorted(int(M[g, h]) for h in S))
        if len(cs) != len(S):
            raise PreconditionError("translate collapses; table is broken")
        out.append(cs)
        seen.update(cs)
    return out


class QuotientGyrogroup:
    """Quotient structure: coset list, induced table, projection map."""

    def __init__(self, G: FiniteGyrogroup, subset):
        self.parent = G
        self.cosets = cosets(G, subset)
        proj = np.empty(G.n, dtype=np.int64)
        for i, cs in enumerate(self.cosets):
            for g in cs:
                proj[g] = i
        m = len(self.cosets)
        M = G.table
        T = np.empty((m, m), dtype=np.int64)
        for i, ci in enumerate(self.cosets):
            for j, cj in enumerate(self.cosets):
                vals = {int(proj[M[a, b]]) for a in ci for b in cj}
                if len(vals) != 1:
                    raise AssertionError(
                        f"quotient product ill-defined on cosets {i},{j}")
                T[i, j] = vals.pop()
        self.group = FiniteGyrogroup(T, name=f"{G.name}/H")
        self.projection = proj
        rep = verify_axioms(self.group)
        if not rep.passed:
            raise AssertionError(f"quotient failed axioms:\n{rep.summary()}")
        if not (proj[M] == T[np.ix_(proj, proj)]).all():
            raise AssertionError("projection is not a homomorphism")

    @property
    def n(self) -> int:
        return self.group.n


def quotient(G: FiniteGyrogroup, subset) -> QuotientGyrogroup:
    return QuotientGyrogroup(G, subset)


# -- isomorphism search -------------------------------------------------------


def _profiles(G: FiniteGyrogroup):
    gy = G.gyr_all()
    idn = np.arange(G.n)
    nontriv = (gy != idn[None, None, :]).any(axis=2)
    left = nontriv.sum(axis=1)
    right = nontriv.sum(axis=0)
    return [(G.left_order(a), int(left[a]), int(right[a])) for a in range(G.n)]


def find_isomorphism(G1: FiniteGyrogroup, G2: FiniteGyrogroup):
    """An operation-preserving bijection G1 -> G2, or None.

    Backtracking over images with forced propagation through products;
    candidates are pruned by invariant profiles (left-power order and
    gyration support counts).  Exhaustive at small orders, so a None
    answer rules an isomorphism out.
    """
    if G1.n != G2.n:
        return None
    n = G1.n
    p1, p2 = _profiles(G1), _profiles(G2)
    if Counter(p1) != Counter(p2):
        return None
    candidates = [[b for b in range(n) if p2[b] == p1[a]] for a in range(n)]
    M1, M2 = G1.table, G2.table
    phi = np.full(n, -1, dtype=np.int64)
    used = [False] * n
    phi[0] = 0
    used[0] = True

    def propagate(newly):
        """Close the partial map under products; returns assignments made."""
        added = []
        queue = list(newly)
        while queue:
            a = queue.pop()
            for b in range(n):
                if phi[b] < 0:
                    continue
                for (u, v) in ((a, b), (b, a)):
                    w = int(M1[u, v])
                    img = int(M2[phi[u], phi[v]])
                    if phi[w] < 0:
                        if used[img] or p2[img] != p1[w]:
                            for x in added:
                                used[phi[x]] = False
                                phi[x] = -1
                            return None
                        phi[w] = img
                        used[img] = True
                        added.append(w)
                        queue.append(w)
                    elif phi[w] != img:
                        for x in added:
                            used[phi[x]] = False
                            phi[x] = -1
                        return None
        return added

    def search():
        a = next((i for i in range(n) if phi[i] < 0), None)
        if a is None:
            return True
        for b in candidates[a]:
            if used[b]:
                continue
            phi[a] = b
            used[b] = True
            added = propagate([a])
            if added is not None:
                if search():
                    return True
                for x in added:
                    used[phi[x]] = False
                    phi[x] = -1
            phi[a] = -1
            used[b] = False
        return False

    if search():
        return phi.copy()
    return None
