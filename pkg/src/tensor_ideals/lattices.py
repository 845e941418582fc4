"""Finite posets and bounded lattices.

Both classes index their elements ``0..n-1`` and keep the order as a
read-only boolean matrix ``leq[i, j] == (elements[i] <= elements[j])``.
Meet and join tables are computed once from the order, so a
`FiniteBoundedLattice` can be built from any finite poset that happens to
be a lattice.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import PreconditionError, SchemaError
from .report import Report

__all__ = [
    "FinitePoset",
    "FiniteBoundedLattice",
    "check_coherent_frame",
    "meet_primes",
    "join_irreducibles",
    "downset_lattice",
    "birkhoff_round_trip",
    "posets_up_to_iso",
    "lattices_up_to_iso",
]


def _order_matrix(elements: Sequence, leq) -> np.ndarray:
    if callable(leq):
        mat = np.array([[bool(leq(a, b)) for b in elements] for a in elements], dtype=bool)
    else:
        mat = np.array(leq, dtype=bool)
    n = len(elements)
    mat = mat.reshape(n, n)
    if not mat.diagonal().all():
        raise SchemaError("order is not reflexive")
    if ((mat & mat.T) != np.eye(n, dtype=bool)).any():
        raise SchemaError("order is not antisymmetric")
    if n and ((mat.astype(np.int64) @ mat.astype(np.int64) > 0) & ~mat).any():
        raise SchemaError("order is not transitive")
    mat.flags.writeable = False
    return mat


class FinitePoset:
    def __init__(self, elements: Iterable[Hashable], leq: Callable | np.ndarray):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise SchemaError("duplicate poset elements")
        self.leq_matrix = _order_matrix(self.elements, leq)

    @property
    def n(self) -> int:
        return len(self.elements)

    def leq(self, a, b) -> bool:
        return bool(self.leq_matrix[self.index[a], self.index[b]])

    def covers(self) -> list[tuple[int, int]]:
        """Hasse edges (i, j): j covers i."""
        lt = self.leq_matrix & ~np.eye(self.n, dtype=bool)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        hasse = lt & ~between
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(hasse))]

    def downsets(self) -> list[frozenset]:
        """All down-closed subsets, each exactly once."""
        order = sorted(range(self.n), key=lambda i: int(self.leq_matrix[:, i].sum()))
        below = [set(np.nonzero(self.leq_matrix[:, i])[0]) - {i} for i in range(self.n)]
        out: list[frozenset] = []

        def rec(k: int, chosen: set) -> None:
            if k == len(order):
                out.append(frozenset(self.elements[i] for i in chosen))
                return
            i = order[k]
            rec(k + 1, chosen)
            if below[i] <= chosen:
                chosen.add(i)
                rec(k + 1, chosen)
                chosen.discard(i)

        rec(0, set())
        return out

    def relabel(self, elements: Sequence) -> "FinitePoset":
        return FinitePoset(elements, self.leq_matrix)

    def _invariants(self) -> list[tuple[int, int]]:
        down = self.leq_matrix.sum(axis=0)
        up = self.leq_matrix.sum(axis=1)
        return [(int(down[i]), int(up[i])) for i in range(self.n)]

    def isomorphism(self, other: "FinitePoset") -> dict | None:
        """An order isomorphism self -> other, found by backtracking."""
        if self.n != other.n:
            return None
        inv_a, inv_b = self._invariants(), other._invariants()
        if sorted(inv_a) != sorted(inv_b):
            return None
        a, b = self.leq_matrix, other.leq_matrix
        order = sorted(range(self.n), key=lambda i: inv_a[i])
        image = [-1] * self.n
        used = [False] * self.n

        def rec(k: int) -> bool:
            if k == self.n:
                return True
            i = order[k]
            for j in range(other.n):
                if used[j] or inv_b[j] != inv_a[i]:
                    continue
                if all(
                    a[i, order[t]] == b[j, image[order[t]]] and a[order[t], i] == b[image[order[t]], j]
                    for t in range(k)
                ):
                    image[i], used[j] = j, True
                    if rec(k + 1):
                        return True
                    image[i], used[j] = -1, False
            return False

        if not rec(0):
            return None
        return {self.elements[i]: other.elements[image[i]] for i in range(self.n)}


class FiniteBoundedLattice(FinitePoset):
    """A finite poset with all binary meets and joins (and hence top and bottom)."""

    def __init__(self, elements: Iterable[Hashable], leq: Callable | np.ndarray):
        super().__init__(elements, leq)
        n = self.n
        if n == 0:
            raise SchemaError("a bounded lattice has at least one element")
        L = self.leq_matrix
        self.meet_table = self._bound_table(L)
        self.join_table = self._bound_table(L.T)
        self.bottom_index = self._extreme(L, lower=True)
        self.top_index = self._extreme(L, lower=False)

    @staticmethod
    def _bound_table(L: np.ndarray) -> np.ndarray:
        # Greatest lower bound per pair, computed on L; pass L.T for least upper bounds.
        n = L.shape[0]
        lower = L[:, :, None] & L[:, None, :]  # lower[x, a, b]: x <= a and x <= b
        size = L.sum(axis=0)  # size of each principal downset
        score = np.where(lower, size[:, None, None], -1)
        best = score.argmax(axis=0)
        if (score.max(axis=0) < 0).any():
            raise SchemaError("not a lattice: some pair has no common bound")
        ok = ~lower | L[np.arange(n)[:, None, None], best[None, :, :]]
        if not ok.all():
            a, b = np.argwhere(~ok.all(axis=0))[0]
            raise SchemaError(f"not a lattice: no unique bound for elements {a}, {b}")
        best = best.astype(np.int64)
        best.flags.writeable = False
        return best

    @staticmethod
    def _extreme(L: np.ndarray, lower: bool) -> int:
        m = L.all(axis=1) if lower else L.all(axis=0)
        return int(np.nonzero(m)[0][0])

    @property
    def bottom(self):
        return self.elements[self.bottom_index]

    @property
    def top(self):
        return self.elements[self.top_index]

    def meet(self, a, b):
        return self.elements[self.meet_table[self.index[a], self.index[b]]]

    def join(self, a, b):
        return self.elements[self.join_table[self.index[a], self.index[b]]]

    def join_index(self, idx: Iterable[int]) -> int:
        acc = self.bottom_index
        for i in idx:
            acc = int(self.join_table[acc, i])
        return acc

    def meet_index(self, idx: Iterable[int]) -> int:
        acc = self.top_index
        for i in idx:
            acc = int(self.meet_table[acc, i])
        return acc

    def join_all(self, items: Iterable):
        return self.elements[self.join_index(self.index[a] for a in items)]

    def meet_all(self, items: Iterable):
        return self.elements[self.meet_index(self.index[a] for a in items)]

    def opposite(self) -> "FiniteBoundedLattice":
        return FiniteBoundedLattice(self.elements, self.leq_matrix.T.copy())

    def distributivity_witness(self) -> tuple | None:
        """First triple (a, b, c) in index order with a^(bvc) != (a^b)v(a^c)."""
        M, J = self.meet_table, self.join_table
        lhs = M[np.arange(self.n)[:, None, None], J[None, :, :]]
        rhs = J[M[:, :, None], M[:, None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad) == 0:
            return None
        a, b, c = bad[0]
        return (self.elements[a], self.elements[b], self.elements[c])

    def is_distributive(self) -> bool:
        return self.distributivity_witness() is None


def _subsets(n: int, cap: int):
    for k in range(min(n, cap) + 1):
        yield from combinations(range(n), k)


def check_coherent_frame(L: FiniteBoundedLattice, subset_cap: int | None = None) -> Report:
    """Check the coherent-frame axioms literally.

    Compactness and infinite distributivity quantify over subsets ``S``; they
    are checked for every ``S`` of size at most `subset_cap` (all subsets
    when the cap is at least the lattice size, or when the lattice has at
    most 8 elements and no cap is given).  ``data['exhaustive']`` records
    whether every subset was covered.
    """
    n = L.n
    if subset_cap is None:
        subset_cap = n if n <= 8 else 3
    report = Report()
    report.data["exhaustive"] = subset_cap >= n
    report.data["subset_cap"] = subset_cap

    w = L.distributivity_witness()
    report.check("distributive", w is None, f"a^(bvc) != (a^b)v(a^c) at {w}")

    M, leq = L.meet_table, L.leq_matrix
    frame_problems = []
    compact = [True] * n
    compact_witness: dict[int, tuple] = {}
    for S in _subsets(n, subset_cap):
        jS = L.join_index(S)
        for a in range(n):
            if L.join_index(int(M[a, s]) for s in S) != int(M[a, jS]):
                frame_problems.append(f"a={L.elements[a]}, S={[L.elements[s] for s in S]}")
            if compact[a] and leq[a, jS]:
                # a finite T with a <= join(T); searched by increasing size
                if not any(leq[a, L.join_index(T)] for k in range(len(S) + 1) for T in combinations(S, k)):
                    compact[a] = False
                    compact_witness[a] = S
    report.record("infinite_join_distributive", frame_problems[:10])

    report.check("top_compact", compact[L.top_index], f"S={compact_witness.get(L.top_index)}")
    meet_problems = [
        f"{L.elements[a]} ^ {L.elements[b]}"
        for a in range(n)
        for b in range(n)
        if compact[a] and compact[b] and not compact[int(M[a, b])]
    ]
    report.record("compact_meets", meet_problems)
    gen_problems = [
        str(L.elements[a])
        for a in range(n)
        if L.join_index(c for c in range(n) if compact[c] and leq[c, a]) != a
    ]
    report.record("generated_by_compacts", gen_problems)
    report.data["compact"] = [L.elements[i] for i in range(n) if compact[i]]
    return report


def meet_primes(L: FiniteBoundedLattice) -> tuple:
    """Elements ``a != 1`` such that ``b ^ c <= a`` implies ``b <= a`` or ``c <= a``.

    The top satisfies the implication vacuously and is excluded, so the
    one-element lattice has no primes.
    """
    leq, M = L.leq_matrix, L.meet_table
    out = []
    for a in range(L.n):
        if a == L.top_index:
            continue
        below = leq[M, a]
        above = leq[:, a][:, None] | leq[:, a][None, :]
        if (~below | above).all():
            out.append(L.elements[a])
    return tuple(out)


def join_irreducibles(L: FiniteBoundedLattice) -> FinitePoset:
    """Poset of elements j != 0 with j = a v b only if j = a or j = b."""
    J = L.join_table
    keep = [
        j
        for j in range(L.n)
        if j != L.bottom_index and not ((J == j) & (np.arange(L.n)[:, None] != j) & (np.arange(L.n)[None, :] != j)).any()
    ]
    return FinitePoset([L.elements[j] for j in keep], L.leq_matrix[np.ix_(keep, keep)])


def downset_lattice(P: FinitePoset) -> FiniteBoundedLattice:
    downs = sorted(P.downsets(), key=lambda d: (len(d), sorted(P.index[x] for x in d)))
    return FiniteBoundedLattice(downs, lambda a, b: a <= b)


def birkhoff_round_trip(L: FiniteBoundedLattice) -> Report:
    """Rebuild a distributive lattice as the downsets of its join-irreducibles.

    ``data['iso']`` maps each element ``a`` to ``{j <= a}``.
    """
    w = L.distributivity_witness()
    if w is not None:
        raise PreconditionError(f"lattice is not distributive: witness {w}")
    J = join_irreducibles(L)
    D = downset_lattice(J)
    iso = {a: frozenset(j for j in J.elements if L.leq(j, a)) for a in L.elements}
    report = Report()
    images = list(iso.values())
    report.check("injective", len(set(images)) == len(images))
    report.check("surjective", set(images) == set(D.elements), f"{len(set(images))} of {D.n} downsets hit")
    order_problems = [
        f"{a}, {b}"
        for a in L.elements
        for b in L.elements
        if L.leq(a, b) != (iso[a] <= iso[b])
    ]
    report.record("order_preserving_and_reflecting", order_problems[:10])
    report.data.update(iso=iso, join_irreducibles=J, downsets=D)
    return report


def _extend_by_maximal(P: FinitePoset) -> list[FinitePoset]:
    n = P.n
    out = []
    for down in P.downsets():
        mat = np.zeros((n + 1, n + 1), dtype=bool)
        mat[:n, :n] = P.leq_matrix
        mat[n, n] = True
        for x in down:
            mat[P.index[x], n] = True
        out.append(FinitePoset(range(n + 1), mat))
    return out


def _dedupe(posets: list[FinitePoset]) -> list[FinitePoset]:
    buckets: dict[tuple, list[FinitePoset]] = {}
    for P in posets:
        key = tuple(sorted(P._invariants()))
        bucket = buckets.setdefault(key, [])
        if not any(Q.isomorphism(P) is not None for Q in bucket):
            bucket.append(P)
    return [P for bucket in buckets.values() for P in bucket]


_POSET_CACHE: dict[int, list[FinitePoset]] = {}


def posets_up_to_iso(n: int) -> list[FinitePoset]:
    """One representative per isomorphism class of posets on ``range(n)``.

    Every poset on n + 1 points is a poset on n points plus a maximal
    element whose strict downset is a downset.
    """
    if n in _POSET_CACHE:
        return _POSET_CACHE[n]
    if n == 0:
        result = [FinitePoset((), np.zeros((0, 0), dtype=bool))]
    else:
        result = _dedupe([Q for P in posets_up_to_iso(n - 1) for Q in _extend_by_maximal(P)])
    _POSET_CACHE[n] = result
    return result


def lattices_up_to_iso(n: int) -> list[FiniteBoundedLattice]:
    """All lattices with n elements up to isomorphism, as bounded posets 0 < middle < 1."""
    if n <= 0:
        return []
    if n == 1:
        return [FiniteBoundedLattice((0,), np.ones((1, 1), dtype=bool))]
    out = []
    for P in posets_up_to_iso(n - 2):
        k = P.n
        mat = np.zeros((n, n), dtype=bool)
        mat[0, :] = True
        mat[:, n - 1] = True
        mat[1 : k + 1, 1 : k + 1] = P.leq_matrix
        try:
            out.append(FiniteBoundedLattice(range(n), mat))
        except SchemaError:
            continue
    return out

