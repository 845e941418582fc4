"""Finite topological spaces, Stone duality and Hochster duality.

Topologies are stored by their closed sets.  Opens only appear at the
boundary with frames: `omega` builds the open-set lattice.
"""

from __future__ import annotations

from typing import Hashable, Iterable

from .errors import ConsistencyError, PreconditionError, SchemaError
from .lattices import FiniteBoundedLattice, meet_primes
from .report import Report

__all__ = [
    "FiniteTopSpace",
    "omega",
    "pt_space",
    "hochster_dual",
    "hochster_point_map",
    "find_homeomorphism",
    "is_homeomorphism",
    "stone_round_trip",
    "hochster_involution",
    "verify_spc_identity",
]


def _close_family(sets: Iterable[frozenset], whole: frozenset) -> frozenset[frozenset]:
    family = {frozenset(), whole, *sets}
    frontier = list(family)
    while frontier:
        new = []
        current = list(family)
        for a in frontier:
            for b in current:
                for c in (a | b, a & b):
                    if c not in family:
                        family.add(c)
                        new.append(c)
        frontier = new
    return frozenset(family)


class FiniteTopSpace:
    def __init__(self, points: Iterable[Hashable], closed_sets: Iterable[Iterable[Hashable]]):
        self.points = tuple(points)
        self.whole = frozenset(self.points)
        if len(self.whole) != len(self.points):
            raise SchemaError("duplicate points")
        closed = frozenset(frozenset(c) for c in closed_sets)
        for c in closed:
            if not c <= self.whole:
                raise SchemaError(f"closed set {set(c)} has unknown points")
        if frozenset() not in closed or self.whole not in closed:
            raise SchemaError("closed sets must contain the empty set and the whole space")
        for a in closed:
            for b in closed:
                if a | b not in closed or a & b not in closed:
                    raise SchemaError("closed sets are not closed under finite unions and intersections")
        self.closed_sets = closed
        self.index = {x: i for i, x in enumerate(self.points)}

    @classmethod
    def from_closed_basis(cls, points: Iterable[Hashable], generators: Iterable[Iterable[Hashable]]) -> "FiniteTopSpace":
        """Coarsest topology in which every generator is closed."""
        points = tuple(points)
        return cls(points, _close_family((frozenset(g) for g in generators), frozenset(points)))

    @classmethod
    def from_specialization(cls, points: Iterable[Hashable], below) -> "FiniteTopSpace":
        """Space whose closed sets are the sets down-closed under ``below(x, y)``,
        read as ``x`` lies in the closure of ``y``."""
        points = tuple(points)
        return cls.from_closed_basis(points, (frozenset(x for x in points if below(x, y)) for y in points))

    def __len__(self) -> int:
        return len(self.points)

    def closure(self, subset: Iterable[Hashable]) -> frozenset:
        subset = frozenset(subset)
        return min((c for c in self.closed_sets if subset <= c), key=len)

    def point_closure(self, x) -> frozenset:
        return self.closure({x})

    def specializes(self, x, y) -> bool:
        """x ~> y: y lies in the closure of x."""
        return y in self.point_closure(x)

    def opens(self) -> frozenset[frozenset]:
        return frozenset(self.whole - c for c in self.closed_sets)

    def minimal_open(self, x) -> frozenset:
        return min((u for u in self.opens() if x in u), key=len)

    def specialization_edges(self) -> list[tuple[int, int]]:
        """Covering pairs (i, j) of the specialization order, i ~> j, i != j."""
        pts = self.points
        rel = {(i, j) for i, x in enumerate(pts) for j, y in enumerate(pts) if i != j and self.specializes(x, y)}
        return sorted(
            (i, j)
            for i, j in rel
            if not any((i, k) in rel and (k, j) in rel for k in range(len(pts)))
        )

    def irreducible_closed_sets(self) -> list[frozenset]:
        out = []
        for c in self.closed_sets:
            if not c:
                continue
            proper = [d for d in self.closed_sets if d < c]
            if not any(a | b == c for a in proper for b in proper):
                out.append(c)
        return out

    def sobriety_witness(self) -> frozenset | None:
        """An irreducible closed set without exactly one generic point, if any."""
        for c in self.irreducible_closed_sets():
            generic = [x for x in c if self.point_closure(x) == c]
            if len(generic) != 1:
                return c
        return None

    def is_sober(self) -> bool:
        return self.sobriety_witness() is None

    def is_spectral(self) -> bool:
        # finite: quasi-compact, all opens quasi-compact and closed under intersection
        return self.is_sober()

    def __repr__(self) -> str:
        return f"FiniteTopSpace({len(self.points)} points, {len(self.closed_sets)} closed sets)"


def omega(X: FiniteTopSpace) -> FiniteBoundedLattice:
    """The frame of open sets, ordered by inclusion."""
    pos = X.index
    opens = sorted(X.opens(), key=lambda u: (len(u), sorted(pos[x] for x in u)))
    return FiniteBoundedLattice(opens, lambda a, b: a <= b)


def pt_space(L: FiniteBoundedLattice) -> FiniteTopSpace:
    """Meet-prime elements with closed sets V(a) = {p : a <= p}."""
    w = L.distributivity_witness()
    if w is not None:
        raise PreconditionError(f"lattice is not distributive: witness {w}")
    points = meet_primes(L)
    X = FiniteTopSpace.from_closed_basis(points, (frozenset(p for p in points if L.leq(a, p)) for a in L.elements))
    witness = X.sobriety_witness()
    if witness is not None:
        raise ConsistencyError(f"prime spectrum is not sober at {set(witness)}")
    return X


def hochster_dual(X: FiniteTopSpace) -> FiniteTopSpace:
    """pt of the opposite of the lattice of quasi-compact opens.

    Every open of a finite space is quasi-compact, so the lattice of compact
    elements of the open-set frame is the whole frame.  Points of the dual
    are the minimal open neighbourhoods of points of ``X``.
    """
    witness = X.sobriety_witness()
    if witness is not None:
        raise PreconditionError(f"space is not sober: irreducible closed set {set(witness)} has no unique generic point")
    return pt_space(omega(X).opposite())


def hochster_point_map(X: FiniteTopSpace) -> dict:
    """The bijection X -> X^vee, x -> minimal open neighbourhood of x."""
    return {x: X.minimal_open(x) for x in X.points}


def is_homeomorphism(X: FiniteTopSpace, Y: FiniteTopSpace, f: dict) -> bool:
    if len(X) != len(Y) or set(f) != X.whole or set(f.values()) != Y.whole:
        return False
    image = frozenset(frozenset(f[x] for x in c) for c in X.closed_sets)
    return image == Y.closed_sets


def find_homeomorphism(X: FiniteTopSpace, Y: FiniteTopSpace) -> dict | None:
    """Exhaustive bijection search, pruned by closure sizes and specialization."""
    if len(X) != len(Y) or len(X.closed_sets) != len(Y.closed_sets):
        return None
    xs, ys = X.points, Y.points
    cx = {x: X.point_closure(x) for x in xs}
    cy = {y: Y.point_closure(y) for y in ys}
    ox = {x: len(X.minimal_open(x)) for x in xs}
    oy = {y: len(Y.minimal_open(y)) for y in ys}
    sig_x = {x: (len(cx[x]), ox[x]) for x in xs}
    sig_y = {y: (len(cy[y]), oy[y]) for y in ys}
    if sorted(sig_x.values()) != sorted(sig_y.values()):
        return None
    order = sorted(xs, key=lambda x: sig_x[x])
    f: dict = {}
    used: set = set()

    def rec(k: int) -> bool:
        if k == len(order):
            return is_homeomorphism(X, Y, f)
        x = order[k]
        for y in ys:
            if y in used or sig_y[y] != sig_x[x]:
                continue
            if all((u in cx[x]) == (f[u] in cy[y]) and (x in cx[u]) == (y in cy[f[u]]) for u in order[:k]):
                f[x] = y
                used.add(y)
                if rec(k + 1):
                    return True
                del f[x]
                used.discard(y)
        return False

    return dict(f) if rec(0) else None


def stone_round_trip(X: FiniteTopSpace) -> Report:
    """pt(Omega(X)) is homeomorphic to X via x -> X minus the closure of x."""
    report = Report()
    Y = pt_space(omega(X))
    natural = {x: X.whole - X.point_closure(x) for x in X.points}
    report.check("points_are_primes", set(natural.values()) == set(Y.points) and len(set(natural.values())) == len(X))
    report.check("natural_map_homeomorphism", is_homeomorphism(X, Y, natural))
    report.check("homeomorphism_found", find_homeomorphism(X, Y) is not None)
    report.data["space"] = Y
    return report


def hochster_involution(X: FiniteTopSpace) -> Report:
    """(X^vee)^vee is homeomorphic to X, and X^vee reverses specialization."""
    report = Report()
    D = hochster_dual(X)
    DD = hochster_dual(D)
    f = hochster_point_map(X)
    g = hochster_point_map(D)
    report.check("dual_point_map", set(f.values()) == set(D.points))
    reversed_ok = all(
        X.specializes(x, y) == D.specializes(f[y], f[x]) for x in X.points for y in X.points
    )
    report.check("specialization_reversed", reversed_ok)
    report.check("double_dual_natural", is_homeomorphism(X, DD, {x: g[f[x]] for x in X.points}))
    report.check("double_dual_homeomorphic", find_homeomorphism(X, DD) is not None)
    report.data.update(dual=D, double_dual=DD)
    return report


def verify_spc_identity(p, cap: int | None = None) -> Report:
    """Compare the Balmer spectrum with the Hochster dual of pt(Rad(p)).

    The matching sends a prime ideal P to the minimal open neighbourhood of
    P in pt(Rad(p)); it must be a homeomorphism.
    """
    from .ideals import balmer_spectrum, enumerate_radical_ideals

    kw = {} if cap is None else {"cap": cap}
    spc = balmer_spectrum(p, **kw).to_top_space()
    rad = enumerate_radical_ideals(p, **kw).to_lattice()
    pt = pt_space(rad)
    dual = hochster_dual(pt)
    report = Report()
    report.check(
        "primes_match",
        set(pt.points) == set(spc.points),
        f"prime ideals {sorted(map(sorted, spc.points))} vs prime elements {sorted(map(sorted, pt.points))}",
    )
    if set(pt.points) == set(spc.points):
        match = {P: pt.minimal_open(P) for P in spc.points}
        report.check("natural_homeomorphism", is_homeomorphism(spc, dual, match))
    report.check("homeomorphism_found", find_homeomorphism(spc, dual) is not None)
    report.data.update(spectrum=spc, dual=dual)
    return report
