"""Thick and radical tensor ideals, the lattice Rad, primes and the spectrum.

Ideals are sets of labels; an object class belongs to an ideal when its
support does.  Closures are least fixpoints of three kinds of Horn rules
over label sets:

* tensor: ``m`` in the ideal forces every summand of ``m*z`` and ``z*m``;
* 2-out-of-3: two terms of a derived extriangle inside force the third;
* radical: some power of ``x`` inside forces ``x``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .errors import ConsistencyError, PreconditionError, ResourceError
from .lattices import FiniteBoundedLattice
from .presentation import CategoryPresentation, ObjectClass, derived_extriangles, stabilize, tensor_obj
from .report import Report
from .spaces import FiniteTopSpace, find_homeomorphism, is_homeomorphism

__all__ = [
    "TensorIdeal",
    "RadicalIdealLattice",
    "FiniteSpectralSpace",
    "BijectionReport",
    "DEFAULT_CAP",
    "thick_tensor_closure",
    "radical_closure",
    "enumerate_radical_ideals",
    "is_prime",
    "balmer_spectrum",
    "thomason_bijection_check",
    "spectrum_of_stabilization",
    "power_supports",
]

DEFAULT_CAP = int(os.environ.get("TENSOR_IDEALS_CAP", "20"))


@dataclass(frozen=True)
class TensorIdeal:
    members: frozenset[str]
    steps: tuple[str, ...] = field(default=(), compare=False)

    def __contains__(self, x) -> bool:
        if isinstance(x, ObjectClass):
            return x.support <= self.members
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: "TensorIdeal") -> bool:
        return self.members <= other.members

    def __str__(self) -> str:
        return "{" + ",".join(sorted(self.members)) + "}"


class _Rules:
    def __init__(self, p: CategoryPresentation):
        self.labels = p.labels
        self.tensor_out: dict[str, frozenset[str]] = {}
        for m in p.labels:
            out: set[str] = set()
            for z in p.labels:
                out |= p.entry(m, z).support | p.entry(z, m).support
            self.tensor_out[m] = frozenset(out)
        triangles: dict[tuple[frozenset, ...], str] = {}
        for g in derived_extriangles(p):
            triangles.setdefault(tuple(t.support for t in g.terms()), str(g))
        self.triangles = list(triangles.items())
        self.powers = {x: power_supports(p, x) for x in p.labels}

    def thick(self, seed: frozenset[str], log: list[str] | None = None) -> frozenset[str]:
        members = set(seed)
        changed = True
        while changed:
            changed = False
            for m in list(members):
                new = self.tensor_out[m] - members
                if new:
                    members |= new
                    changed = True
                    if log is not None:
                        log.append(f"tensor: {sorted(new)} from {m}")
            for terms, text in self.triangles:
                inside = [t <= members for t in terms]
                if sum(inside) >= 2 and not all(inside):
                    new = frozenset().union(*terms) - members
                    members |= new
                    changed = True
                    if log is not None:
                        log.append(f"2-out-of-3: {sorted(new)} from {text}")
        return frozenset(members)

    def radical(self, seed: frozenset[str], log: list[str] | None = None) -> frozenset[str]:
        members = self.thick(seed, log)
        while True:
            new = {
                x
                for x in self.labels
                if x not in members and any(s <= members for s in self.powers[x])
            }
            if not new:
                return members
            if log is not None:
                log.append(f"radical: {sorted(new)} have a tensor power inside")
            members = self.thick(members | new, log)


@lru_cache(maxsize=256)
def _rules(p: CategoryPresentation) -> _Rules:
    return _Rules(p)


@lru_cache(maxsize=4096)
def _power_supports(p: CategoryPresentation, x: str) -> tuple[frozenset[str], ...]:
    seen: list[frozenset[str]] = []
    current = frozenset({x})
    while current not in seen:
        seen.append(current)
        current = frozenset().union(*(p.entry(a, x).support for a in current)) if current else frozenset()
    return tuple(seen)


def power_supports(p: CategoryPresentation, x: str) -> tuple[frozenset[str], ...]:
    """Distinct supports of x, x*x, x*x*x, ... up to the first repeat.

    The support of x^(n+1) only depends on the support of x^n, so the
    sequence is eventually periodic and this list covers every power.
    """
    p.check_labels({x})
    return _power_supports(p, x)


def thick_tensor_closure(p: CategoryPresentation, seed, log: bool = False) -> TensorIdeal:
    seed = p.check_labels(seed)
    steps: list[str] | None = [] if log else None
    members = _rules(p).thick(seed, steps)
    return TensorIdeal(members, tuple(steps or ()))


def radical_closure(p: CategoryPresentation, seed, log: bool = False) -> TensorIdeal:
    seed = p.check_labels(seed)
    steps: list[str] | None = [] if log else None
    members = _rules(p).radical(seed, steps)
    return TensorIdeal(members, tuple(steps or ()))


def _check_cap(p: CategoryPresentation, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if len(p.labels) > cap:
        raise ResourceError(f"{len(p.labels)} labels exceed the enumeration cap {cap}")


class RadicalIdealLattice:
    """Radical thick tensor ideals ordered by inclusion, in canonical order."""

    def __init__(self, p: CategoryPresentation, ideals: list[frozenset[str]]):
        self.presentation = p
        ordered = sorted(set(ideals), key=p.sort_key)
        self.elements = tuple(TensorIdeal(m) for m in ordered)
        self.index = {I.members: i for i, I in enumerate(self.elements)}
        n = len(self.elements)
        self.meet_table = [[self.index.get(a.members & b.members, -1) for b in self.elements] for a in self.elements]
        rules = _rules(p)
        self.join_table = [
            [self.index[rules.radical(a.members | b.members)] for b in self.elements] for a in self.elements
        ]
        if any(-1 in row for row in self.meet_table):
            raise ConsistencyError("intersection of radical ideals is not radical")
        self.bottom = self.elements[0]
        self.top = self.elements[-1]
        assert n >= 1

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def meet(self, a: TensorIdeal, b: TensorIdeal) -> TensorIdeal:
        return self.elements[self.meet_table[self.index[a.members]][self.index[b.members]]]

    def join(self, a: TensorIdeal, b: TensorIdeal) -> TensorIdeal:
        return self.elements[self.join_table[self.index[a.members]][self.index[b.members]]]

    def to_lattice(self) -> FiniteBoundedLattice:
        """The same ideals as an abstract lattice; meets and joins are
        recomputed from the inclusion order alone."""
        return FiniteBoundedLattice([I.members for I in self.elements], lambda a, b: a <= b)


def enumerate_radical_ideals(p: CategoryPresentation, cap: int | None = None) -> RadicalIdealLattice:
    """All radical thick tensor ideals.

    Closed sets are listed in lectic order by the NextClosure scheme: each
    candidate is the closure of a prefix plus one label, and candidates whose
    closure adds an earlier label are pruned.
    """
    _check_cap(p, cap)
    return _enumerate(p)


@lru_cache(maxsize=256)
def _enumerate(p: CategoryPresentation) -> RadicalIdealLattice:
    rules = _rules(p)
    labels = p.labels
    n = len(labels)
    current = rules.radical(frozenset())
    found = [current]
    while True:
        for i in range(n - 1, -1, -1):
            if labels[i] in current:
                continue
            prefix = frozenset(x for x in labels[:i] if x in current)
            candidate = rules.radical(prefix | {labels[i]})
            if all((x in candidate) == (x in prefix) for x in labels[:i]):
                current = candidate
                found.append(current)
                break
        else:
            break
    return RadicalIdealLattice(p, found)


def _classes(p: CategoryPresentation, bound: int):
    for mults in product(range(bound + 1), repeat=len(p.labels)):
        yield ObjectClass(tuple((x, m) for x, m in zip(p.labels, mults) if m))


def _class_bound(n: int) -> int:
    if 3**n <= 81:
        return 2
    if 2**n <= 256:
        return 1
    return 0


def is_prime(p: CategoryPresentation, ideal, class_bound: int | None = None) -> bool:
    """Primality of a proper radical thick tensor ideal.

    The label-level test (two labels outside never tensor into the ideal)
    is the answer.  It is cross-checked against the object-level definition
    over all classes with multiplicities up to `class_bound` (default 2 for
    at most four labels, 1 for at most eight, otherwise skipped).
    """
    members = ideal.members if isinstance(ideal, TensorIdeal) else p.check_labels(ideal)
    if _rules(p).radical(members) != members:
        raise PreconditionError(f"{sorted(members)} is not a radical thick tensor ideal")
    if members == p.label_set:
        raise PreconditionError("primality is only defined for proper ideals")
    bound = _class_bound(len(p.labels)) if class_bound is None else class_bound
    return _is_prime(p, members, bound)


@lru_cache(maxsize=4096)
def _is_prime(p: CategoryPresentation, members: frozenset[str], bound: int) -> bool:
    outside = [x for x in p.labels if x not in members]
    label_route = all(not (p.entry(a, b).support <= members) for a in outside for b in outside)

    if bound > 0:
        pool = [X for X in _classes(p, bound) if not X.support <= members]
        class_route = all(not (tensor_obj(p, X, Y).support <= members) for X in pool for Y in pool)
        if class_route != label_route:
            raise ConsistencyError(f"label-level and object-level primality disagree on {sorted(members)}")
    return label_route


@dataclass
class FiniteSpectralSpace:
    """Prime ideals with the topology generated by the closed sets supp(x).

    ``supports[x]`` is the set of point indices not containing ``x``.
    ``specialization_direction`` records how ``P ~> Q`` (Q in the closure
    of P) relates to inclusion of ideals.
    """

    labels: tuple[str, ...]
    points: tuple[TensorIdeal, ...]
    supports: dict[str, frozenset[int]]
    closed_sets: frozenset[frozenset[int]]
    specialization: frozenset[tuple[int, int]]
    specialization_direction: str

    def supp(self, x) -> frozenset[int]:
        if isinstance(x, str):
            return self.supports[x]
        return frozenset().union(*(self.supports[a] for a in ObjectClass.of(x).support))

    def to_top_space(self) -> FiniteTopSpace:
        """The same space with the prime ideals (frozensets) as points."""
        pts = [P.members for P in self.points]
        return FiniteTopSpace(pts, (frozenset(pts[i] for i in c) for c in self.closed_sets))

    def __len__(self) -> int:
        return len(self.points)


def _union_closure(sets) -> set[frozenset[int]]:
    family = {frozenset()}
    for s in sets:
        family |= {f | s for f in family}
    return family


def _spectral_space(p: CategoryPresentation, primes: list[TensorIdeal]) -> FiniteSpectralSpace:
    n = len(primes)
    supports = {x: frozenset(i for i, P in enumerate(primes) if x not in P.members) for x in p.labels}
    # supp of object classes (unions of label supports) is a basis of closed sets
    basic = _union_closure(supports.values())
    closed_sets = FiniteTopSpace.from_closed_basis(range(n), basic).closed_sets

    def closure(i: int) -> frozenset[int]:
        return min((c for c in closed_sets if i in c), key=len)

    spec = frozenset((i, j) for i in range(n) for j in closure(i))
    rev = all(((i, j) in spec) == (primes[j].members <= primes[i].members) for i in range(n) for j in range(n))
    inc = all(((i, j) in spec) == (primes[i].members <= primes[j].members) for i in range(n) for j in range(n))
    direction = "reverse_inclusion" if rev else "inclusion" if inc else "mixed"
    return FiniteSpectralSpace(p.labels, tuple(primes), supports, closed_sets, spec, direction)


def balmer_spectrum(p: CategoryPresentation, cap: int | None = None) -> FiniteSpectralSpace:
    lattice = enumerate_radical_ideals(p, cap)
    primes = [I for I in lattice.elements if I.members != p.label_set and is_prime(p, I)]
    return _spectral_space(p, primes)


@dataclass
class BijectionReport:
    ideal_count: int
    thomason_count: int
    pairs: list[tuple[TensorIdeal, frozenset[int]]]
    mismatches: list[str]
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return not self.mismatches and all(self.checks.values())

    def __str__(self) -> str:
        head = f"{self.ideal_count} radical ideals <-> {self.thomason_count} Thomason subsets"
        lines = [head] + [f"{'PASS' if v else 'FAIL'} {k}" for k, v in self.checks.items()]
        lines += [f"    {m}" for m in self.mismatches[:10]]
        return "\n".join(lines)


def thomason_bijection_check(p: CategoryPresentation, cap: int | None = None) -> BijectionReport:
    """Brute-force check that supp and its inverse are mutually inverse bijections.

    In a finite space every subset is quasi-compact, so Thomason subsets are
    the unions of basic closed sets supp(x).  They are cross-checked against
    the specialization-closed subsets.
    """
    lattice = enumerate_radical_ideals(p, cap)
    space = balmer_spectrum(p, cap)
    n = len(space)
    thomason = _union_closure(space.supports.values())
    spec_closed = {
        V
        for V in (frozenset(i for i in range(n) if mask >> i & 1) for mask in range(1 << n))
        if all(j in V for (i, j) in space.specialization if i in V)
    }
    checks = {"thomason_equals_specialization_closed": thomason == spec_closed}
    mismatches: list[str] = []

    def supp_of(I: TensorIdeal) -> frozenset[int]:
        return frozenset().union(*(space.supports[x] for x in I.members)) if I.members else frozenset()

    def ideal_of(V: frozenset[int]) -> frozenset[str]:
        return frozenset(x for x in p.labels if space.supports[x] <= V)

    pairs = [(I, supp_of(I)) for I in lattice.elements]
    images = [V for _, V in pairs]
    checks["supp_lands_in_thomason"] = all(V in thomason for V in images)
    checks["supp_injective"] = len(set(images)) == len(images)
    checks["supp_surjective"] = set(images) == thomason
    for I, V in pairs:
        if ideal_of(V) != I.members:
            mismatches.append(f"{I} -> {sorted(V)} -> {sorted(ideal_of(V))}")
    for V in sorted(thomason, key=lambda s: (len(s), sorted(s))):
        back = ideal_of(V)
        if back not in lattice.index:
            mismatches.append(f"{sorted(V)} -> {sorted(back)} is not a radical ideal")
        elif supp_of(lattice.elements[lattice.index[back]]) != V:
            mismatches.append(f"{sorted(V)} -> {sorted(back)} -> {sorted(supp_of(TensorIdeal(back)))}")
    checks["round_trips"] = not mismatches
    return BijectionReport(len(lattice), len(thomason), pairs, mismatches, checks)


def spectrum_of_stabilization(p: CategoryPresentation, ideal, cap: int | None = None) -> FiniteSpectralSpace:
    """Subspace of primes containing `ideal`, checked against the spectrum of the quotient.

    Raises `ConsistencyError` if deleting the ideal's labels is not a
    homeomorphism onto the spectrum of `stabilize(p, ideal)`.
    """
    q = stabilize(p, ideal)
    ideal = p.check_labels(ideal)
    full = balmer_spectrum(p, cap)
    keep = [i for i, P in enumerate(full.points) if ideal <= P.members]
    renumber = {i: k for k, i in enumerate(keep)}
    closed = frozenset(frozenset(renumber[i] for i in c if i in renumber) for c in full.closed_sets)
    sub = FiniteSpectralSpace(
        labels=full.labels,
        points=tuple(full.points[i] for i in keep),
        supports={x: frozenset(renumber[i] for i in s if i in renumber) for x, s in full.supports.items()},
        closed_sets=closed,
        specialization=frozenset((renumber[i], renumber[j]) for i, j in full.specialization if i in renumber and j in renumber),
        specialization_direction=full.specialization_direction,
    )
    quotient = balmer_spectrum(q, cap).to_top_space()
    X = sub.to_top_space()
    deletion = {P: P - ideal for P in X.points}
    if len(set(deletion.values())) != len(deletion) or not is_homeomorphism(X, quotient, deletion):
        raise ConsistencyError(
            f"primes containing {sorted(ideal)} do not match the spectrum of the stabilization"
        )
    return sub


def stabilization_report(p: CategoryPresentation, ideal, cap: int | None = None) -> Report:
    """Stabilize, then compare the quotient spectrum with the subspace of
    primes containing the ideal (natural map and an independent search)."""
    report = Report()
    q = stabilize(p, ideal)
    quotient = balmer_spectrum(q, cap)
    report.data.update(stabilized=q, spectrum=quotient)
    try:
        sub = spectrum_of_stabilization(p, ideal, cap)
    except ConsistencyError as exc:
        report.check("natural_homeomorphism", False, str(exc))
        return report
    report.check("natural_homeomorphism", True)
    report.check(
        "homeomorphism_found",
        find_homeomorphism(sub.to_top_space(), quotient.to_top_space()) is not None,
    )
    report.data["subspace"] = sub
    return report
