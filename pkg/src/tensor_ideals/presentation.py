"""Finite presentations of tensor extriangulated categories.

A presentation is skeletal: objects are multisets of indecomposable labels,
the tensor product is a fusion table extended bilinearly, and extriangles are
listed generators closed under tensoring with indecomposables.  Morphisms,
extension groups and the connecting maps of extriangles are not represented.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Union

from .errors import PreconditionError, SchemaError
from .report import Report

__all__ = [
    "ObjectClass",
    "ExtriangleGen",
    "CategoryPresentation",
    "ValidationReport",
    "validate",
    "tensor_obj",
    "derived_extriangles",
    "stabilize",
]


@dataclass(frozen=True, order=True)
class ObjectClass:
    """Isomorphism class of an object: a finite multiset of labels.

    The zero object is the empty multiset.
    """

    items: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        for label, mult in self.items:
            if not isinstance(label, str) or not label:
                raise SchemaError(f"bad label {label!r}")
            if not isinstance(mult, int) or mult <= 0:
                raise SchemaError(f"multiplicity of {label!r} must be a positive int, got {mult!r}")

    @classmethod
    def of(cls, data: Union["ObjectClass", Mapping[str, int], Iterable[str], str, None] = None) -> "ObjectClass":
        """Build a class from a multiplicity map, an iterable of labels or a single label."""
        if data is None:
            return cls()
        if isinstance(data, ObjectClass):
            return data
        if isinstance(data, str):
            data = [data]
        if isinstance(data, Mapping):
            counts = Counter()
            for label, mult in data.items():
                if not isinstance(mult, int) or isinstance(mult, bool) or mult < 0:
                    raise SchemaError(f"multiplicity of {label!r} must be a nonnegative int, got {mult!r}")
                counts[label] += mult
        else:
            counts = Counter(data)
        return cls(tuple(sorted((k, v) for k, v in counts.items() if v > 0)))

    @classmethod
    def zero(cls) -> "ObjectClass":
        return cls()

    @cached_property
    def support(self) -> frozenset[str]:
        return frozenset(label for label, _ in self.items)

    def as_dict(self) -> dict[str, int]:
        return dict(self.items)

    def mult(self, label: str) -> int:
        return self.as_dict().get(label, 0)

    def is_zero(self) -> bool:
        return not self.items

    def __add__(self, other: "ObjectClass") -> "ObjectClass":
        counts = Counter(dict(self.items))
        counts.update(dict(other.items))
        return ObjectClass(tuple(sorted(counts.items())))

    def scale(self, n: int) -> "ObjectClass":
        if n < 0:
            raise ValueError("negative multiple of an object")
        if n == 0:
            return ObjectClass()
        return ObjectClass(tuple((k, v * n) for k, v in self.items))

    def delete(self, labels: Iterable[str]) -> "ObjectClass":
        drop = set(labels)
        return ObjectClass(tuple((k, v) for k, v in self.items if k not in drop))

    def __str__(self) -> str:
        if not self.items:
            return "0"
        return " + ".join(label if m == 1 else f"{m}*{label}" for label, m in self.items)


@dataclass(frozen=True)
class ExtriangleGen:
    """Object classes of an extriangle left -> middle -> right."""

    left: ObjectClass
    middle: ObjectClass
    right: ObjectClass

    def is_split(self) -> bool:
        return self.middle == self.left + self.right

    def terms(self) -> tuple[ObjectClass, ObjectClass, ObjectClass]:
        return (self.left, self.middle, self.right)

    def __str__(self) -> str:
        return f"({self.left} -> {self.middle} -> {self.right})"


@dataclass(frozen=True)
class CategoryPresentation:
    labels: tuple[str, ...]
    unit: ObjectClass
    fusion: tuple[tuple[tuple[str, str], ObjectClass], ...]
    extriangles: tuple[ExtriangleGen, ...] = ()
    proj_injectives: frozenset[str] = frozenset()
    symmetric: bool = True
    name: str = field(default="", compare=False)

    @classmethod
    def build(
        cls,
        labels: Iterable[str],
        unit,
        fusion: Mapping[tuple[str, str], object],
        extriangles: Iterable = (),
        proj_injectives: Iterable[str] = (),
        symmetric: bool = True,
        name: str = "",
    ) -> "CategoryPresentation":
        """Normalising constructor.

        For symmetric presentations one order of each fusion pair suffices;
        the other is filled in.  Entries may be anything `ObjectClass.of`
        accepts; extriangles may be `ExtriangleGen` or (left, middle, right).
        """
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise SchemaError(f"duplicate labels in {labels}")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise SchemaError(f"bad label {label!r}")
        known = set(labels)

        def obj(data) -> ObjectClass:
            x = ObjectClass.of(data)
            unknown = x.support - known
            if unknown:
                raise SchemaError(f"unknown labels {sorted(unknown)} in {x}")
            return x

        table: dict[tuple[str, str], ObjectClass] = {}
        for (a, b), entry in fusion.items():
            if a not in known or b not in known:
                raise SchemaError(f"fusion entry {a}*{b} uses an unknown label")
            table[(a, b)] = obj(entry)
        if symmetric:
            for (a, b), entry in list(table.items()):
                if (b, a) not in table:
                    table[(b, a)] = entry
        gens = []
        for g in extriangles:
            if not isinstance(g, ExtriangleGen):
                g = ExtriangleGen(*(obj(t) for t in g))
            else:
                for t in g.terms():
                    obj(t)
            gens.append(g)
        pinj = frozenset(proj_injectives)
        if pinj - known:
            raise SchemaError(f"unknown projective-injective labels {sorted(pinj - known)}")
        return cls(
            labels=labels,
            unit=obj(unit),
            fusion=tuple(sorted(table.items())),
            extriangles=tuple(gens),
            proj_injectives=pinj,
            symmetric=bool(symmetric),
            name=name,
        )

    @cached_property
    def table(self) -> dict[tuple[str, str], ObjectClass]:
        return dict(self.fusion)

    @cached_property
    def label_set(self) -> frozenset[str]:
        return frozenset(self.labels)

    def entry(self, a: str, b: str) -> ObjectClass:
        try:
            return self.table[(a, b)]
        except KeyError:
            if a not in self.label_set or b not in self.label_set:
                raise SchemaError(f"unknown label in {a}*{b}") from None
            raise SchemaError(f"fusion table has no entry for {a}*{b}") from None

    def check_labels(self, labels: Iterable[str]) -> frozenset[str]:
        labels = frozenset(labels)
        unknown = labels - self.label_set
        if unknown:
            raise SchemaError(f"unknown labels {sorted(unknown)}")
        return labels

    def sort_key(self, labels: Iterable[str]) -> tuple:
        """Canonical ordering key for a label set: size first, then label positions."""
        pos = self.label_positions
        idx = sorted(pos[x] for x in labels)
        return (len(idx), idx)

    @cached_property
    def label_positions(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.labels)}

    def sorted_labels(self, labels: Iterable[str]) -> list[str]:
        pos = self.label_positions
        return sorted(labels, key=pos.__getitem__)


ValidationReport = Report


def tensor_obj(p: CategoryPresentation, x: ObjectClass, y: ObjectClass) -> ObjectClass:
    """Tensor product of object classes, bilinear over the fusion table."""
    p.check_labels(x.support | y.support)
    counts: Counter = Counter()
    for (a, m), (b, n) in product(x.items, y.items):
        for c, k in p.entry(a, b).items:
            counts[c] += m * n * k
    return ObjectClass(tuple(sorted(counts.items())))


def _as_obj(p: CategoryPresentation, label: str) -> ObjectClass:
    return ObjectClass(((label, 1),))


def validate(p: CategoryPresentation) -> ValidationReport:
    """Check the presentation invariants.

    Unknown labels raise `SchemaError`; every other problem is reported.
    """
    p.check_labels(p.unit.support)
    p.check_labels(p.proj_injectives)
    for (a, b), entry in p.fusion:
        p.check_labels({a, b} | entry.support)
    for g in p.extriangles:
        for t in g.terms():
            p.check_labels(t.support)

    report = ValidationReport()
    missing = [f"{a}*{b}" for a, b in product(p.labels, repeat=2) if (a, b) not in p.table]
    report.record("fusion_total", missing)
    if missing:
        return report

    unit_problems = []
    for a in p.labels:
        x = _as_obj(p, a)
        if tensor_obj(p, p.unit, x) != x:
            unit_problems.append(f"({p.unit},{a}): {p.unit}*{a} = {tensor_obj(p, p.unit, x)}")
        if tensor_obj(p, x, p.unit) != x:
            unit_problems.append(f"({a},{p.unit}): {a}*{p.unit} = {tensor_obj(p, x, p.unit)}")
    report.record("unit_law", unit_problems)

    assoc_problems = []
    for a, b, c in product(p.labels, repeat=3):
        xa, xb, xc = (_as_obj(p, t) for t in (a, b, c))
        lhs = tensor_obj(p, tensor_obj(p, xa, xb), xc)
        rhs = tensor_obj(p, xa, tensor_obj(p, xb, xc))
        if lhs != rhs:
            assoc_problems.append(f"({a},{b},{c}): {lhs} != {rhs}")
    report.record("associativity", assoc_problems)

    if p.symmetric:
        sym_problems = [
            f"({a},{b})"
            for a, b in product(p.labels, repeat=2)
            if p.entry(a, b) != p.entry(b, a)
        ]
        report.record("symmetry", sym_problems)

    pinj_problems = [
        str(g)
        for g in p.extriangles
        if (g.right.support & p.proj_injectives) and not g.is_split()
    ]
    report.record("proj_injectives_sound", pinj_problems)
    return report


def derived_extriangles(p: CategoryPresentation) -> list[ExtriangleGen]:
    """Generators together with their tensor products with every label.

    Non-symmetric presentations are tensored on both sides.
    """
    seen: dict[ExtriangleGen, None] = dict.fromkeys(p.extriangles)
    for g in p.extriangles:
        for z in p.labels:
            xz = _as_obj(p, z)
            seen.setdefault(ExtriangleGen(*(tensor_obj(p, t, xz) for t in g.terms())))
            if not p.symmetric:
                seen.setdefault(ExtriangleGen(*(tensor_obj(p, xz, t) for t in g.terms())))
    return list(seen)


def _split_trivial(g: ExtriangleGen) -> bool:
    return g.is_split() and (g.left.is_zero() or g.right.is_zero())


def stabilize(p: CategoryPresentation, ideal: Iterable[str]) -> CategoryPresentation:
    """Quotient by a tensor ideal of projective-injective labels.

    Labels in the ideal become zero.  Generators that only become trivial
    through the deletion are dropped.
    """
    ideal = p.check_labels(ideal)
    if not ideal <= p.proj_injectives:
        raise PreconditionError(
            f"labels {p.sorted_labels(ideal - p.proj_injectives)} are not projective-injective"
        )
    for i, z in product(p.sorted_labels(ideal), p.labels):
        for entry in (p.entry(i, z), p.entry(z, i)):
            if not entry.support <= ideal:
                raise PreconditionError(f"{sorted(ideal)} is not a tensor ideal: {i}*{z} = {entry}")
    if not ideal:
        return p

    gens = []
    for g in p.extriangles:
        image = ExtriangleGen(*(t.delete(ideal) for t in g.terms()))
        if image != g and _split_trivial(image):
            continue
        if image not in gens:
            gens.append(image)
    keep = [x for x in p.labels if x not in ideal]
    return CategoryPresentation(
        labels=tuple(keep),
        unit=p.unit.delete(ideal),
        fusion=tuple((k, v.delete(ideal)) for k, v in p.fusion if k[0] not in ideal and k[1] not in ideal),
        extriangles=tuple(gens),
        proj_injectives=p.proj_injectives - ideal,
        symmetric=p.symmetric,
        name=f"{p.name}/{{{','.join(p.sorted_labels(ideal))}}}" if p.name else "",
    )
