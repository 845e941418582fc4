"""JSON schemas for presentations, spaces, lattices and reports.

Presentation files::

    {"labels": ["k", "kC2"], "unit": {"k": 1}, "symmetric": true,
     "fusion": {"k*k": {"k": 1}, "k*kC2": {"kC2": 1}, "kC2*kC2": {"kC2": 2}},
     "extriangles": [{"left": {"k": 1}, "middle": {"kC2": 1}, "right": {"k": 1}}],
     "proj_injectives": ["kC2"]}

Fusion keys are ``"a*b"``; one order per pair suffices when ``symmetric``
is true, both orders are required otherwise.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import SchemaError
from .ideals import (
    balmer_spectrum,
    enumerate_radical_ideals,
    is_prime,
    thomason_bijection_check,
)
from .lattices import FiniteBoundedLattice, check_coherent_frame, meet_primes
from .presentation import CategoryPresentation, ObjectClass, validate
from .spaces import FiniteTopSpace, verify_spc_identity

__all__ = [
    "PRESET_NAMES",
    "load_preset",
    "field_product",
    "parse_presentation",
    "presentation_to_dict",
    "load_presentation",
    "dumps",
    "build_report",
    "parse_space",
    "space_to_dict",
    "parse_lattice",
]

PRESET_NAMES = ("proj_field", "proj_k_x_k", "dedekind_cl2", "mod_kC2", "stmod_kC2", "cc_split")


def dumps(doc: Any) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None


def _mults(data: Any, where: str) -> dict[str, int]:
    if not isinstance(data, dict):
        raise SchemaError(f"{where}: expected a multiplicity map, got {data!r}")
    for k, v in data.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise SchemaError(f"{where}: multiplicity of {k!r} must be a nonnegative integer")
    return data


def _split_key(key: str, labels: list[str]) -> tuple[str, str]:
    known = set(labels)
    splits = [
        (key[:i], key[i + 1 :])
        for i, ch in enumerate(key)
        if ch == "*" and key[:i] in known and key[i + 1 :] in known
    ]
    if len(splits) != 1:
        raise SchemaError(f"fusion key {key!r} does not name a pair of known labels")
    return splits[0]


def parse_presentation(doc: Any, name: str = "") -> CategoryPresentation:
    if not isinstance(doc, dict):
        raise SchemaError("presentation file must be a JSON object")
    required = ("labels", "unit", "fusion")
    for key in required:
        if key not in doc:
            raise SchemaError(f"presentation is missing {key!r}")
    labels = doc["labels"]
    if not isinstance(labels, list) or not all(isinstance(x, str) and x for x in labels):
        raise SchemaError("labels must be a list of nonempty strings")
    symmetric = doc.get("symmetric", True)
    if not isinstance(symmetric, bool):
        raise SchemaError("symmetric must be a boolean")
    if not isinstance(doc["fusion"], dict):
        raise SchemaError("fusion must be an object keyed by 'a*b'")
    fusion = {}
    for key, entry in doc["fusion"].items():
        a, b = _split_key(key, labels)
        fusion[(a, b)] = _mults(entry, f"fusion {key}")
    gens = []
    for i, g in enumerate(doc.get("extriangles", [])):
        if not isinstance(g, dict) or set(g) != {"left", "middle", "right"}:
            raise SchemaError(f"extriangle {i} must have exactly left, middle, right")
        gens.append(tuple(_mults(g[t], f"extriangle {i} {t}") for t in ("left", "middle", "right")))
    pinj = doc.get("proj_injectives", [])
    if not isinstance(pinj, list):
        raise SchemaError("proj_injectives must be a list of labels")
    p = CategoryPresentation.build(
        labels,
        _mults(doc["unit"], "unit"),
        fusion,
        gens,
        pinj,
        symmetric=symmetric,
        name=name,
    )
    if not symmetric:
        missing = [f"{a}*{b}" for a in labels for b in labels if (a, b) not in p.table]
        if missing:
            raise SchemaError(f"non-symmetric fusion needs both orders; missing {missing}")
    return p


def presentation_to_dict(p: CategoryPresentation) -> dict:
    pos = p.label_positions
    fusion = {}
    for (a, b), entry in p.fusion:
        if p.symmetric and pos[a] > pos[b]:
            continue
        fusion[f"{a}*{b}"] = entry.as_dict()
    return {
        "labels": list(p.labels),
        "unit": p.unit.as_dict(),
        "symmetric": p.symmetric,
        "fusion": fusion,
        "extriangles": [
            {"left": g.left.as_dict(), "middle": g.middle.as_dict(), "right": g.right.as_dict()}
            for g in p.extriangles
        ],
        "proj_injectives": p.sorted_labels(p.proj_injectives),
    }


def load_presentation(path) -> CategoryPresentation:
    return parse_presentation(_read_json(path), name=Path(path).stem)


def load_preset(name: str) -> CategoryPresentation:
    if name.startswith("proj_field_x"):
        return field_product(int(name.rsplit("x", 1)[1]))
    if name not in PRESET_NAMES:
        raise SchemaError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    text = resources.files("tensor_ideals").joinpath(f"presets/{name}.json").read_text(encoding="utf-8")
    return parse_presentation(json.loads(text), name=name)


def field_product(n: int) -> CategoryPresentation:
    """proj of a product of n fields: orthogonal idempotent labels e1..en."""
    if n < 1:
        raise SchemaError("a field product needs at least one factor")
    labels = [f"e{i}" for i in range(1, n + 1)]
    fusion = {(a, b): ({a: 1} if a == b else {}) for a in labels for b in labels}
    return CategoryPresentation.build(labels, {x: 1 for x in labels}, fusion, name=f"proj_field_x{n}")


def _labels(p: CategoryPresentation, members) -> list[str]:
    return p.sorted_labels(members)


def build_report(p: CategoryPresentation, cap: int | None = None, classify: bool = True) -> dict:
    """Ideals, primes, spectrum and (optionally) the classification checks as a JSON document."""
    v = validate(p)
    checks: dict[str, bool] = {f"validate.{k}": ok for k, ok in v.checks.items()}
    doc: dict[str, Any] = {"name": p.name, "labels": list(p.labels)}
    if not v.ok:
        doc["checks"] = checks
        doc["failures"] = v.failures
        return doc

    lattice = enumerate_radical_ideals(p, cap)
    space = balmer_spectrum(p, cap)
    doc["ideals"] = [_labels(p, I.members) for I in lattice.elements]
    doc["primes"] = [_labels(p, P.members) for P in space.points]
    n = len(space)
    doc["spectrum"] = {
        "points": [_labels(p, P.members) for P in space.points],
        "supports": {x: sorted(space.supports[x]) for x in p.labels},
        "closed_sets": sorted((sorted(c) for c in space.closed_sets), key=lambda c: (len(c), c)),
        "specialization": sorted([i, j] for i, j in space.specialization if i != j),
        "specialization_direction": space.specialization_direction,
    }
    if classify:
        bij = thomason_bijection_check(p, cap)
        doc["bijection"] = [{"ideal": _labels(p, I.members), "support": sorted(V)} for I, V in bij.pairs]
        checks.update({f"bijection.{k}": ok for k, ok in bij.checks.items()})
        L = lattice.to_lattice()
        frame = check_coherent_frame(L)
        checks.update({f"frame.{k}": ok for k, ok in frame.checks.items()})
        lattice_primes = set(meet_primes(L))
        ideal_primes = {I.members for I in lattice.elements if I.members != p.label_set and is_prime(p, I)}
        checks["meet_primes_are_prime_ideals"] = lattice_primes == ideal_primes
        spc = verify_spc_identity(p, cap)
        checks.update({f"spc_identity.{k}": ok for k, ok in spc.checks.items()})
    doc["checks"] = checks
    doc["summary"] = {"ideals": len(lattice), "points": n}
    return doc


def parse_space(doc: Any) -> FiniteTopSpace:
    """``{"points": [...], "closed_sets": [[...], ...]}``; the listed sets
    generate the closed sets under finite unions and intersections."""
    if not isinstance(doc, dict) or "points" not in doc:
        raise SchemaError("space file needs 'points' and 'closed_sets'")
    points = doc["points"]
    if not isinstance(points, list) or len(set(map(str, points))) != len(points):
        raise SchemaError("points must be a list of distinct names")
    points = [str(x) for x in points]
    known = set(points)
    gens = []
    for c in doc.get("closed_sets", []):
        c = [str(x) for x in c]
        if not set(c) <= known:
            raise SchemaError(f"closed set {c} uses unknown points")
        gens.append(c)
    return FiniteTopSpace.from_closed_basis(points, gens)


def _point_name(x) -> str:
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(_point_name(y) for y in x)) + "}"
    return str(x)


def space_to_dict(X: FiniteTopSpace) -> dict:
    names = [_point_name(x) for x in X.points]
    order = sorted(range(len(names)), key=lambda i: names[i])
    return {
        "points": [names[i] for i in order],
        "closed_sets": sorted(
            (sorted(_point_name(x) for x in c) for c in X.closed_sets), key=lambda c: (len(c), c)
        ),
        "specialization": sorted(
            [names[i], names[j]] for i, j in X.specialization_edges()
        ),
    }


def parse_lattice(doc: Any) -> FiniteBoundedLattice:
    """``{"elements": [...], "order": [[a, b], ...]}`` with a <= b; the
    reflexive-transitive closure of the listed pairs is used."""
    if not isinstance(doc, dict) or "elements" not in doc:
        raise SchemaError("lattice file needs 'elements' and 'order'")
    elements = [str(x) for x in doc["elements"]]
    idx = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    rel = [[i == j for j in range(n)] for i in range(n)]
    for pair in doc.get("order", []):
        if len(pair) != 2 or str(pair[0]) not in idx or str(pair[1]) not in idx:
            raise SchemaError(f"bad order pair {pair!r}")
        rel[idx[str(pair[0])]][idx[str(pair[1])]] = True
    for k in range(n):
        for i in range(n):
            if rel[i][k]:
                for j in range(n):
                    if rel[k][j]:
                        rel[i][j] = True
    return FiniteBoundedLattice(elements, rel)


def object_class_from_json(data: Any) -> ObjectClass:
    return ObjectClass.of(_mults(data, "object"))
