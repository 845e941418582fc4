"""Formal Yoneda extension chains, splicing and Koszul signs.

Chains are free: two chains are equal exactly when their vertex lists,
arrow words and signs agree.  The only normalization on arrow words is that
identities vanish, so the identity on ``X`` is the empty word at ``X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Literal, Sequence

from .errors import PreconditionError, SchemaError

__all__ = [
    "ArrowSymbol",
    "ArrowWord",
    "ExtensionChain",
    "splice",
    "hom_action",
    "koszul_pullback",
    "generic_chains",
    "chain_from_dict",
    "chain_to_dict",
]


@dataclass(frozen=True, order=True)
class ArrowSymbol:
    name: str
    source: str
    target: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ArrowWord:
    """Composable arrows in diagrammatic order: ``arrows[0]`` is applied first."""

    source: str
    target: str
    arrows: tuple[ArrowSymbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(self.arrows))
        at = self.source
        for a in self.arrows:
            if a.source != at:
                raise PreconditionError(f"arrow {a.name}: {a.source} -> {a.target} does not start at {at}")
            at = a.target
        if at != self.target:
            raise PreconditionError(f"word ends at {at}, not {self.target}")

    @classmethod
    def identity(cls, x: str) -> "ArrowWord":
        return cls(x, x)

    @classmethod
    def of(cls, *arrows: ArrowSymbol) -> "ArrowWord":
        if not arrows:
            raise SchemaError("use ArrowWord.identity for the empty word")
        return cls(arrows[0].source, arrows[-1].target, arrows)

    def is_identity(self) -> bool:
        return not self.arrows

    def then(self, other: "ArrowWord") -> "ArrowWord":
        """Composite: first self, then other."""
        if self.target != other.source:
            raise PreconditionError(f"cannot compose {self} ending at {self.target} with {other} starting at {other.source}")
        return ArrowWord(self.source, other.target, self.arrows + other.arrows)

    def __str__(self) -> str:
        return ";".join(a.name for a in self.arrows) if self.arrows else f"id_{self.source}"


@dataclass(frozen=True)
class ExtensionChain:
    vertices: tuple[str, ...]
    arrows: tuple[ArrowWord, ...]
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(self.vertices) < 2:
            raise SchemaError("a chain has at least two vertices")
        if len(self.arrows) != len(self.vertices) - 1:
            raise SchemaError(f"{len(self.vertices)} vertices need {len(self.vertices) - 1} arrow words")
        if self.sign not in (1, -1):
            raise SchemaError(f"sign must be +1 or -1, got {self.sign}")
        for k, w in enumerate(self.arrows):
            if (w.source, w.target) != self.vertices[k : k + 2]:
                raise PreconditionError(
                    f"word {k} runs {w.source} -> {w.target}, expected {self.vertices[k]} -> {self.vertices[k + 1]}"
                )

    @classmethod
    def of_word(cls, word: ArrowWord, sign: int = 1) -> "ExtensionChain":
        """The degree-0 chain of a single arrow word."""
        return cls((word.source, word.target), (word,), sign)

    @classmethod
    def identity(cls, x: str) -> "ExtensionChain":
        return cls.of_word(ArrowWord.identity(x))

    @property
    def degree(self) -> int:
        return len(self.vertices) - 2

    @property
    def source(self) -> str:
        return self.vertices[0]

    @property
    def target(self) -> str:
        return self.vertices[-1]

    def negate(self) -> "ExtensionChain":
        return ExtensionChain(self.vertices, self.arrows, -self.sign)

    def __str__(self) -> str:
        body = self.vertices[0]
        for w, v in zip(self.arrows, self.vertices[1:]):
            body += f" -[{w}]-> {v}"
        return f"{'+' if self.sign > 0 else '-'}[{body}]"


def splice(d: ExtensionChain, e: ExtensionChain) -> ExtensionChain:
    """Glue d: X ~> Y and e: Y ~> Z through the composite of d's last and e's first arrow."""
    if d.target != e.source:
        raise PreconditionError(f"cannot splice a chain ending at {d.target} with one starting at {e.source}")
    bridge = d.arrows[-1].then(e.arrows[0])
    return ExtensionChain(
        d.vertices[:-1] + e.vertices[1:],
        d.arrows[:-1] + (bridge,) + e.arrows[1:],
        d.sign * e.sign,
    )


def hom_action(f: ArrowWord, d: ExtensionChain, side: Literal["left", "right"] = "left") -> ExtensionChain:
    """Act on d by an arrow word.

    ``left`` composes f after the final arrow (f must start at d's target);
    ``right`` composes f before the first arrow (f must end at d's source).
    Both are splices with a degree-0 chain.
    """
    if side == "left":
        return splice(d, ExtensionChain.of_word(f))
    if side == "right":
        return splice(ExtensionChain.of_word(f), d)
    raise SchemaError(f"side must be 'left' or 'right', got {side!r}")


def koszul_pullback(d: ExtensionChain, e: ExtensionChain) -> ExtensionChain:
    """splice(e, d) with the sign twisted by (-1)^(deg d * deg e)."""
    out = splice(e, d)
    return out.negate() if d.degree * e.degree % 2 else out


def generic_chains(alphabet: Sequence[str], max_degree: int, signs: Iterable[int] = (1,)) -> Iterator[ExtensionChain]:
    """Every chain of degree <= max_degree whose arrows are single generic
    symbols named ``"a>b"``, one per ordered pair of labels."""
    signs = tuple(signs)
    for n in range(max_degree + 1):
        for verts in product(alphabet, repeat=n + 2):
            words = tuple(ArrowWord.of(ArrowSymbol(f"{a}>{b}", a, b)) for a, b in zip(verts, verts[1:]))
            for s in signs:
                yield ExtensionChain(verts, words, s)


def _word_from_json(data, source: str, target: str, alphabet: dict[str, ArrowSymbol]) -> ArrowWord:
    if not isinstance(data, list):
        raise SchemaError(f"arrow word must be a list of arrow names, got {data!r}")
    symbols = []
    for name in data:
        if name not in alphabet:
            raise SchemaError(f"unknown arrow {name!r}")
        symbols.append(alphabet[name])
    return ArrowWord(source, target, tuple(symbols))


def parse_alphabet(doc) -> dict[str, ArrowSymbol]:
    if not isinstance(doc, dict):
        raise SchemaError("'arrows' must map names to [source, target]")
    out = {}
    for name, ends in doc.items():
        if not isinstance(ends, list) or len(ends) != 2 or not all(isinstance(x, str) for x in ends):
            raise SchemaError(f"arrow {name!r} needs [source, target]")
        out[name] = ArrowSymbol(name, ends[0], ends[1])
    return out


def chain_from_dict(doc, alphabet: dict[str, ArrowSymbol]) -> ExtensionChain:
    """``{"vertices": [...], "words": [[arrow names], ...], "sign": 1}``; an
    empty word is the identity."""
    if not isinstance(doc, dict) or "vertices" not in doc or "words" not in doc:
        raise SchemaError("a chain needs 'vertices' and 'words'")
    verts = doc["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise SchemaError("vertices must be a list of labels")
    words = doc["words"]
    if not isinstance(words, list) or len(words) != len(verts) - 1:
        raise SchemaError("a chain needs one word per consecutive pair of vertices")
    return ExtensionChain(
        tuple(verts),
        tuple(_word_from_json(w, verts[k], verts[k + 1], alphabet) for k, w in enumerate(words)),
        doc.get("sign", 1),
    )


def chain_to_dict(c: ExtensionChain) -> dict:
    return {
        "vertices": list(c.vertices),
        "words": [[a.name for a in w.arrows] for w in c.arrows],
        "sign": c.sign,
        "degree": c.degree,
    }
