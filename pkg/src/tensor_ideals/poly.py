"""Sparse multivariate polynomials over Q and matrices of them.

Monomials are tuples of ``(variable, exponent)`` pairs sorted by variable
name, so polynomials in different variable sets multiply without any ring
bookkeeping.  Coefficients are `fractions.Fraction`.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

from .errors import SchemaError

Monomial = tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]

__all__ = ["Poly", "PolyMatrix", "parse_poly", "monomials_up_to"]

ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Monomial):
    # graded, then lexicographic with earlier variables dominant
    return (-_mono_degree(m), [(v, -e) for v, e in m])


class Poly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                m = tuple(sorted((v, e) for v, e in m if e))
                clean[m] = clean.get(m, Fraction(0)) + c
                if not clean[m]:
                    del clean[m]
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({ONE: c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        raise TypeError(f"cannot make a polynomial from {x!r}")

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == ONE for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((_mono_degree(m) for m in self._terms), default=-1)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._terms for v, _ in m)

    def __add__(self, other) -> "Poly":
        other = Poly.coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = Poly.coerce(other)
        out: dict[Monomial, Fraction] = {}
        for (m1, c1), (m2, c2) in product(self._terms.items(), other._terms.items()):
            m = _mono_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            t = Fraction(c)
            for v, e in m:
                t *= Fraction(point[v]) ** e
            total += t
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, key=_mono_key):
            c = self._terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def monomials_up_to(variables: Sequence[str], degree: int) -> list[Monomial]:
    """All monomials of total degree <= degree, constant first."""
    variables = sorted(variables)
    out = []
    for exps in product(range(degree + 1), repeat=len(variables)):
        if sum(exps) <= degree:
            out.append(tuple((v, e) for v, e in zip(variables, exps) if e))
    return sorted(out, key=lambda m: (_mono_degree(m), [(v, -e) for v, e in m]))


_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Add, ast.Sub, ast.Mult,
            ast.Div, ast.Pow, ast.USub, ast.UAdd, ast.Load)


def parse_poly(text: Union[str, int], variables: Iterable[str] | None = None) -> Poly:
    """Parse ``"x^2 + 3/2*x*y - 1"``.  Division is only allowed by constants."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Poly.const(text)
    if not isinstance(text, str):
        raise SchemaError(f"polynomial must be a string, got {text!r}")
    allowed_vars = None if variables is None else set(variables)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError:
        raise SchemaError(f"cannot parse polynomial {text!r}") from None

    def ev(node) -> Poly:
        if not isinstance(node, _ALLOWED):
            raise SchemaError(f"unsupported syntax in polynomial {text!r}")
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise SchemaError(f"only integer literals are allowed in {text!r}")
            return Poly.const(node.value)
        if isinstance(node, ast.Name):
            if allowed_vars is not None and node.id not in allowed_vars:
                raise SchemaError(f"undeclared variable {node.id!r} in {text!r}")
            return Poly.var(node.id)
        if isinstance(node, ast.UnaryOp):
            inner = ev(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        left, right = ev(node.left), ev(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or right.is_zero():
                raise SchemaError(f"division by a non-constant in {text!r}")
            return left * Poly.const(1 / right.constant_value())
        if isinstance(node.op, ast.Pow):
            if not right.is_constant() or right.constant_value().denominator != 1 or right.constant_value() < 0:
                raise SchemaError(f"exponent must be a nonnegative integer in {text!r}")
            return left ** int(right.constant_value())
        raise SchemaError(f"unsupported operator in {text!r}")

    return ev(tree)


class PolyMatrix:
    """Immutable rows x cols matrix of polynomials."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(Poly.coerce(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise SchemaError("ragged matrix")

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "PolyMatrix":
        return cls([[0] * c for _ in range(r)])

    @classmethod
    def diag(cls, entries: Sequence) -> "PolyMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["PolyMatrix"]]) -> "PolyMatrix":
        rows = []
        for brow in blocks:
            heights = {b.nrows for b in brow}
            if len(heights) != 1:
                raise SchemaError("blocks in a row must have equal heights")
            for i in range(heights.pop()):
                rows.append([x for b in brow for x in b.rows[i]])
        return cls(rows)

    @classmethod
    def direct_sum(cls, *mats: "PolyMatrix") -> "PolyMatrix":
        n = sum(m.nrows for m in mats)
        c = sum(m.ncols for m in mats)
        out = [[Poly() for _ in range(c)] for _ in range(n)]
        r0 = c0 = 0
        for m in mats:
            for i in range(m.nrows):
                for j in range(m.ncols):
                    out[r0 + i][c0 + j] = m.rows[i][j]
            r0 += m.nrows
            c0 += m.ncols
        return cls(out)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise SchemaError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else []
        return PolyMatrix(
            [[sum((a * b for a, b in zip(row, col)), Poly()) for col in cols] for row in self.rows]
        )

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise SchemaError(f"cannot add {self.shape} and {other.shape}")
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix([[-a for a in r] for r in self.rows])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def scale(self, f) -> "PolyMatrix":
        f = Poly.coerce(f)
        return PolyMatrix([[f * a for a in r] for r in self.rows])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.rows)))

    def kron(self, other: "PolyMatrix") -> "PolyMatrix":
        """Kronecker product, row-major with self as the outer factor."""
        return PolyMatrix(
            [
                [self.rows[i][j] * other.rows[k][l] for j in range(self.ncols) for l in range(other.ncols)]
                for i in range(self.nrows)
                for k in range(other.nrows)
            ]
        )

    def det(self) -> Poly:
        """Determinant by expansion over column subsets, O(n 2^n) products."""
        if not self.is_square():
            raise SchemaError("determinant of a non-square matrix")
        n = self.nrows
        partial: dict[int, Poly] = {0: Poly.const(1)}
        for r in range(n):
            nxt: dict[int, Poly] = {}
            for mask, val in partial.items():
                if val.is_zero():
                    continue
                for c in range(n):
                    if mask >> c & 1 or self.rows[r][c].is_zero():
                        continue
                    sign = -1 if bin(mask >> (c + 1)).count("1") % 2 else 1
                    key = mask | 1 << c
                    nxt[key] = nxt.get(key, Poly()) + val * self.rows[r][c] * sign
            partial = nxt
        return partial.get((1 << n) - 1, Poly())

    def is_unit(self) -> bool:
        """Invertible over the polynomial ring: determinant a nonzero constant."""
        d = self.det()
        return d.is_constant() and not d.is_zero()

    @property
    def variables(self) -> frozenset[str]:
        return frozenset().union(*(a.variables for r in self.rows for a in r))

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def to_json(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, variables: Iterable[str] | None = None) -> "PolyMatrix":
        if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
            raise SchemaError("matrix must be a nonempty list of rows")
        return cls([[parse_poly(x, variables) for x in r] for r in data])

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows) + "]"

    __repr__ = __str__
