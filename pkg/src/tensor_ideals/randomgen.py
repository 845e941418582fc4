"""Random valid presentations and matrix factorizations for property runs.

Fusion tables are orthogonal sums of blocks.  A block is either a finite
commutative monoid with zero (products are a single label or zero) or a
"group algebra" block {u, P} with P*P = m*P.  Orthogonal sums of
associative unital blocks are associative and unital, so every generated
presentation validates.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations_with_replacement, product

from .mf import MatrixFactorization
from .poly import Poly, PolyMatrix
from .presentation import CategoryPresentation, ExtriangleGen, ObjectClass

__all__ = ["commutative_monoids", "random_presentation", "random_mf"]


@lru_cache(maxsize=None)
def commutative_monoids(k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All commutative monoid-with-zero tables on {0..k-1} (0 the identity),
    as k x k tables with entries in 0..k-1 or -1 for zero."""
    others = range(1, k)
    pairs = list(combinations_with_replacement(others, 2))
    out = []
    for values in product(range(-1, k), repeat=len(pairs)):
        t = [[-1] * k for _ in range(k)]
        for i in range(k):
            t[0][i] = t[i][0] = i
        for (a, b), v in zip(pairs, values):
            t[a][b] = t[b][a] = v

        def mul(a, b):
            return -1 if a < 0 or b < 0 else t[a][b]

        if all(mul(mul(a, b), c) == mul(a, mul(b, c)) for a in range(k) for b in range(k) for c in range(k)):
            out.append(tuple(map(tuple, t)))
    return tuple(out)


def _monoid_block(rng: random.Random, names: list[str]) -> tuple[str, dict]:
    table = rng.choice(commutative_monoids(len(names)))
    fusion = {}
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            v = table[i][j]
            fusion[(a, b)] = {} if v < 0 else {names[v]: 1}
    return names[0], fusion


def _group_algebra_block(rng: random.Random, names: list[str]) -> tuple[str, dict]:
    u, proj = names
    m = rng.randint(1, 3)
    return u, {(u, u): {u: 1}, (u, proj): {proj: 1}, (proj, u): {proj: 1}, (proj, proj): {proj: m}}


def _random_object(rng: random.Random, labels: list[str], max_mult: int = 2) -> dict[str, int]:
    return {x: m for x in labels if (m := rng.randint(0, max_mult)) and rng.random() < 0.6}


def random_presentation(rng: random.Random, max_labels: int = 4, max_generators: int = 3) -> CategoryPresentation:
    n = rng.randint(1, max_labels)
    labels = [f"x{i}" for i in range(n)]
    fusion: dict = {}
    units = []
    rest = list(labels)
    while rest:
        size = rng.randint(1, len(rest))
        names, rest = rest[:size], rest[size:]
        if size == 2 and rng.random() < 0.4:
            u, block = _group_algebra_block(rng, names)
        else:
            u, block = _monoid_block(rng, names)
        units.append(u)
        fusion.update(block)
    for a, b in product(labels, repeat=2):
        fusion.setdefault((a, b), {})

    pinj = [x for x in labels if rng.random() < 0.3]
    gens = []
    for _ in range(rng.randint(0, max_generators)):
        left = ObjectClass.of(_random_object(rng, labels))
        right = ObjectClass.of(_random_object(rng, labels))
        if (right.support & set(pinj)) or rng.random() < 0.3:
            middle = left + right
        else:
            middle = ObjectClass.of(_random_object(rng, labels))
        gens.append(ExtriangleGen(left, middle, right))
    return CategoryPresentation.build(
        labels, {u: 1 for u in units}, fusion, gens, pinj, symmetric=True, name=f"random{n}"
    )


def _random_poly(rng: random.Random, variables: list[str], max_degree: int = 2) -> Poly:
    terms = {}
    for _ in range(rng.randint(1, 3)):
        mono = {}
        for _ in range(rng.randint(0, max_degree)):
            v = rng.choice(variables)
            mono[v] = mono.get(v, 0) + 1
        terms[tuple(sorted(mono.items()))] = rng.choice([-2, -1, 1, 1, 2, 3])
    p = Poly(terms)
    return p if not p.is_zero() else Poly.const(1)


def _elementary(rng: random.Random, n: int, variables: list[str]) -> PolyMatrix:
    rows = [[Poly.const(int(i == j)) for j in range(n)] for i in range(n)]
    if n > 1:
        i, j = rng.sample(range(n), 2)
        rows[i][j] = _random_poly(rng, variables, 1)
    return PolyMatrix(rows)


def random_mf(rng: random.Random, variables: list[str], max_size: int = 2) -> MatrixFactorization:
    """A diagonal factorization of a random product, conjugated by unimodular
    elementary matrices so the result is generally not diagonal."""
    factors = [_random_poly(rng, variables) for _ in range(rng.randint(1, 3))]
    f = Poly.const(1)
    for q in factors:
        f = f * q
    n = rng.randint(1, max_size)
    phis, psis = [], []
    for _ in range(n):
        mask = [rng.random() < 0.5 for _ in factors]
        phi, psi = Poly.const(1), Poly.const(1)
        for q, left in zip(factors, mask):
            if left:
                phi = phi * q
            else:
                psi = psi * q
        phis.append(phi)
        psis.append(psi)
    phi, psi = PolyMatrix.diag(phis), PolyMatrix.diag(psis)
    # (E phi F, F^-1 psi E^-1) is again a factorization of f
    for _ in range(rng.randint(0, 2)):
        e = _elementary(rng, n, variables)
        e_inv = PolyMatrix(
            [[(-x if i != j else x) for j, x in enumerate(row)] for i, row in enumerate(e.rows)]
        )
        if rng.random() < 0.5:
            phi, psi = e @ phi, psi @ e_inv
        else:
            phi, psi = phi @ e, e_inv @ psi
    return MatrixFactorization(phi, psi, f, tuple(sorted(variables)))
