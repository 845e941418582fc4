"""Matrix factorizations over polynomial rings and the Yoshino tensor product."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import PreconditionError, SchemaError
from .poly import Poly, PolyMatrix, monomials_up_to, parse_poly
from .report import Report

__all__ = [
    "MatrixFactorization",
    "mf_validate",
    "mf_tensor_hat",
    "mf_direct_sum",
    "trivial_pair",
    "mf_iso_check",
    "find_iso_witnesses",
    "absorption_check",
    "mf_from_dict",
    "mf_to_dict",
]


@dataclass(frozen=True)
class MatrixFactorization:
    phi: PolyMatrix
    psi: PolyMatrix
    potential: Poly
    variables: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not (self.phi.is_square() and self.psi.is_square()) or self.phi.shape != self.psi.shape:
            raise SchemaError(f"phi {self.phi.shape} and psi {self.psi.shape} must be square of equal size")
        if self.phi.nrows == 0:
            raise SchemaError("a matrix factorization needs size >= 1")
        used = self.phi.variables | self.psi.variables | self.potential.variables
        if self.variables:
            extra = used - set(self.variables)
            if extra:
                raise SchemaError(f"undeclared variables {sorted(extra)}")
        else:
            object.__setattr__(self, "variables", tuple(sorted(used)))

    @property
    def size(self) -> int:
        return self.phi.nrows


def mf_validate(m: MatrixFactorization) -> Report:
    report = Report()
    target = PolyMatrix.identity(m.size).scale(m.potential)
    for name, prod in (("phi_psi", m.phi @ m.psi), ("psi_phi", m.psi @ m.phi)):
        bad = [
            f"{name}[{i}][{j}] = {prod[i, j]}, expected {target[i, j]}"
            for i in range(m.size)
            for j in range(m.size)
            if prod[i, j] != target[i, j]
        ]
        report.record(name, bad[:1])
    return report


def trivial_pair(f: Poly, n: int = 1, variables: Sequence[str] = ()) -> tuple[MatrixFactorization, MatrixFactorization]:
    """(id, f id) and (f id, id) of size n."""
    one = PolyMatrix.identity(n)
    vs = tuple(variables)
    return MatrixFactorization(one, one.scale(f), f, vs), MatrixFactorization(one.scale(f), one, f, vs)


def mf_direct_sum(*mfs: MatrixFactorization) -> MatrixFactorization:
    if not mfs:
        raise SchemaError("empty direct sum")
    f = mfs[0].potential
    if any(m.potential != f for m in mfs):
        raise PreconditionError("direct summands must share a potential")
    variables = tuple(sorted(set().union(*(m.variables for m in mfs))))
    return MatrixFactorization(
        PolyMatrix.direct_sum(*(m.phi for m in mfs)),
        PolyMatrix.direct_sum(*(m.psi for m in mfs)),
        f,
        variables,
    )


def mf_tensor_hat(a: MatrixFactorization, b: MatrixFactorization) -> MatrixFactorization:
    """Yoshino tensor product; Kronecker blocks are row-major with the left factor outer."""
    shared = set(a.variables) & set(b.variables)
    if shared:
        raise PreconditionError(f"factorizations share variables {sorted(shared)}")
    ia, ib = PolyMatrix.identity(a.size), PolyMatrix.identity(b.size)
    phi_i, psi_i = a.phi.kron(ib), a.psi.kron(ib)
    i_phi, i_psi = ia.kron(b.phi), ia.kron(b.psi)
    first = PolyMatrix.block([[phi_i, i_phi], [-i_psi, psi_i]])
    second = PolyMatrix.block([[psi_i, -i_phi], [i_psi, phi_i]])
    return MatrixFactorization(first, second, a.potential + b.potential, tuple(sorted(set(a.variables) | set(b.variables))))


def mf_iso_check(a: MatrixFactorization, b: MatrixFactorization, alpha: PolyMatrix, beta: PolyMatrix) -> bool:
    """True iff (alpha, beta) is an isomorphism a -> b: phi_b alpha = beta phi_a,
    psi_b beta = alpha psi_a, and both witnesses are units."""
    if a.potential != b.potential:
        raise PreconditionError(f"potentials differ: {a.potential} vs {b.potential}")
    n = a.size
    if b.size != n or alpha.shape != (n, n) or beta.shape != (n, n):
        raise SchemaError("witnesses must be square of the factorizations' common size")
    return (
        b.phi @ alpha == beta @ a.phi
        and b.psi @ beta == alpha @ a.psi
        and alpha.is_unit()
        and beta.is_unit()
    )


def _nullspace(rows: list[dict[int, Fraction]], nvars: int) -> list[list[Fraction]]:
    """Basis of the solution space of a sparse homogeneous system, one vector
    per free unknown, by Gauss-Jordan elimination over Q."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        row = dict(row)
        for col, prow in pivots.items():
            c = row.get(col)
            if c:
                for k, v in prow.items():
                    row[k] = row.get(k, 0) - c * v
                row = {k: v for k, v in row.items() if v}
        if not row:
            continue
        col = min(row)
        lead = row[col]
        row = {k: v / lead for k, v in row.items()}
        for pcol, prow in pivots.items():
            c = prow.get(col)
            if c:
                for k, v in row.items():
                    prow[k] = prow.get(k, 0) - c * v
                pivots[pcol] = {k: v for k, v in prow.items() if v}
        pivots[col] = row
    free = [j for j in range(nvars) if j not in pivots]
    basis = []
    for j in free:
        vec = [Fraction(0)] * nvars
        vec[j] = Fraction(1)
        for col, prow in pivots.items():
            vec[col] = -prow.get(j, Fraction(0))
        basis.append(vec)
    return basis


def find_iso_witnesses(
    a: MatrixFactorization,
    b: MatrixFactorization,
    degree: int = 2,
    coef_bound: int = 1,
    max_support: int = 4,
    max_candidates: int = 50_000,
) -> tuple[PolyMatrix, PolyMatrix] | None:
    """Search for unit witnesses with entries of degree <= ``degree``.

    The intertwining equations are linear in the entries, so for each degree
    bound d = 0, 1, ..., degree the search enumerates combinations of a basis
    of their solution space with coefficients in [-coef_bound, coef_bound]
    and at most ``max_support`` nonzero terms, in lexicographic order.  The
    first unit pair wins.  At most ``max_candidates`` combinations are tried
    in total.
    """
    if a.potential != b.potential:
        raise PreconditionError(f"potentials differ: {a.potential} vs {b.potential}")
    if a.size != b.size:
        return None
    budget = [max_candidates]
    for d in range(degree + 1):
        found = _search_degree(a, b, d, coef_bound, max_support, budget)
        if found is not None or budget[0] <= 0:
            return found
    return None


def _search_degree(a, b, degree, coef_bound, max_support, budget):
    n = a.size
    variables = sorted(set(a.variables) | set(b.variables))
    monos = monomials_up_to(variables, degree)
    nm = len(monos)

    def unknown(which: int, i: int, j: int, k: int) -> int:
        return ((which * n + i) * n + j) * nm + k

    nvars = 2 * n * n * nm
    equations: dict[tuple, dict[int, Fraction]] = {}

    def add(eq, poly: Poly, var: int, sign: int):
        for mono, c in poly.items():
            row = equations.setdefault((*eq, mono), {})
            row[var] = row.get(var, 0) + sign * c

    mono_polys = [Poly({m: 1}) for m in monos]
    # which = 0: alpha, 1: beta
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for t, mp in enumerate(mono_polys):
                    # phi_b alpha - beta phi_a
                    add(("phi", i, j), b.phi[i, k] * mp, unknown(0, k, j, t), 1)
                    add(("phi", i, j), mp * a.phi[k, j], unknown(1, i, k, t), -1)
                    # psi_b beta - alpha psi_a
                    add(("psi", i, j), b.psi[i, k] * mp, unknown(1, k, j, t), 1)
                    add(("psi", i, j), mp * a.psi[k, j], unknown(0, i, k, t), -1)
    rows = [{k: v for k, v in r.items() if v} for _, r in sorted(equations.items(), key=lambda kv: repr(kv[0]))]
    basis = _nullspace([r for r in rows if r], nvars)

    def assemble(vec) -> tuple[PolyMatrix, PolyMatrix]:
        mats = []
        for which in (0, 1):
            mats.append(
                PolyMatrix(
                    [
                        [
                            Poly({monos[t]: vec[unknown(which, i, j, t)] for t in range(nm)})
                            for j in range(n)
                        ]
                        for i in range(n)
                    ]
                )
            )
        return mats[0], mats[1]

    coefs = [c for c in range(-coef_bound, coef_bound + 1) if c]
    for s in range(1, min(max_support, len(basis)) + 1):
        for support in combinations(range(len(basis)), s):
            for cs in product(coefs, repeat=s):
                if cs[0] < 0:
                    continue  # a witness pair and its negative are equally good
                budget[0] -= 1
                if budget[0] < 0:
                    return None
                vec = [sum(c * basis[i][v] for c, i in zip(cs, support)) for v in range(nvars)]
                alpha, beta = assemble(vec)
                if alpha.is_unit() and beta.is_unit():
                    return alpha, beta
    return None


def absorption_check(
    a: MatrixFactorization,
    g: Poly,
    g_variables: Iterable[str] | None = None,
    degree: int = 2,
    coef_bound: int = 1,
    max_support: int = 4,
    max_candidates: int = 50_000,
) -> Report:
    """Search for an isomorphism a (x) (id, g id) ~ (id, h id)^n + (h id, id)^n, h = f + g."""
    report = Report()
    gv = tuple(sorted(g.variables if g_variables is None else set(g_variables)))
    unit_g, _ = trivial_pair(g, 1, gv)
    left = mf_tensor_hat(a, unit_g)
    h = a.potential + g
    first, second = trivial_pair(h, a.size, left.variables)
    right = mf_direct_sum(first, second)
    report.record("tensor_validates", mf_validate(left).failures)
    found = find_iso_witnesses(left, right, degree, coef_bound, max_support, max_candidates)
    report.check(
        "isomorphism_found",
        found is not None and mf_iso_check(left, right, *found),
        f"no unit witnesses with degree <= {degree}, coefficients in [-{coef_bound}, {coef_bound}], "
        f"support <= {max_support}",
    )
    report.data.update(tensor=left, target=right, degree=degree, coef_bound=coef_bound)
    if found is not None:
        report.data["alpha"], report.data["beta"] = found
    return report


def mf_from_dict(doc) -> MatrixFactorization:
    """``{"variables": [...], "potential": "...", "phi": [[...]], "psi": [[...]]}``."""
    if not isinstance(doc, dict) or not {"potential", "phi", "psi"} <= set(doc):
        raise SchemaError("factorization file needs 'potential', 'phi' and 'psi'")
    variables = doc.get("variables")
    if variables is not None and (
        not isinstance(variables, list) or not all(isinstance(v, str) and v.isidentifier() for v in variables)
    ):
        raise SchemaError("variables must be a list of identifiers")
    return MatrixFactorization(
        PolyMatrix.from_json(doc["phi"], variables),
        PolyMatrix.from_json(doc["psi"], variables),
        parse_poly(doc["potential"], variables),
        tuple(variables or ()),
    )


def mf_to_dict(m: MatrixFactorization) -> dict:
    return {
        "variables": list(m.variables),
        "potential": str(m.potential),
        "phi": m.phi.to_json(),
        "psi": m.psi.to_json(),
    }
