"""Top-level acceptance run: one PASS/FAIL line per primary criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import random
import sys
import time
from functools import cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import chains_by_start, composable_triples  # noqa: E402
from tensor_ideals.fileio import PRESET_NAMES, build_report, field_product, load_preset  # noqa: E402
from tensor_ideals.ideals import (  # noqa: E402
    balmer_spectrum,
    enumerate_radical_ideals,
    is_prime,
    spectrum_of_stabilization,
    stabilization_report,
)
from tensor_ideals.lattices import (  # noqa: E402
    birkhoff_round_trip,
    check_coherent_frame,
    lattices_up_to_iso,
    meet_primes,
    posets_up_to_iso,
)
from tensor_ideals.mf import absorption_check, mf_from_dict, mf_iso_check, mf_tensor_hat, mf_validate  # noqa: E402
from tensor_ideals.poly import PolyMatrix, parse_poly  # noqa: E402
from tensor_ideals.randomgen import random_mf, random_presentation  # noqa: E402
from tensor_ideals.spaces import (  # noqa: E402
    FiniteTopSpace,
    find_homeomorphism,
    hochster_involution,
    stone_round_trip,
    verify_spc_identity,
)
from tensor_ideals.splice import ExtensionChain, generic_chains, koszul_pullback, splice  # noqa: E402

DATA = Path(__file__).parent / "data"
RANDOM_PRESENTATIONS = 1000
RANDOM_MF_SEEDS = 500


def discrete(n: int) -> FiniteTopSpace:
    return FiniteTopSpace.from_closed_basis(range(n), [{i} for i in range(n)])


SIERPINSKI = FiniteTopSpace(["g", "c"], [set(), {"c"}, {"g", "c"}])


def timed(fn, *args):
    start = time.perf_counter()
    value = fn(*args)
    return value, time.perf_counter() - start


@cache
def random_corpus() -> tuple:
    rng = random.Random(20240601)
    return tuple(random_presentation(rng) for _ in range(RANDOM_PRESENTATIONS))


def one_point_spectra() -> str:
    worst = 0.0
    for name in ("proj_field", "dedekind_cl2"):
        X, seconds = timed(balmer_spectrum, load_preset(name))
        assert len(X) == 1, f"{name}: {len(X)} primes"
        worst = max(worst, seconds)
    assert worst < 1.0, f"took {worst:.3f}s"
    return f"1 prime each, slowest {worst * 1000:.1f} ms"


def product_formula() -> str:
    cases = [(2, load_preset("proj_k_x_k"))] + [(n, field_product(n)) for n in range(1, 6)]
    worst = 0.0
    for n, p in cases:
        X, seconds = timed(balmer_spectrum, p)
        worst = max(worst, seconds)
        assert len(X) == n, f"{p.name}: {len(X)} points, expected {n}"
        assert find_homeomorphism(X.to_top_space(), discrete(n)) is not None, f"{p.name} is not discrete"
    assert worst < 1.0, f"took {worst:.3f}s"
    return f"proj_k_x_k and n-fold products n<=5 discrete, slowest {worst * 1000:.1f} ms"


def hopf_example() -> str:
    mod = balmer_spectrum(load_preset("mod_kC2"))
    assert find_homeomorphism(mod.to_top_space(), SIERPINSKI) is not None, "mod_kC2 is not Sierpinski"
    st = balmer_spectrum(load_preset("stmod_kC2"))
    assert len(st) == 1
    sub = spectrum_of_stabilization(load_preset("mod_kC2"), {"kC2"})
    assert len(sub) == 1
    assert find_homeomorphism(sub.to_top_space(), st.to_top_space()) is not None
    report = stabilization_report(load_preset("mod_kC2"), {"kC2"})
    assert report.ok, str(report)
    return "Sierpinski; stable quotient and subspace are one point, homeomorphic"


def classification() -> str:
    for name in PRESET_NAMES:
        doc = build_report(load_preset(name))
        bad = [k for k, ok in doc["checks"].items() if not ok]
        assert not bad, f"{name}: {bad}"
    failures = 0
    for p in random_corpus():
        assert len(p.labels) <= 4 and len(p.extriangles) <= 3
        doc = build_report(p)
        failures += not all(doc["checks"].values())
    assert failures == 0, f"{failures} random failures"
    return f"{len(PRESET_NAMES)} presets + {RANDOM_PRESENTATIONS} random presentations, 0 failures"


def frame_axioms() -> str:
    corpus = [load_preset(n) for n in PRESET_NAMES] + list(random_corpus())
    for p in corpus:
        lattice = enumerate_radical_ideals(p)
        L = lattice.to_lattice()
        report = check_coherent_frame(L)
        assert report.ok, f"{p.name}: {report}"
        primes = {I.members for I in lattice if I.members != p.label_set and is_prime(p, I)}
        assert set(meet_primes(L)) == primes, f"{p.name}: meet-primes differ from primes"
    return f"{len(corpus)} presentations: coherent frames, meet-primes = primes"


def dualities() -> str:
    spaces = 0
    for n in range(7):
        for P in posets_up_to_iso(n):
            X = FiniteTopSpace.from_specialization(P.elements, P.leq)
            assert hochster_involution(X).ok and stone_round_trip(X).ok, f"poset {P.elements}"
            spaces += 1
    lattices = 0
    for n in range(1, 7):
        for L in lattices_up_to_iso(n):
            if L.is_distributive():
                assert birkhoff_round_trip(L).ok
                lattices += 1
    for name in PRESET_NAMES:
        assert verify_spc_identity(load_preset(name)).ok, name
    return f"{spaces} sober spaces, {lattices} distributive lattices, {len(PRESET_NAMES)} presets"


def matrix_factorizations() -> str:
    for seed in range(RANDOM_MF_SEEDS):
        rng = random.Random(seed)
        a, b = random_mf(rng, ["x", "y"]), random_mf(rng, ["z", "w"])
        t = mf_tensor_hat(a, b)
        assert mf_validate(t).ok, f"seed {seed}"
        assert t.potential == a.potential + b.potential, f"seed {seed}"
    load = lambda name: mf_from_dict(json.loads((DATA / name).read_text()))  # noqa: E731
    t = mf_tensor_hat(load("mf_x.json"), load("mf_y.json"))
    block = lambda rows: PolyMatrix([[parse_poly(e) for e in r] for r in rows])  # noqa: E731
    assert t.phi == block([["x", "y"], ["-y", "x"]]) and t.psi == block([["x", "-y"], ["y", "x"]])
    fixtures = json.loads((DATA / "absorption_fixtures.json").read_text())
    for fx in fixtures:
        report = absorption_check(load(fx["factorization"]), parse_poly(fx["g"]), degree=fx["degree"])
        assert report.ok, f"{fx['factorization']}: {report}"
        assert mf_iso_check(report.data["tensor"], report.data["target"], report.data["alpha"], report.data["beta"])
    return f"{RANDOM_MF_SEEDS} random tensors valid, 2x2 blocks exact, {len(fixtures)} absorption witnesses"


def splice_algebra() -> str:
    units = 0
    for chain in generic_chains("ABCDE", 3, signs=(1, -1)):
        assert splice(ExtensionChain.identity(chain.source), chain) == chain
        assert splice(chain, ExtensionChain.identity(chain.target)) == chain
        units += 1
    triples = 0
    for x, y, z in composable_triples("ABCDE", 3, 3):
        assert splice(splice(x, y), z) == splice(x, splice(y, z))
        triples += 1
    for x, y, z in composable_triples("AB", 3, 9):
        assert splice(splice(x, y), z) == splice(x, splice(y, z))
        triples += 1
    table = chains_by_start("AB", 4, signs=(1, -1))
    for i in range(5):
        for j in range(5):
            for d in table[i, "A"] + table[i, "B"]:
                for e in table[j, "A"] + table[j, "B"]:
                    if e.target != d.source:
                        continue
                    assert koszul_pullback(d, e).sign == (-1) ** (i * j) * splice(e, d).sign
    return f"unitality on {units} chains, associativity on {triples} triples, Koszul signs for i,j<=4"


CRITERIA = [
    ("one-point spectra", one_point_spectra),
    ("product formula", product_formula),
    ("Hopf example", hopf_example),
    ("classification", classification),
    ("frame axioms", frame_axioms),
    ("duality identities", dualities),
    ("matrix factorizations", matrix_factorizations),
    ("splice algebra", splice_algebra),
]


def evaluate(name, fn) -> tuple[bool, str]:
    try:
        detail = fn()
    except AssertionError as exc:
        return False, f"FAIL {name}: {exc}"
    return True, f"PASS {name}: {detail}"


@pytest.mark.parametrize("name, fn", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, fn, capsys):
    ok, line = evaluate(name, fn)
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(name, fn) for name, fn in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
