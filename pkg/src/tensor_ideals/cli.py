"""Command-line interface.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on malformed
input, unmet preconditions or usage errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .dot import emit_dot
from .errors import ConsistencyError, EngineError
from .fileio import (
    PRESET_NAMES,
    _read_json,
    build_report,
    dumps,
    load_preset,
    load_presentation,
    parse_lattice,
    parse_space,
    presentation_to_dict,
    space_to_dict,
)
from .ideals import balmer_spectrum, enumerate_radical_ideals, stabilization_report
from .lattices import birkhoff_round_trip
from .mf import absorption_check, mf_from_dict, mf_tensor_hat, mf_to_dict, mf_validate
from .poly import parse_poly
from .presentation import validate
from .randomgen import random_presentation
from .spaces import hochster_dual, hochster_involution, stone_round_trip, verify_spc_identity
from .splice import chain_from_dict, chain_to_dict, koszul_pullback, parse_alphabet, splice

__all__ = ["main", "run_command", "build_parser"]


def _presentation(arg: str):
    """A presentation file, or the name of a bundled preset."""
    path = Path(arg)
    if path.exists():
        return load_presentation(path)
    stem = path.stem if path.suffix == ".json" else path.name
    if stem in PRESET_NAMES or stem.startswith("proj_field_x"):
        return load_preset(stem)
    return load_presentation(path)  # raises a schema error naming the file


class _Out:
    """Collects human-readable lines and the JSON document of one command."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.lines: list[str] = []
        self.doc: dict[str, Any] = {}

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def finish(self, ok: bool) -> int:
        target = getattr(self.args, "json", None)
        if target == "-":
            sys.stdout.write(dumps(self.doc))
        else:
            if self.lines and getattr(self.args, "dot", None) != "-":
                print("\n".join(self.lines))
            if target:
                Path(target).write_text(dumps(self.doc), encoding="utf-8")
        return 0 if ok else 1


def _write_dot(target: str, text: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def _checks_lines(out: _Out, checks: dict[str, bool]) -> None:
    for name, passed in checks.items():
        out.say(f"  {'PASS' if passed else 'FAIL'} {name}")


def cmd_validate(args, out: _Out) -> int:
    p = _presentation(args.file)
    report = validate(p)
    out.doc = {"name": p.name, "checks": report.checks, "failures": report.failures}
    out.say(f"{p.name}: {len(p.labels)} labels, {len(p.extriangles)} extriangle generators")
    out.say(str(report))
    return out.finish(report.ok)


def cmd_ideals(args, out: _Out) -> int:
    p = _presentation(args.file)
    lattice = enumerate_radical_ideals(p, args.cap)
    ideals = [p.sorted_labels(I.members) for I in lattice.elements]
    out.doc = {"name": p.name, "ideals": ideals}
    out.say(f"{p.name}: {len(ideals)} radical thick tensor ideals")
    for members in ideals:
        out.say("  {" + ",".join(members) + "}")
    if args.dot:
        _write_dot(args.dot, emit_dot(lattice))
    return out.finish(True)


def _spectrum_lines(out: _Out, doc: dict) -> None:
    spec = doc["spectrum"]
    out.say(f"{doc['name']}: {len(spec['points'])} prime(s), {len(doc['ideals'])} radical ideal(s)")
    for i, P in enumerate(spec["points"]):
        out.say(f"  [{i}] {{{','.join(P)}}}")
    edges = ", ".join(f"{i}~>{j}" for i, j in spec["specialization"]) or "none"
    out.say(f"  specialization: {edges} ({spec['specialization_direction']})")


def cmd_spectrum(args, out: _Out) -> int:
    p = _presentation(args.file)
    doc = build_report(p, args.cap, classify=False)
    out.doc = doc
    if "spectrum" not in doc:
        out.say(f"{p.name}: presentation does not validate")
        _checks_lines(out, doc["checks"])
        return out.finish(False)
    _spectrum_lines(out, doc)
    if args.dot:
        _write_dot(args.dot, emit_dot(balmer_spectrum(p, args.cap), p.name))
    return out.finish(True)


def cmd_classify(args, out: _Out) -> int:
    if args.random:
        rng = random.Random(args.seed)
        failures = []
        for k in range(args.random):
            p = random_presentation(rng)
            doc = build_report(p, args.cap)
            bad = [name for name, ok in doc["checks"].items() if not ok]
            if bad:
                failures.append({"index": k, "presentation": presentation_to_dict(p), "failed": bad})
        out.doc = {"random": args.random, "seed": args.seed, "failures": failures}
        out.say(f"classified {args.random} random presentations (seed {args.seed}): {len(failures)} failure(s)")
        for f in failures[:10]:
            out.say(f"  #{f['index']}: {', '.join(f['failed'])}")
        return out.finish(not failures)
    if not args.file:
        raise argparse.ArgumentTypeError("classify needs a file or --random N")
    p = _presentation(args.file)
    doc = build_report(p, args.cap)
    out.doc = doc
    if "spectrum" in doc:
        _spectrum_lines(out, doc)
        out.say(f"  bijection: {len(doc['ideals'])} ideals <-> {len(doc['bijection'])} Thomason subsets")
    _checks_lines(out, doc["checks"])
    return out.finish(all(doc["checks"].values()))


def cmd_stabilize(args, out: _Out) -> int:
    p = _presentation(args.file)
    ideal = [x for x in args.ideal.split(",") if x]
    report = stabilization_report(p, ideal, args.cap)
    q = report.data["stabilized"]
    spc = report.data["spectrum"]
    out.doc = {
        "name": p.name,
        "ideal": p.sorted_labels(ideal),
        "stabilized": presentation_to_dict(q),
        "primes": [q.sorted_labels(P.members) for P in spc.points],
        "checks": report.checks,
    }
    out.say(f"{p.name} / {{{','.join(p.sorted_labels(ideal))}}}: labels {list(q.labels)}")
    out.say(f"  {len(spc)} prime(s): " + ", ".join("{" + ",".join(q.sorted_labels(P.members)) + "}" for P in spc.points))
    out.say(str(report))
    return out.finish(report.ok)


def cmd_hochster(args, out: _Out) -> int:
    if args.from_spectrum:
        p = _presentation(args.from_spectrum)
        X = balmer_spectrum(p, args.cap).to_top_space()
        spc = verify_spc_identity(p, args.cap)
    elif args.file:
        X = parse_space(_read_json(args.file))
        spc = None
    else:
        raise argparse.ArgumentTypeError("hochster needs a space file or --from-spectrum FILE")
    dual = hochster_dual(X)
    report = hochster_involution(X)
    report.merge(stone_round_trip(X), "stone.")
    if spc is not None:
        report.merge(spc, "spc_identity.")
    out.doc = {"space": space_to_dict(X), "dual": space_to_dict(dual), "checks": report.checks}
    if args.dot:
        _write_dot(args.dot, emit_dot(X))
    out.say(f"space: {len(X)} point(s), {len(X.closed_sets)} closed set(s); dual has {len(dual)} point(s)")
    out.say(str(report))
    return out.finish(report.ok)


def cmd_birkhoff(args, out: _Out) -> int:
    L = parse_lattice(_read_json(args.file))
    report = birkhoff_round_trip(L)
    jis = report.data["join_irreducibles"]
    out.doc = {
        "elements": [str(x) for x in L.elements],
        "join_irreducibles": [str(x) for x in jis.elements],
        "representation": {str(x): sorted(map(str, s)) for x, s in report.data["iso"].items()},
        "checks": report.checks,
    }
    out.say(f"{L.n} elements, {jis.n} join-irreducible(s)")
    for x, s in out.doc["representation"].items():
        out.say(f"  {x} -> {{{','.join(s)}}}")
    out.say(str(report))
    return out.finish(report.ok)


def cmd_mf(args, out: _Out) -> int:
    a = mf_from_dict(_read_json(args.files[0]))
    if args.action == "validate":
        report = mf_validate(a)
        out.doc = {"factorization": mf_to_dict(a), "checks": report.checks, "failures": report.failures}
        out.say(f"size {a.size} factorization of {a.potential}")
        out.say(str(report))
        return out.finish(report.ok)
    if args.action == "tensor":
        if len(args.files) != 2:
            raise argparse.ArgumentTypeError("mf tensor needs two factorization files")
        b = mf_from_dict(_read_json(args.files[1]))
        t = mf_tensor_hat(a, b)
        report = mf_validate(t)
        out.doc = {"tensor": mf_to_dict(t), "checks": report.checks}
        out.say(f"size {t.size} factorization of {t.potential}")
        out.say(f"  phi = {t.phi}")
        out.say(f"  psi = {t.psi}")
        out.say(str(report))
        return out.finish(report.ok)
    # absorb
    if args.g is None:
        raise argparse.ArgumentTypeError("mf absorb needs --g POLY")
    g = parse_poly(args.g)
    report = absorption_check(a, g, degree=args.degree, coef_bound=args.coef_bound, max_support=args.max_support)
    out.doc = {
        "tensor": mf_to_dict(report.data["tensor"]),
        "target": mf_to_dict(report.data["target"]),
        "checks": report.checks,
    }
    out.say(f"absorbing (id, ({g}) id) into a size {a.size} factorization of {a.potential}")
    if "alpha" in report.data:
        out.doc["alpha"] = report.data["alpha"].to_json()
        out.doc["beta"] = report.data["beta"].to_json()
        out.say(f"  alpha = {report.data['alpha']}")
        out.say(f"  beta  = {report.data['beta']}")
    out.say(str(report))
    return out.finish(report.ok)


def cmd_splice(args, out: _Out) -> int:
    doc = _read_json(args.file)
    if not isinstance(doc, dict) or "chains" not in doc:
        raise argparse.ArgumentTypeError("chain file needs 'arrows' and 'chains'")
    alphabet = parse_alphabet(doc.get("arrows", {}))
    chains = [chain_from_dict(c, alphabet) for c in doc["chains"]]
    if not chains:
        raise argparse.ArgumentTypeError("chain file lists no chains")
    result = chains[0]
    for c in chains[1:]:
        result = splice(result, c)
    out.doc = {"chains": [chain_to_dict(c) for c in chains], "spliced": chain_to_dict(result)}
    for c in chains:
        out.say(f"  degree {c.degree}: {c}")
    out.say(f"spliced, degree {result.degree}, sign {result.sign:+d}: {result}")
    if len(chains) == 2:
        k = koszul_pullback(chains[1], chains[0])
        out.doc["koszul_pullback"] = chain_to_dict(k)
        out.say(f"koszul pullback sign {k.sign:+d}")
    return out.finish(True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="OUT", default=argparse.SUPPRESS,
                        help="write the JSON report to OUT ('-' prints it instead of text)")
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS,
                        help="maximum label count for enumeration (default: $TENSOR_IDEALS_CAP or 20)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized runs")

    parser = argparse.ArgumentParser(prog="tensor-ideals", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check a presentation").add_argument("file")
    sp = add("ideals", cmd_ideals, "list radical thick tensor ideals")
    sp.add_argument("file")
    sp.add_argument("--dot", metavar="OUT", help="write the Hasse diagram as DOT ('-' for stdout)")
    sp = add("spectrum", cmd_spectrum, "compute the spectrum of prime ideals")
    sp.add_argument("file")
    sp.add_argument("--dot", metavar="OUT", help="write the specialization diagram as DOT")
    sp = add("classify", cmd_classify, "check the ideal/Thomason-subset bijection")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--random", type=int, default=0, metavar="N", help="check N random presentations instead")
    sp = add("stabilize", cmd_stabilize, "stabilize by an ideal of projective-injectives")
    sp.add_argument("file")
    sp.add_argument("--ideal", required=True, help="comma-separated labels")
    sp = add("hochster", cmd_hochster, "Hochster dual of a finite space")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--from-spectrum", metavar="PRESENTATION", help="use the spectrum of a presentation")
    sp.add_argument("--dot", metavar="OUT", help="write the specialization diagram of the input space as DOT")
    add("birkhoff", cmd_birkhoff, "Birkhoff representation of a distributive lattice").add_argument("file")
    sp = add("mf", cmd_mf, "matrix factorizations")
    sp.add_argument("action", choices=["validate", "tensor", "absorb"])
    sp.add_argument("files", nargs="+")
    sp.add_argument("--g", help="potential to absorb, e.g. 'y^2'")
    sp.add_argument("--degree", type=int, default=2, help="witness degree bound (default 2)")
    sp.add_argument("--coef-bound", type=int, default=1, help="witness coefficient bound (default 1)")
    sp.add_argument("--max-support", type=int, default=4, help="basis vectors per candidate (default 4)")
    sp = add("splice", cmd_splice, "splice extension chains")
    sp.add_argument("action", choices=["demo"])
    sp.add_argument("file")
    return parser


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("json", "cap", "seed"):
        if not hasattr(args, name):
            setattr(args, name, None)
    if args.seed is None:
        args.seed = 0
    out = _Out(args)
    try:
        return args.func(args, out)
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 1
    except (EngineError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
