"""Command-line entry point: ``bspec {spectrum,check,sweep,gen,oracle}``.

Exit status is 0 on success, 1 when an exact check fails or oracles
disagree, 2 on usage or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .._io import atomic_write_text
from ..engine import WeightFunction, backend, counting
from ..errors import BspecError, TooFewDirections
from ..field import Field
from ..geometry import BilinearForm, PointSet, format_pointset, partition_by_directions
from ..verifier import CHECKS, cs_support_bound, run_check
from .generators import generate_set, parse_family, resolve_set
from .sweep import load_config, run_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _common(p: argparse.ArgumentParser, set_required: bool = True) -> None:
    p.add_argument("--q", type=int, required=True, help="prime field size")
    p.add_argument("--d", type=int, default=2, help="ambient dimension (default 2)")
    p.add_argument("--set", dest="set_spec", required=set_required,
                   help="family spec (e.g. random_uniform:n=30) or point-set file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--form", help="form matrix as 'a,b;c,d' (default: dot product)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default $BS_THREADS)")


def _setup(args):
    fld = Field(args.q)
    points = resolve_set(args.set_spec, fld, args.d, args.seed)
    form = BilinearForm.parse(fld, args.form) if args.form else BilinearForm.identity(fld, args.d)
    return fld, points, form


def _tensor_json(tensor) -> dict:
    mass, l2, support = tensor.stats()
    return {
        "q": tensor.q, "labels": list(tensor.labels), "form": tensor.form,
        "mass": mass, "l2": l2, "support": support,
        "entries": [[*key, count] for key, count in tensor.items()],
    }


def cmd_spectrum(args) -> int:
    fld, points, form = _setup(args)
    if args.allow_overlap:
        parts = (points, points, points)
    else:
        parts = partition_by_directions(points).parts
    tensor = counting.spectrum(*parts, form, threads=args.threads, allow_overlap=args.allow_overlap)
    report = cs_support_bound(tensor)
    report.d = args.d
    report.sizes = [len(points), *(len(p) for p in parts)]
    report.seed = args.seed
    if args.allow_overlap:
        report.notes = (report.notes + "; " if report.notes else "") + "overlapping inputs (exploratory)"
    mass, l2, support = tensor.stats()
    print(json.dumps({"mass": mass, "l2": l2, "support": support,
                      "support_ratio": support / fld.q ** 3, "report": report.to_dict()}))
    if args.out:
        out = Path(args.out)
        atomic_write_text(out / "spectrum.json", json.dumps(_tensor_json(tensor)) + "\n")
        atomic_write_text(out / "report.json", report.to_json(indent=2) + "\n")
    return EXIT_OK if report.exact_pass else EXIT_FAIL


def cmd_check(args) -> int:
    fld, points, form = _setup(args)
    other = resolve_set(args.set2, fld, args.d, args.seed) if args.set2 else None
    report = run_check(args.name, points, form, f=other, lam=args.lam, beta=args.beta,
                       threads=args.threads)
    report.seed = args.seed
    print(report.to_json())
    return EXIT_FAIL if report.exact_pass is False else EXIT_OK


def cmd_sweep(args) -> int:
    config = load_config(args.config, threads=args.threads, output_dir=args.out,
                         keep_going=True if args.keep_going else None)
    summary = run_sweep(config)
    print(json.dumps({"reports": len(summary.reports), "passed": summary.passed,
                      "failed": summary.failed, "errors": summary.errors,
                      "aborted": summary.aborted, "output_dir": config.output_dir}))
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_gen(args) -> int:
    fld = Field(args.q)
    points = generate_set(parse_family(args.family, args.seed), fld, args.d)
    text = format_pointset(points)
    if args.out:
        atomic_write_text(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def run_oracles(points: PointSet, form: BilinearForm) -> list[tuple[str, bool, str]]:
    """Compare every engine path against its brute-force oracle on ``points``.

    Returns ``(name, agreed, detail)`` triples; oracles over budget are skipped.
    """
    results = []

    def record(name, engine_value, oracle_value):
        results.append((name, engine_value == oracle_value, f"engine={engine_value} oracle={oracle_value}"))

    q = form.field.q
    n = len(points)
    pts = list(points)
    if n * n <= 250_000:
        hist = counting.pair_histogram(points, points, form).tolist()
        oracle = [0] * q
        for x in pts:
            for y in pts:
                oracle[form(x, y)] += 1
        record("pair_histogram", hist, oracle)
    if n ** 4 <= 10 ** 7:
        record("quadruple_count", counting.quadruple_count(points, points, form),
               counting.quadruple_bruteforce(points, points, form))
        quads = counting.quadruple_count(points, points, form)
        direct = counting.charsum_quadruple(points, points, form, method="direct")
        hist_route = counting.charsum_quadruple(points, points, form, method="histogram")
        ok = abs(direct - q * quads) <= 1e-6 * max(1, q * quads) and abs(direct - hist_route) <= 1e-6 * max(1, q * quads)
        results.append(("charsum_quadruple", ok, f"direct={direct:.6g} histogram={hist_route:.6g} q*N={q * quads}"))
    if n ** 3 <= 2 * 10 ** 6:
        for lam, beta in ((1, 1), (1, q - 1 if q > 2 else 1)):
            record(f"path_count({lam},{beta})", counting.path_count(points, lam, beta, form),
                   counting.path_bruteforce(points, lam, beta, form))
    if n ** 4 <= 10 ** 6:
        g = counting.zero_degree_function(points, form)
        h = WeightFunction.indicator(points)
        record("weighted_quadruple", counting.weighted_quadruple(g, h, form),
               counting.weighted_quadruple_bruteforce(g, h, form))
    try:
        part = partition_by_directions(points)
    except TooFewDirections:
        part = None
    if part is not None and len(part.parts[0]) * len(part.parts[1]) * len(part.parts[2]) <= 200_000:
        tensor = counting.spectrum(*part.parts, form)
        brute = counting.spectrum_bruteforce(*part.parts, form)
        record("spectrum", dict(tensor.items()), dict(sorted(brute.items())))
        record("six_tuple_l2", tensor.l2, counting.six_tuple_bruteforce(*part.parts, form))
    return results


def cmd_oracle(args) -> int:
    _, points, form = _setup(args)
    results = run_oracles(points, form)
    for name, ok, detail in results:
        if ok:
            print(f"PASS {name}")
        else:
            print(f"FAIL {name}: {detail if len(detail) < 200 else detail[:197] + '...'}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bspec", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", choices=sorted(backend.BACKENDS), help="kernel backend override")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="triangle spectrum over the direction partition")
    _common(p)
    p.add_argument("--out", help="directory for spectrum.json and report.json")
    p.add_argument("--allow-overlap", action="store_true",
                   help="use E, E, E unpartitioned (exploratory)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("check", help="run one check, print its report as JSON")
    p.add_argument("name", choices=sorted(CHECKS))
    _common(p)
    p.add_argument("--set2", help="second set F for two-set checks (default F = E)")
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.add_argument("--beta", type=int, default=1)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="run a JSON-configured grid of checks")
    p.add_argument("--config", required=True)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None, help="override output_dir")
    p.add_argument("--keep-going", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="generate a point-set file")
    p.add_argument("--family", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="diff engine results against brute-force oracles")
    _common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.backend:
        backend.set_backend(args.backend)
    try:
        return args.func(args)
    except BspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
