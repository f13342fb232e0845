"""Grid sweeps: every (check, q, d, family, seed) cell yields one JSON report."""
from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .._io import atomic_write_text
from ..engine.backend import default_threads
from ..errors import BspecError, ConfigError
from ..field import Field, is_prime
from ..geometry import BilinearForm, format_pointset
from ..verifier import CHECKS, LemmaReport, run_check
from .generators import generate_set, parse_family, size_expr

log = logging.getLogger(__name__)

CSV_COLUMNS = ["check", "q", "d", "n", "constant", "support_ratio", "exact_pass", "family", "seed"]

DEFAULT_SWEEP = {
    "checks": ["pair_concentration", "quadruple_error", "zero_pairs", "path_bound", "l2_bound"],
    "q": [5, 7, 11, 13, 17, 19, 23],
    "d": [2],
    "families": ["random_uniform:n=q^(3/2)", "random_uniform:n=q^(5/3)", "nonzero_space"],
    "seeds": [1, 2, 3, 4, 5],
    "lambda": 1,
    "beta": 1,
}


@dataclass
class SweepConfig:
    checks: list[str]
    q: list[int]
    d: list[int]
    families: list[str]
    seeds: list[int] = field(default_factory=lambda: [0])
    output_dir: str = "sweep_out"
    threads: int = field(default_factory=default_threads)
    keep_going: bool = False
    timing: bool = False
    save_sets: bool = False
    lam: int = 1
    beta: int = 1

    def __post_init__(self):
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; choose from {sorted(CHECKS)}")
        bad = [q for q in self.q if not is_prime(int(q))]
        if bad:
            raise ConfigError(f"non-prime q values in grid: {bad}")
        if any(int(d) < 2 for d in self.d):
            raise ConfigError("dimensions must be at least 2")
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        for fam, q, d in itertools.product(self.families, self.q, self.d):
            family = parse_family(fam)
            if "n" in family.params:
                n = size_expr(family.params["n"], q, d)
                if n > q ** d:
                    raise ConfigError(f"{fam}: size {n} exceeds q^d = {q ** d} at q={q}, d={d}")

    @classmethod
    def from_dict(cls, data: dict, **overrides) -> "SweepConfig":
        data = dict(data)
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        data.update({k: v for k, v in overrides.items() if v is not None})
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config fields {sorted(extra)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path, **overrides) -> SweepConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return SweepConfig.from_dict(data, **overrides)


@dataclass
class Cell:
    index: int
    check: str
    q: int
    d: int
    family: str
    seed: int | None


@dataclass
class SweepSummary:
    reports: list[LemmaReport]
    passed: int = 0
    failed: int = 0
    errors: int = 0
    aborted: bool = False

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.errors == 0


def grid_cells(config: SweepConfig) -> list[Cell]:
    """Cells in deterministic grid order; deterministic families run once (seed ``None``)."""
    cells = []
    for check, q, d, fam in itertools.product(config.checks, config.q, config.d, config.families):
        seeds = config.seeds if parse_family(fam).is_random else [None]
        for seed in seeds:
            cells.append(Cell(len(cells), check, int(q), int(d), fam, seed))
    return cells


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-")


def _cell_name(cell: Cell) -> str:
    seed = "none" if cell.seed is None else str(cell.seed)
    return f"{cell.index:04d}_{cell.check}_q{cell.q}_d{cell.d}_{_slug(cell.family)}_s{seed}"


def run_cell(cell: Cell, config: SweepConfig) -> LemmaReport:
    fld = Field(cell.q)
    form = BilinearForm.identity(fld, cell.d)
    points = None
    try:
        points = generate_set(parse_family(cell.family, cell.seed or 0), fld, cell.d)
        if config.save_sets:
            atomic_write_text(Path(config.output_dir) / "sets" / f"{_cell_name(cell)}.txt",
                              format_pointset(points))
        report = run_check(cell.check, points, form, lam=config.lam, beta=config.beta, threads=1)
    except BspecError as exc:
        report = LemmaReport(cell.check, cell.q, cell.d, [len(points)] if points is not None else [],
                             exact_pass=None, constant=None, notes=f"error: {exc}")
        report.computed["error"] = 1
    report.seed = cell.seed
    report.notes = (report.notes + "; " if report.notes else "") + f"family={cell.family}"
    if not config.timing:
        report.elapsed_ms = None
    return report


def _csv_row(cell: Cell, report: LemmaReport) -> list:
    return [
        report.check, report.q, report.d, report.sizes[0] if report.sizes else "",
        "" if report.constant is None else repr(float(report.constant)),
        repr(float(report.computed["support_ratio"])) if "support_ratio" in report.computed else "",
        "" if report.exact_pass is None else str(report.exact_pass).lower(),
        cell.family, "" if cell.seed is None else cell.seed,
    ]


def run_sweep(config: SweepConfig) -> SweepSummary:
    """Run every grid cell, write reports and ``summary.csv`` into ``config.output_dir``.

    Cells run in a thread pool of ``config.threads`` workers; files are
    written atomically and the CSV is assembled in grid order afterwards,
    so output bytes do not depend on the worker count.  Unless
    ``keep_going`` is set, the first failing or erroring cell (in grid
    order) stops the sweep.
    """
    out = Path(config.output_dir)
    cells = grid_cells(config)

    def work(cell: Cell) -> LemmaReport:
        report = run_cell(cell, config)
        atomic_write_text(out / "reports" / f"{_cell_name(cell)}.json", report.to_json(indent=2) + "\n")
        return report

    summary = SweepSummary([])
    done: list[tuple[Cell, LemmaReport]] = []
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        futures = [pool.submit(work, c) for c in cells] if config.threads > 1 else None
        for i, cell in enumerate(cells):
            report = futures[i].result() if futures else work(cell)
            done.append((cell, report))
            if "error" in report.computed:
                summary.errors += 1
            elif report.exact_pass is False:
                summary.failed += 1
                log.warning("exact check failed: %s", _cell_name(cell))
            else:
                summary.passed += 1
            if not summary.ok and not config.keep_going:
                if futures:
                    for fut in futures[i + 1:]:
                        fut.cancel()
                summary.aborted = True
                break

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell, report in done:
        writer.writerow(_csv_row(cell, report))
    summary.reports = [r for _, r in done]
    atomic_write_text(out / "summary.csv", buf.getvalue())
    return summary
