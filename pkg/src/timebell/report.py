"""Run configuration, the analysis pipeline and its output files.

Output files in the run directory:

``output1.txt``
    one row per tau combination:
    ``tau1  tau2-tM  tau3-2tM  D  n12  n13  n23`` (tab-separated).
``output2.txt``
    same columns, one row per Monte Carlo replicate at a fixed combination.
``summary.txt``
    human-readable sections; each command rewrites only its own sections.
``histogram.csv``
    histogram of the Monte Carlo D values with the fitted normal density.

Every file is written to a temporary name and renamed into place.
"""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__
from .bell import BellResult
from .dichotomizer import TauTriple, u_matrix
from .errors import InvariantBreach
from .event_series import base_times, read_event_file, series_stats
from .resampler import (DEFAULT_SEED, TauGrid, argmax_row,
                        monte_carlo, neighborhood, sweep_grid)
from .stats import KS_CAVEAT, histogram, ks_normality_test
from .synthgen import ProcessSpec, generate

COLUMNS = ("tau1", "tau2-tM", "tau3-2tM", "D", "n12", "n13", "n23")
HEADER = "#" + "\t".join(COLUMNS) + "\n"
SECTION_ORDER = ("input", "sweep", "montecarlo", "ks", "neighborhood")


@dataclass
class RunConfig:
    input_path: str | None = None
    format_hint: str = "cumulative"
    synth: ProcessSpec | None = None
    t_M: int | None = None
    multiplier: int = 3
    require_full_cycle: bool = True
    grid: TauGrid = field(default_factory=TauGrid)
    reps: int = 10_000
    seed: int = DEFAULT_SEED
    delta: int = 20
    shared_assignment: bool = False
    taus: tuple | None = None  # relative offsets for montecarlo/neighborhood
    bins: int = 30
    workers: int = 1
    out_dir: str = "."


@dataclass
class Prepared:
    series: object
    stats: object
    t_M: int
    base: object

    def u_source(self, taus: TauTriple):
        return u_matrix(self.series, self.base, taus, self.t_M)


def prepare(config: RunConfig) -> Prepared:
    if config.input_path is not None:
        series = read_event_file(config.input_path, config.format_hint)
    elif config.synth is not None:
        series = generate(config.synth)
    else:
        raise ValueError("need an input file or a synthetic process spec")
    stats = series_stats(series)
    t_M = config.t_M if config.t_M is not None else stats.t_M
    base = base_times(series, t_M, config.multiplier, config.require_full_cycle)
    return Prepared(series, stats, t_M, base)


def format_d(result: BellResult) -> str:
    """D with 6 decimals, widened only if rounding would hide which side of 1 it is on."""
    text = f"{result.d:.6f}"
    violates = result.violates
    if (float(text) > 1) != violates:
        digits = 7
        while (float(f"{result.d:.{digits}f}") > 1) != violates and digits < 17:
            digits += 1
        text = f"{result.d:.{digits}f}"
    return text


def format_row(offsets, result: BellResult) -> str:
    off1, off2, off3 = offsets
    return (f"{off1}\t{off2}\t{off3}\t{format_d(result)}\t"
            f"{result.n12}\t{result.n13}\t{result.n23}\n")


def parse_rows(text: str) -> list:
    """Read back an output1/output2 table as tuples of the seven columns."""
    rows = []
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        f = line.split("\t")
        rows.append((int(f[0]), int(f[1]), int(f[2]), float(f[3]),
                     int(f[4]), int(f[5]), int(f[6])))
    return rows


def write_atomic(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


_SECTION = re.compile(r"^## (\w+)$")


def read_sections(text: str) -> dict:
    sections, name = {}, None
    for line in text.splitlines():
        m = _SECTION.match(line)
        if m:
            name = m.group(1)
            sections[name] = []
        elif name is not None:
            sections[name].append(line)
    return sections


def update_summary(out_dir, updates: dict):
    """Replace the named sections of summary.txt, keeping any others."""
    path = Path(out_dir) / "summary.txt"
    sections = read_sections(path.read_text(encoding="utf-8")) if path.exists() else {}
    sections.update(updates)
    names = [n for n in SECTION_ORDER if n in sections]
    names += sorted(n for n in sections if n not in SECTION_ORDER)
    out = [f"# timebell {__version__} summary"]
    for n in names:
        out.append(f"## {n}")
        out.extend(sections[n])
    write_atomic(path, "\n".join(out) + "\n")
    return path


def _fmt_offsets(offsets):
    return ",".join(str(v) for v in offsets)


def _input_section(config: RunConfig, prep: Prepared):
    src = config.input_path if config.input_path is not None else (
        f"synthetic {config.synth.kind} (seed {config.synth.seed})")
    return [
        f"source: {src}",
        f"events: {prep.stats.count}",
        f"duration_ms: {prep.stats.duration}",
        f"t_M_ms: {prep.t_M}" + ("" if config.t_M is None else " (override)"),
        f"multiplier: {config.multiplier}",
        f"base_times: {len(prep.base)}",
        f"seed: {config.seed}",
    ]


def _sweep_section(config: RunConfig, rows, best):
    violations = sum(r.result.violates for r in rows)
    return [
        f"grid_tau1: {_fmt_offsets(config.grid.offsets1)}",
        f"grid_tau2-tM: {_fmt_offsets(config.grid.offsets2)}",
        f"grid_tau3-2tM: {_fmt_offsets(config.grid.offsets3)}",
        f"combinations: {len(rows)}",
        f"assignment: {'shared' if config.shared_assignment else 'per-combination'}",
        f"sweep violations (D > 1): {violations}",
        "argmax: " + format_row((best.off1, best.off2, best.off3), best.result).strip(),
    ]


def run_sweep(config: RunConfig, prep: Prepared):
    rows = sweep_grid(prep.u_source, config.grid, prep.t_M, config.seed,
                      shared_assignment=config.shared_assignment,
                      workers=config.workers)
    if len(rows) != len(config.grid):
        raise InvariantBreach(f"sweep produced {len(rows)} rows for {len(config.grid)} combinations")
    for r in rows:
        if sum(r.result.counts) != len(prep.base):
            raise InvariantBreach(f"pair counts {r.result.counts} do not sum to N={len(prep.base)}")
    return rows


def cmd_analyze(config: RunConfig, prep: Prepared | None = None, echo=print):
    prep = prep or prepare(config)
    rows = run_sweep(config, prep)
    best = argmax_row(rows)
    out = Path(config.out_dir)
    write_atomic(out / "output1.txt", HEADER + "".join(
        format_row((r.off1, r.off2, r.off3), r.result) for r in rows))
    update_summary(out, {"input": _input_section(config, prep),
                         "sweep": _sweep_section(config, rows, best)})
    n_viol = sum(r.result.violates for r in rows)
    echo(f"t_M = {prep.t_M} ms, N = {len(prep.base)} base times")
    echo(f"{n_viol} of {len(rows)} combinations have D > 1")
    echo("argmax: " + format_row((best.off1, best.off2, best.off3), best.result).strip())
    return rows


def resolve_taus(config: RunConfig, prep: Prepared):
    """Relative offsets from the config, else the sweep's argmax combination."""
    if config.taus is not None:
        return tuple(int(v) for v in config.taus)
    best = argmax_row(run_sweep(config, prep))
    return (best.off1, best.off2, best.off3)


def cmd_montecarlo(config: RunConfig, prep: Prepared | None = None, echo=print):
    prep = prep or prepare(config)
    offsets = resolve_taus(config, prep)
    taus = TauTriple.from_offsets(*offsets, prep.t_M).check(prep.t_M)
    mc = monte_carlo(prep.u_source(taus), config.reps, config.seed, config.workers)

    lines = [HEADER]
    for c, n, s, d in zip(mc.correlations, mc.counts, mc.sums, mc.d_values):
        res = BellResult(*c, *(int(v) for v in n), float(d), tuple(int(v) for v in s))
        lines.append(format_row(offsets, res))
    out = Path(config.out_dir)
    write_atomic(out / "output2.txt", "".join(lines))

    sections = {"input": _input_section(config, prep), "montecarlo": [
        f"taus (tau1,tau2-tM,tau3-2tM): {_fmt_offsets(offsets)}",
        f"reps: {mc.reps}",
        f"failed replicates: {mc.failures}",
        f"montecarlo violations (D > 1): {mc.violations}",
        f"D min: {mc.d_min:.6f}",
        f"D max: {mc.d_max:.6f}",
        f"D mean: {mc.d_mean:.6f}",
        f"D sd: {mc.d_sd:.6f}",
    ]}
    ks = None
    try:
        ks = ks_normality_test(mc.d_values)
        hist = histogram(mc.d_values, config.bins)
    except ValueError as exc:
        sections["ks"] = [f"KS normality: not computed ({exc})"]
    else:
        write_atomic(out / "histogram.csv", hist.to_csv())
        sections["ks"] = [
            f"KS normality: statistic={ks.statistic:.6f} p_value={ks.p_value:.6f} "
            f"n={ks.n} mean={ks.fitted_mean:.6f} sd={ks.fitted_sd:.6f}",
            f"caveat: {KS_CAVEAT}",
        ]
    update_summary(out, sections)
    echo(f"{mc.violations} of {mc.reps - mc.failures} replicates have D > 1 "
         f"(D range {mc.d_min:.6f} .. {mc.d_max:.6f})")
    if ks is not None:
        echo(f"KS statistic {ks.statistic:.6f}, p-value {ks.p_value:.6f}")
    return mc, ks


def cmd_neighborhood(config: RunConfig, prep: Prepared | None = None, echo=print):
    prep = prep or prepare(config)
    offsets = resolve_taus(config, prep)
    center = TauTriple.from_offsets(*offsets, prep.t_M)
    neighbors, dropped = neighborhood(center, config.delta, prep.t_M, return_dropped=True)
    base_mc = monte_carlo(prep.u_source(center), config.reps, config.seed, config.workers)

    lines = [f"center (tau1,tau2-tM,tau3-2tM): {_fmt_offsets(offsets)}",
             f"delta_ms: {config.delta}",
             f"center max D: {base_mc.d_max:.6f}",
             f"neighbors: {len(neighbors)} (dropped {dropped})"]
    if not neighbors:
        lines.append("note: no neighbors to explore")
    results = []
    for tau in neighbors:
        mc = monte_carlo(prep.u_source(tau), config.reps, config.seed, config.workers)
        flag = " *exceeds center*" if mc.d_max > base_mc.d_max else ""
        lines.append(f"{_fmt_offsets(tau.offsets(prep.t_M))}: max D {mc.d_max:.6f} "
                     f"violations {mc.violations}/{mc.reps - mc.failures}{flag}")
        results.append((tau, mc))
    update_summary(config.out_dir, {"neighborhood": lines})
    for line in lines:
        echo(line)
    return results


def cmd_summary(config: RunConfig, echo=print):
    """Run the sweep and the Monte Carlo at its argmax, writing every output file."""
    prep = prepare(config)
    rows = cmd_analyze(config, prep, echo=echo)
    if config.taus is None:
        best = argmax_row(rows)
        config = replace(config, taus=(best.off1, best.off2, best.off3))
    cmd_montecarlo(config, prep, echo=echo)
    return Path(config.out_dir) / "summary.txt"
