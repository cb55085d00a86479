"""Command line front end.

Exit codes: 0 success, 1 internal failure, 2 usage error (bad flags or
formula syntax), 3 configuration error, 4 input/output error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .audit import audit, epsilon_text, from_counts, summarize
from .config import ConfigError, dump_config, load_config, with_seed
from .enumeration import GenerationParams, count, enumerate_formulas, formula_at
from .experiment import (
    build_cases,
    matrix_csv,
    parse_ops,
    read_matrix_csv,
    read_results_csv,
    results_csv,
    run_cases,
    speedup_matrix,
)
from .formula import FormulaSyntaxError, parse, parse_many, render
from .provers import DeductionMode, ProverBudget, min_proof_bfs, resolution_prove
from .render import RenderSpec, render_incidence
from .tptp import export_tptp

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _params(a) -> GenerationParams:
    return GenerationParams(a.n, a.m, parse_ops(a.ops or ""))


def _add_space(p):
    p.add_argument("-n", type=int, required=True, help="maximum depth")
    p.add_argument("-m", type=int, required=True, help="variables p1..pm")
    p.add_argument("--ops", default="", help="comma list of IFF,IMPLIES,AND,OR")


def _write(path: str | None, data, out) -> None:
    if path is None or path == "-":
        out.write(data if isinstance(data, str) else data.decode("latin-1"))
        return
    mode = "w" if isinstance(data, str) else "wb"
    with open(path, mode, **({"encoding": "utf-8", "newline": ""} if mode == "w" else {})) as fh:
        fh.write(data)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _panel_paths(path: str, k: int) -> list[str]:
    if k == 1:
        return [path]
    p = Path(path)
    return [str(p.with_name(f"{p.stem}_{i + 1}{p.suffix}")) for i in range(k)]


def _write_images(images: list[bytes], path: str) -> list[str]:
    paths = _panel_paths(path, len(images))
    for img, p in zip(images, paths):
        _write(p, img, None)
    return paths


def cmd_enumerate(a, out):
    params = _params(a)
    total = count(params)
    start = max(1, a.start)
    stop = total if a.count is None else min(total, start + a.count - 1)
    if a.start == 1 and stop == total:
        items = enumerate(enumerate_formulas(params), 1)
    else:
        items = ((i, formula_at(i, params)) for i in range(start, stop + 1))
    for i, f in items:
        out.write(f"{i}\t{render(f)}\n")


def cmd_count(a, out):
    out.write(f"{count(_params(a))}\n")


def cmd_prove(a, out):
    theory = parse_many(a.theory)
    goal = parse(a.goal)
    budget = ProverBudget(max_lines=a.max_lines, max_states=a.max_states, time_limit=a.time_limit)
    if a.engine == "exact":
        res = min_proof_bfs(theory, goal, DeductionMode(a.mode), budget)
    else:
        res = resolution_prove(theory, goal, budget)
    if res.proof is not None:
        out.write(res.proof.render())
    out.write(f"status={res.status.value} D={'' if res.length is None else res.length}"
              f" minimal={str(res.minimal).lower()} states={res.states}\n")
    return EXIT_OK


def _config(a):
    cfg = with_seed(load_config(a.config), a.seed)
    if getattr(a, "workers", None):
        cfg = replace(cfg, workers=a.workers)
    return cfg


def _progress(done, total):
    sys.stderr.write(f"\r{done}/{total} proofs")
    if done == total:
        sys.stderr.write("\n")


def cmd_run(a, out):
    cfg = _config(a)
    outdir = Path(a.out)
    outdir.mkdir(parents=True, exist_ok=True)
    exp = build_cases(cfg)
    results = run_cases(exp, timing=a.timing, progress=_progress if a.progress else None)
    matrix = speedup_matrix(exp, results)
    (outdir / "config.ini").write_text(dump_config(cfg), encoding="utf-8")
    (outdir / "manifest.txt").write_text(exp.report.manifest(), encoding="utf-8")
    _write(str(outdir / "results.csv"), results_csv(exp, results), None)
    _write(str(outdir / "matrix.csv"), matrix_csv(matrix), None)
    rep = audit(matrix)
    summary = summarize(rep, label=str(cfg.seed))
    (outdir / "summary.txt").write_text(summary, encoding="utf-8")
    if matrix.shape[0] and matrix.shape[1]:
        _write_images(render_incidence(matrix, RenderSpec(a.cell, a.grayscale, a.panels)),
                      str(outdir / "incidence.ppm"))
    out.write(summary)


def cmd_matrix(a, out):
    cfg = _config(a)
    exp = build_cases(cfg)
    results = read_results_csv(_read(a.results))
    missing = [(c.column, c.row) for c in exp.cases if (c.column, c.row) not in results]
    if missing:
        raise UsageError(f"results file lacks {len(missing)} cases of this configuration")
    _write(a.output, matrix_csv(speedup_matrix(exp, results)), out)


def cmd_render(a, out):
    matrix = read_matrix_csv(_read(a.matrix))
    if not (matrix.shape[0] and matrix.shape[1]):
        raise UsageError("matrix is empty")
    images = render_incidence(matrix, RenderSpec(a.cell, a.grayscale, a.panels))
    for p in _write_images(images, a.output):
        out.write(f"{p}\n")


def cmd_audit(a, out):
    if a.counts:
        rep = from_counts(*a.counts)
    elif a.matrix:
        rep = audit(read_matrix_csv(_read(a.matrix)))
    else:
        raise UsageError("give --matrix FILE or --counts CASES POS NEG")
    out.write(summarize(rep, label=a.label))
    if a.epsilon and a.matrix:
        out.write("\n" + epsilon_text(rep))


def cmd_export_tptp(a, out):
    if a.config:
        cfg = _config(a)
        exp = build_cases(cfg)
        outdir = Path(a.output or "tptp")
        outdir.mkdir(parents=True, exist_ok=True)
        for case in exp.cases:
            col = exp.columns[case.column]
            name = f"c{case.column:03d}_r{case.row:03d}"
            text = export_tptp(col.theory, exp.objectives[case.row], name)
            (outdir / f"{name}.p").write_text(text, encoding="utf-8")
        out.write(f"{len(exp.cases)} problems written to {outdir}\n")
        return
    if a.theory is None or a.goal is None:
        raise UsageError("give -t and -g, or -c CONFIG")
    _write(a.output, export_tptp(parse_many(a.theory), parse(a.goal)), out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="propspeedup", description="Proof-length speed-up experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="print formulas of P(n,m) with their indices")
    _add_space(p)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--count", type=int, default=None)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("count", help="print |P(n,m)|")
    _add_space(p)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("prove", help="prove one case and print the proof")
    p.add_argument("-t", "--theory", default="", help="comma separated premises")
    p.add_argument("-g", "--goal", required=True)
    p.add_argument("--engine", choices=("exact", "resolution"), default="exact")
    p.add_argument("--mode", choices=[m.value for m in DeductionMode], default="classical")
    p.add_argument("--max-lines", type=int, default=ProverBudget().max_lines)
    p.add_argument("--max-states", type=int, default=ProverBudget().max_states)
    p.add_argument("--time-limit", type=float, default=None)
    p.set_defaults(fn=cmd_prove)

    def cfg_args(p, required=True):
        p.add_argument("-c", "--config", required=required)
        p.add_argument("--seed", type=int, default=None, help="override the config seed")

    p = sub.add_parser("run", help="run a full experiment")
    cfg_args(p)
    p.add_argument("-o", "--out", default="out")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="record wall-clock millis")
    p.add_argument("--progress", action="store_true")
    p.add_argument("--cell", type=int, default=8)
    p.add_argument("--panels", type=int, default=1)
    p.add_argument("--grayscale", action="store_true")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("matrix", help="speed-up matrix from a results CSV")
    cfg_args(p)
    p.add_argument("--results", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_matrix)

    p = sub.add_parser("render", help="PPM image of a matrix CSV")
    p.add_argument("--matrix", required=True)
    p.add_argument("-o", "--output", default="incidence.ppm")
    p.add_argument("--cell", type=int, default=8)
    p.add_argument("--panels", type=int, default=1)
    p.add_argument("--grayscale", action="store_true")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("audit", help="normality audit and summary row")
    p.add_argument("--matrix")
    p.add_argument("--counts", type=int, nargs=3, metavar=("CASES", "POS", "NEG"))
    p.add_argument("--label", default=None)
    p.add_argument("--epsilon", action="store_true", help="also print the per-column minimum delta")
    p.set_defaults(fn=cmd_audit)

    p = sub.add_parser("export-tptp", help="write cases as TPTP problems")
    p.add_argument("-t", "--theory", default=None)
    p.add_argument("-g", "--goal", default=None)
    cfg_args(p, required=False)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_export_tptp)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        a.fn(a, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        if getattr(a, "config", None) and exc.filename == a.config:
            print(f"config error: cannot read {exc.filename}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, FormulaSyntaxError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
