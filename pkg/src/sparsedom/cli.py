"""Batch runner: ``sparsedom <command> [--config FILE] [--out DIR] ...``.

Commands::

    luxemburg                 one-shot Luxemburg norm of the configured field on one cube
    constants                 weight constants of the configured weights
    hormander                 Hörmander constants of the kernel (for the conjugate of A)
    sparse build              sparse family, recursion log and domination check
    verify fs|cf|sharp|lemmas|all
    quad kphi|ceps|beta       explicit constants

Exit status: 0 when every hard check passes, 1 when one fails, 2 on a usage
or configuration error.  Outputs are CSV files in ``--out`` plus
``summary.csv``; no file contains timings, so equal (config, seed) give
byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import CHECK_DEFAULTS, ConfigError, load_config, merge_config, validate_config
from .dyadic import Cube, Grid
from .fields import ScalarField, Weight, bump, from_csv, indicator, power_weight, random_field
from .kernels import hormander_constant, operator_norm
from .report import CheckReport
from .sparse import SparseBuildError, build_sparse_family, default_corpus, domination_check
from .verify import (LemmaContext, Phi, beta_const, c_eps, coifman_fefferman, k_phi,
                     lemma_suite, phi_family, sharp_maximal_check, weak_type_fs)
from .weights import weight_constants
from .young import conjugate, luxemburg_norm, parse_young, tabulate

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
THREADS_ENV = "SPARSEDOM_THREADS"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs


def _grid(cfg) -> Grid:
    return Grid(cfg["grid"]["n"], cfg["grid"]["depth"])


def _corpus(cfg, m: int | None = None):
    g = cfg["grid"]
    try:
        A = parse_young(cfg["young"])
        c = default_corpus(g["depth"], m=cfg["m"] if m is None else m, n=g["n"],
                           kernel=cfg["kernel"], young=A)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    c.f = _field(cfg, c.grid, c.f)
    return c


def _field(cfg, grid: Grid, default: ScalarField) -> ScalarField:
    spec = cfg["f"]
    kind = spec["kind"]
    if kind == "bump":
        if "center" not in spec and "radius" not in spec:
            return default
        return bump(grid, spec.get("center"), spec.get("radius"))
    if kind == "indicator":
        if "lo" not in spec or "hi" not in spec:
            raise UsageError("indicator field needs 'lo' and 'hi'")
        return indicator(grid, spec["lo"], spec["hi"])
    if kind == "noise":
        return random_field(grid, seed=spec.get("seed", cfg["seed"]))
    if "path" not in spec:
        raise UsageError("csv field needs 'path'")
    return from_csv(spec["path"], grid)


def _weights(cfg, grid: Grid) -> list[tuple[str, Weight]]:
    out = []
    for k, spec in enumerate(cfg["weights"]):
        kind = spec["kind"]
        if kind == "one":
            w, name = Weight(grid, np.ones(grid.shape)), "one"
        elif kind == "power":
            a = spec.get("a", 0.5)
            try:
                w = power_weight(grid, a, spec.get("center"))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            name = f"pow{a:+g}"
        else:
            if "path" not in spec:
                raise UsageError("csv weight needs 'path'")
            w, name = from_csv(spec["path"], grid, weight=True), f"csv{k}"
        out.append((spec.get("name", name), w))
    return out


# ---------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.generic):
        return str(x.item())
    return str(x)


def write_rows(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


class Collector:
    """Single writer for reports and series; keeps insertion order."""

    def __init__(self, out: Path):
        self.out = out
        self.out.mkdir(parents=True, exist_ok=True)
        self.summary: list[tuple[str, CheckReport]] = []

    def report(self, stem: str, rep: CheckReport) -> None:
        rep.to_csv(self.out / f"{stem}.csv")
        self.summary.append((stem, rep))

    def rows(self, stem: str, header, rows) -> None:
        write_rows(self.out / f"{stem}.csv", list(header), rows)

    def finish(self) -> int:
        rows = []
        for stem, r in self.summary:
            s = r.summary()
            rows.append([stem, s["check"], s["constant"], s["bound"], s["passed"], s["hard"],
                         s["samples"]])
        self.rows("summary", ["file", "check", "constant", "bound", "passed", "hard", "samples"],
                  rows)
        if rows:
            width = max(len(r[0]) for r in rows)
            for r in rows:
                flag = "pass" if r[4] else ("FAIL" if r[5] else "soft-fail")
                print(f"{r[0]:<{width}}  constant={r[2]:<12.6g} bound={r[3]:<8g} {flag}")
        failed = [stem for stem, r in self.summary if r.hard and not r.passed]
        return EXIT_FAIL if failed else EXIT_OK


def _run_jobs(jobs, threads: int):
    """Run independent callables concurrently; results come back in submission order."""
    if threads <= 1 or len(jobs) <= 1:
        return [fn() for _, fn in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn) for _, fn in jobs]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# commands


def cmd_luxemburg(cfg, col: Collector, threads: int) -> int:
    grid = _grid(cfg)
    c = _corpus(cfg)
    cube = cfg["luxemburg"]["cube"]
    try:
        Q = Cube(cube.get("lattice", 0), cube["level"], tuple(cube["index"]), grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    A = c.A
    rows = []
    mus = [("lebesgue", None)] + _weights(cfg, grid) if "weight" not in cfg["luxemburg"] else \
        [_weights(cfg, grid)[cfg["luxemburg"]["weight"]]]
    for name, mu in mus:
        val = luxemburg_norm(c.f, Q, A, mu)
        rows.append([A.label, Q.lattice, Q.level, ";".join(map(str, Q.index)), name, val])
        print(f"||f||_{{{A.label}, Q}} [{name}] = {val!r}")
    col.rows("luxemburg", ["young", "lattice", "level", "index", "measure", "norm"], rows)
    return EXIT_OK


def cmd_constants(cfg, col: Collector, threads: int) -> int:
    grid = _grid(cfg)
    ws = _weights(cfg, grid)
    res = _run_jobs([(n, lambda w=w: weight_constants(w)) for n, w in ws], threads)
    rows = []
    for (name, _), wc in zip(ws, res):
        rows.append([name, wc.p, wc.a_p, wc.a_1, wc.a_inf_fw, wc.a_inf_weak, wc.rh_exponent,
                     wc.tau_n])
        print(f"{name}: A_{wc.p:g}={wc.a_p:.6g} A_1={wc.a_1:.6g} A_inf={wc.a_inf_fw:.6g} "
              f"weak={wc.a_inf_weak:.6g} r(w)={wc.rh_exponent:.6g}")
    col.rows("constants", ["weight", "p", "a_p", "a_1", "a_inf_fw", "a_inf_weak", "rh_exponent",
                           "tau_n"], rows)
    return EXIT_OK


def cmd_hormander(cfg, col: Collector, threads: int) -> int:
    c = _corpus(cfg)
    conj = conjugate(c.A)
    if conj.conjugate_form == "numeric":
        conj = tabulate(conj)
    H1, H2 = hormander_constant(c.kernel, c.grid, conj)
    print(f"{c.kernel.name}: H_Abar = ({H1:.6g}, {H2:.6g}) with Abar = {conj.label}")
    nrm = operator_norm(c.kernel, c.grid)
    print(f"||T||_2 = {nrm:.10g}")
    col.rows("hormander", ["kernel", "young", "H1", "H2"], [[c.kernel.name, conj.label, H1, H2]])
    col.rows("operator_norm", ["kernel", "norm"], [[c.kernel.name, nrm]])
    return EXIT_OK


def cmd_sparse(cfg, col: Collector, threads: int) -> int:
    c = _corpus(cfg)
    R0 = c.Q0.dilate3()
    f = ScalarField(c.grid, np.where(R0.mask(), c.f.values, 0.0))
    opts = (cfg["checks"] or {}).get("sparse", CHECK_DEFAULTS["sparse"])
    kw = {"max_alpha": opts["max_alpha"]} if "max_alpha" in opts else {}
    try:
        rep = build_sparse_family(c.kernel, c.spec, f, c.Q0, c.A, **kw)
    except SparseBuildError as exc:
        print(f"sparsedom: sparse build failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.family.sorted().to_csv(col.out / "sparse_family.csv")
    rows = []
    for j, fam in sorted(rep.lattices.items()):
        for Q, E in fam:
            rows.append([j, Q.level, ";".join(map(str, Q.index)), Q.side_cells, Q.n_cells,
                         int(E.sum())])
    col.rows("sparse_lattices", ["lattice", "level", "index", "side_cells", "cells_Q", "cells_E"],
             rows)
    col.rows("sparse_nodes", ["level", "index", "alpha", "cells_E", "cells_Q", "cells_P"],
             [[nd.cube.level, ";".join(map(str, nd.cube.index)), nd.alpha, nd.e_cells,
               nd.cube.n_cells, nd.p_cells] for nd in rep.nodes])
    summ = rep.summary()
    col.rows("sparse_summary", ["key", "value"], sorted(summ.items()))
    for k, v in sorted(summ.items()):
        print(f"{k}: {v}")
    col.report("sparse_domination", domination_check(c.kernel, c.spec, f, c.A, rep))
    code = col.finish()
    return EXIT_FAIL if not (summ["sparse_ok"] and summ["selection_ok"]) else code


def _fs_jobs(cfg, opts):
    jobs = []
    for m in opts["m"]:
        c = _corpus(cfg, m)
        for wname, w in _weights(cfg, c.grid):
            for variant in opts["variant"]:
                for eps in opts["eps"]:
                    stem = f"fs_{variant}_m{m}_{wname}_eps{eps:g}"

                    def job(c=c, w=w, variant=variant, eps=eps):
                        return weak_type_fs(c.kernel, c.spec, c.f, w, eps, variant,
                                            count=opts["lambdas"])
                    jobs.append(((stem, m, wname, variant, eps), job))
    return jobs


def _cf_jobs(cfg, opts):
    jobs = []
    for m in opts["m"]:
        c = _corpus(cfg, m)
        for wname, w in _weights(cfg, c.grid):
            for p in opts["p"]:
                stem = f"cf_m{m}_{wname}_p{p:g}"
                jobs.append(((stem, m, wname, p),
                             lambda c=c, w=w, p=p: coifman_fefferman(c.kernel, c.spec, c.f, w, p)))
    return jobs


def cmd_verify(what: str, cfg, col: Collector, threads: int) -> int:
    checks = cfg["checks"]
    if checks is None:
        names = ["fs", "cf", "sharp", "lemmas"] if what == "all" else [what]
        checks = {k: dict(CHECK_DEFAULTS[k]) for k in names}
    elif what != "all":
        checks = {what: checks.get(what, dict(CHECK_DEFAULTS[what]))}
    if "fs" in checks:
        jobs = _fs_jobs(cfg, checks["fs"])
        res = _run_jobs(jobs, threads)
        series = []
        for (key, _), rep in zip(jobs, res):
            stem, m, wname, variant, eps = key
            col.report(stem, rep)
            series.append([variant, m, wname, eps, rep.constant, rep.extra["prefactor"]])
        col.rows("fs_eps_scaling", ["variant", "m", "weight", "eps", "constant", "prefactor"],
                 series)
    if "cf" in checks:
        jobs = _cf_jobs(cfg, checks["cf"])
        res = _run_jobs(jobs, threads)
        series = []
        for (key, _), rep in zip(jobs, res):
            stem, m, wname, p = key
            col.report(stem, rep)
            for shape, r in zip(rep.params["shape"], rep.ratio):
                series.append([m, wname, p, shape, r])
        col.rows("cf_p_sweep", ["m", "weight", "p", "shape", "ratio"], series)
    if "sharp" in checks:
        o = checks["sharp"]
        c = _corpus(cfg)
        try:
            rep = sharp_maximal_check(c.kernel, c.spec, c.f, o["delta"], o["eps"])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        col.report(f"sharp_m{c.spec.m}", rep)
    if "lemmas" in checks:
        o = checks["lemmas"]
        g = cfg["grid"]
        ctx = LemmaContext(depth=g["depth"], n=g["n"], seed=cfg["seed"], draws=o["draws"],
                           kernel_name=cfg["kernel"])
        try:
            reps = lemma_suite(o.get("names"), ctx, threads=threads)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for rep in reps:
            col.report(f"lemma_{rep.name}", rep)
    return col.finish()


def cmd_quad(what: str, cfg, col: Collector, threads: int) -> int:
    q = cfg["quad"]
    try:
        if what == "ceps":
            rows = [[eps, q["m"], c_eps(eps, q["m"])] for eps in q["eps"]]
            col.rows("c_eps", ["eps", "m", "value"], rows)
        elif what == "beta":
            if "r" not in q:
                raise UsageError("quad beta needs 'r' in the quad config")
            rows = [[q["m"], q["l1"], q["l2"], q["r"], eps,
                     beta_const(q["m"], q["l1"], q["l2"], q["r"], n=q["n"], eps=eps,
                                terms=q.get("terms"))] for eps in q["eps"]]
            col.rows("beta", ["m", "l1", "l2", "r", "eps", "value"], rows)
        else:
            m, l1, l2 = q["m"], q["l1"], q["l2"]
            rows = []
            for eps in q["eps"]:
                beta = 0.0
                if l2 < l1 and "r" in q:
                    beta = beta_const(m, l1, l2, q["r"], n=q["n"], eps=eps)
                A = Phi(m if l1 == l2 == m else m - l1)
                phi = parse_young(q["phi"]) if "phi" in q else phi_family(m, l1, l2, eps)
                r = k_phi(phi, A, m, l1, l2, beta=beta)
                rows.append([m, l1, l2, eps, r.value, r.value * eps, r.beta, r.tail, r.v_max,
                             r.converged, r.divergent, r.offset])
            col.rows("k_phi", ["m", "l1", "l2", "eps", "integral", "integral_times_eps", "beta",
                               "tail", "v_max", "converged", "divergent", "offset"], rows)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for row in rows:
        print(",".join(_fmt(x) for x in row))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (unknown keys are errors)")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--threads", type=int,
                        help=f"worker threads (default: ${THREADS_ENV} or all cores)")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--depth", type=int, help="grid depth J (N = 2^J cells per axis)")
    p = argparse.ArgumentParser(prog="sparsedom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("luxemburg", "constants", "hormander"):
        sub.add_parser(name, parents=[common])
    sp = sub.add_parser("sparse", parents=[common])
    sp.add_argument("action", choices=["build"])
    vp = sub.add_parser("verify", parents=[common])
    vp.add_argument("what", choices=["fs", "cf", "sharp", "lemmas", "all"])
    qp = sub.add_parser("quad", parents=[common])
    qp.add_argument("what", choices=["kphi", "ceps", "beta"])
    return p


def _threads(arg: int | None, cfg) -> int:
    if arg is not None:
        return arg
    if cfg.get("threads"):
        return cfg["threads"]
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer") from None
    return os.cpu_count() or 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        doc = load_config(args.config) if args.config else {}
        if args.depth is not None:
            doc.setdefault("grid", {})["depth"] = args.depth
        if args.seed is not None:
            doc["seed"] = args.seed
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be at least 1")
        validate_config(doc)
        cfg = merge_config(doc)
        if args.out is not None:
            cfg["out"] = args.out
        threads = _threads(args.threads, cfg)
        col = Collector(Path(cfg["out"]))
        if args.command == "luxemburg":
            return cmd_luxemburg(cfg, col, threads)
        if args.command == "constants":
            return cmd_constants(cfg, col, threads)
        if args.command == "hormander":
            return cmd_hormander(cfg, col, threads)
        if args.command == "sparse":
            return cmd_sparse(cfg, col, threads)
        if args.command == "verify":
            return cmd_verify(args.what, cfg, col, threads)
        return cmd_quad(args.what, cfg, col, threads)
    except (ConfigError, UsageError) as exc:
        print(f"sparsedom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
