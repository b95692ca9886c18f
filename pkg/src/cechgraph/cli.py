"""Command-line front end.

Every subcommand writes its artifact to standard output (JSON by default) and
progress to standard error.  Exit status: 0 success, 1 verification mismatch,
2 budget or size limit hit, 64 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import collapse as col
from . import formulas
from .complexes import DEFAULT_FACE_BUDGET, SimplicialComplex, cech_complex
from .errors import CechError, ConnectivityError, DomainError, SizeError
from .fileio import read_complex, read_graph, rows_to_csv
from .graphs import Graph, cycle, hypercube, prefix_graph
from .homology import Z, Z2, choose_coefficients, reduced_homology
from .persistence import build_filtration, compute_barcode, contiguity_chain

EXIT_OK, EXIT_MISMATCH, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64

log = logging.getLogger("cechgraph.cli")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class JobSpec:
    """A parsed invocation."""

    command: str
    graph: str | None = None
    r: float | None = None
    r_max: int | None = None
    coeff: str | None = None
    fmt: str = "json"
    seed: int = 0
    budget_faces: int = DEFAULT_FACE_BUDGET
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "JobSpec":
        known = {"command", "graph", "r", "r_max", "coeff", "format", "seed", "budget_faces", "jobs",
                 "verbose"}
        return cls(
            command=ns.command,
            graph=getattr(ns, "graph", None),
            r=getattr(ns, "r", None),
            r_max=getattr(ns, "r_max", None),
            coeff=getattr(ns, "coeff", None),
            fmt=ns.format,
            seed=ns.seed,
            budget_faces=ns.budget_faces,
            jobs=ns.jobs,
            extra={k: v for k, v in vars(ns).items() if k not in known},
        )


def parse_graph_selector(sel: str) -> Graph:
    kind, _, arg = sel.partition(":")
    if not arg:
        raise UsageError(f"graph selector {sel!r} must look like hypercube:n, prefix:m, cycle:m or file:path")
    if kind == "file":
        return read_graph(arg)
    try:
        k = int(arg)
    except ValueError:
        raise UsageError(f"graph parameter {arg!r} is not an integer") from None
    makers = {"hypercube": hypercube, "prefix": prefix_graph, "cycle": cycle}
    if kind not in makers:
        raise UsageError(f"unknown graph family {kind!r}")
    return makers[kind](k)


def _need(job: JobSpec, name: str):
    v = getattr(job, name)
    if v is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for {job.command}")
    return v


def _complex_for(job: JobSpec) -> tuple[SimplicialComplex, dict]:
    path = job.extra.get("complex")
    if path:
        return read_complex(path), {"complex": path}
    G = parse_graph_selector(_need(job, "graph"))
    r = _need(job, "r")
    if r < 0:
        raise UsageError("--r must be nonnegative")
    return cech_complex(G, r), {"graph": job.graph, "r": int(r)}


def _check_budget(K: SimplicialComplex, budget: int) -> int:
    return K.n_faces(budget)


# -- subcommands --------------------------------------------------------------


def cmd_complex(job: JobSpec):
    K, head = _complex_for(job)
    fv = K.f_vector(job.budget_faces)
    out = {**head, "dim": K.dim, "n_vertices": K.n_vertices, "f_vector": list(fv),
           "maximal_faces": [list(f) for f in K.maximal_faces]}
    if job.fmt == "csv":
        return EXIT_OK, rows_to_csv([{"face": " ".join(map(str, f))} for f in K.maximal_faces])
    if job.fmt == "text":
        lines = [f"dim {K.dim}", f"f-vector {' '.join(map(str, fv))}"]
        lines += [" ".join(map(str, f)) for f in K.maximal_faces]
        return EXIT_OK, "\n".join(lines) + "\n"
    return EXIT_OK, json.dumps(out)


def cmd_homology(job: JobSpec):
    K, head = _complex_for(job)
    _check_budget(K, job.budget_faces)
    coeff = choose_coefficients(K, job.coeff)
    t = time.perf_counter()
    h = reduced_homology(K, coeff, budget=job.budget_faces)
    log.info("homology over %s in %.2fs", coeff, time.perf_counter() - t)
    if job.fmt == "csv":
        return EXIT_OK, rows_to_csv(h.rows())
    if job.fmt == "text":
        lines = [f"{k}: {v}" for k, v in head.items()] + [f"coefficients: {coeff}"]
        for row in h.rows():
            lines.append(f"H~{row['dim']}: betti_z={row['betti_z']} torsion={row['torsion']} betti_z2={row['betti_z2']}")
        return EXIT_OK, "\n".join(lines) + "\n"
    out = {**head, "coefficients": coeff, "reduced": h.reduced,
           "betti": {str(d): b for d, b in h.betti_map(coeff).items()}, "homology": h.rows()}
    return EXIT_OK, json.dumps(out)


def cmd_barcode(job: JobSpec):
    G = parse_graph_selector(_need(job, "graph"))
    F = build_filtration(G, job.r_max, budget=job.budget_faces)
    B = compute_barcode(F)
    if job.fmt == "csv":
        return EXIT_OK, B.to_csv()
    if job.fmt == "text":
        lines = [f"H~{d} [{b}, {'inf' if e is None else e})" for d, b, e in B.intervals]
        return EXIT_OK, "\n".join(lines) + "\n"
    out = {"graph": job.graph, "max_scale": F.max_scale, "intervals": json.loads(B.to_json()),
           "max_finite_length": B.max_finite_length(),
           "length_histogram": {str(k): v for k, v in sorted(B.length_histogram().items())}}
    return EXIT_OK, json.dumps(out)


def cmd_collapse(job: JobSpec):
    K, head = _complex_for(job)
    _check_budget(K, job.budget_faces)
    ex = job.extra
    out: dict = dict(head)
    status = EXIT_OK
    if ex.get("replay"):
        with open(ex["replay"]) as fh:
            seq = col.CollapseSequence.from_json(_need_d(ex), fh.read())
        res = col.verify_sequence(K, seq)
        out["replay"] = {"ok": res.ok, "failed_step": res.failed_step, "reason": res.reason}
        status = EXIT_OK if res.ok else EXIT_MISMATCH
    elif ex.get("d") is not None:
        res = col.is_d_collapsible(K, ex["d"], max_states=ex["max_states"])
        out["d"] = ex["d"]
        out["verdict"] = res.verdict
        out["states"] = res.states
        out["sequence"] = None if res.sequence is None else json.loads(res.sequence.to_json())
    else:
        b = col.collapsibility_bounds(K, n_orders=ex["orders"], seed=job.seed,
                                      coefficients=job.coeff, refine_steps=ex["refine_steps"])
        out.update(b.as_dict(K))
        pred = None
        G_sel = job.graph or ""
        if G_sel.startswith("hypercube:") and job.r is not None:
            pred = formulas.predicted_collapsibility(int(G_sel.split(":")[1]), int(job.r))
        out["prediction"] = None if pred is None else pred.to_dict()
    if job.fmt == "text":
        return status, "\n".join(f"{k}: {v}" for k, v in out.items()) + "\n"
    if job.fmt == "csv":
        return status, rows_to_csv([out])
    return status, json.dumps(out)


def _need_d(ex: dict) -> int:
    if ex.get("d") is None:
        raise UsageError("--replay needs --d")
    return ex["d"]


def cmd_contiguity(job: JobSpec):
    ex = job.extra
    if ex.get("n") is None or job.r is None:
        raise UsageError("contiguity needs --n and --r")
    v = contiguity_chain(ex["n"], int(job.r), ex["codomain_delta"])
    out = v.as_dict()
    if v.witness is not None:
        from .graphs import format_vertex

        out["witness_coordinates"] = [format_vertex(x, ex["n"]) for x in v.witness]
    if job.fmt == "text":
        return EXIT_OK, "\n".join(f"{k}: {val}" for k, val in out.items()) + "\n"
    if job.fmt == "csv":
        return EXIT_OK, rows_to_csv([out])
    return EXIT_OK, json.dumps(out)


def _verify_cell(args):
    n, r, coeff, budget = args
    e = formulas.registry_entry(n, r)
    est = formulas.estimated_face_count(n, r)
    if est > budget:
        return {"n": n, "r": r, "status": "SKIP", "expected": e.describe(), "reason": f"~{est} faces > budget {budget}"}
    t = time.perf_counter()
    K = cech_complex(hypercube(n), r)
    c = choose_coefficients(K, coeff)
    h = reduced_homology(K, c, budget=budget)
    got = h.betti_map(c)
    torsion = {d: list(h.torsion_at(d)) for d in range(h.top + 1) if h.torsion_at(d)}
    ok = got == e.betti_map() and not torsion
    return {"n": n, "r": r, "status": "PASS" if ok else "FAIL", "expected": e.describe(),
            "computed": {str(d): b for d, b in sorted(got.items())}, "torsion": torsion,
            "coefficients": c, "seconds": round(time.perf_counter() - t, 3)}


def cmd_verify_table(job: JobSpec):
    max_n = job.extra.get("max_n") or 4
    cells = [(e.n, e.r, job.coeff, job.budget_faces) for e in formulas.table_registry() if e.n <= max_n]
    if job.jobs > 1:
        with ProcessPoolExecutor(max_workers=job.jobs) as ex:
            results = list(ex.map(_verify_cell, cells))
    else:
        results = []
        for c in cells:
            log.info("verifying n=%d r=%d", c[0], c[1])
            results.append(_verify_cell(c))
    status = EXIT_MISMATCH if any(x["status"] == "FAIL" for x in results) else EXIT_OK
    if job.fmt == "text":
        lines = [f"{x['status']} n={x['n']} r={x['r']} expected {x['expected']}"
                 + (f" ({x['reason']})" if "reason" in x else f" computed {x['computed']}") for x in results]
        return status, "\n".join(lines) + "\n"
    if job.fmt == "csv":
        return status, rows_to_csv(results)
    skipped = [[x["n"], x["r"]] for x in results if x["status"] == "SKIP"]
    return status, json.dumps({"cells": results, "skipped": skipped})


def cmd_registry(job: JobSpec):
    entries = [e.to_dict() for e in formulas.table_registry()]
    preds = []
    for n in range(2, 9):
        for r in range(2, 9):
            for p in (formulas.predicted_nonzero_dims(n, r), formulas.predicted_collapsibility(n, r)):
                if p is not None:
                    preds.append(p.to_dict())
    if job.fmt == "csv":
        return EXIT_OK, rows_to_csv(entries)
    if job.fmt == "text":
        return EXIT_OK, "\n".join(f"n={e['n']} r={e['r']} {e['describe']}" for e in entries) + "\n"
    return EXIT_OK, json.dumps({"table": entries, "predictions": preds})


COMMANDS = {
    "complex": cmd_complex,
    "homology": cmd_homology,
    "barcode": cmd_barcode,
    "collapse": cmd_collapse,
    "contiguity": cmd_contiguity,
    "verify-table": cmd_verify_table,
    "registry": cmd_registry,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-faces", type=int, default=DEFAULT_FACE_BUDGET)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true", help="log library progress too")

    p = _Parser(prog="cechgraph", description="Čech complexes of graphs: homology, barcodes, collapses.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_complex(sp, r_required=False):
        sp.add_argument("--graph", help="hypercube:n | prefix:m | cycle:m | file:path")
        sp.add_argument("--r", type=float, required=r_required, help="scale (floored to an integer)")
        sp.add_argument("--coeff", choices=[Z, Z2], default=None)

    sp = sub.add_parser("complex", parents=[common], help="maximal faces and f-vector")
    with_complex(sp)
    sp.add_argument("--complex", help="read maximal faces from a file instead of --graph/--r")
    sp = sub.add_parser("homology", parents=[common], help="reduced homology")
    with_complex(sp)
    sp.add_argument("--complex")
    sp = sub.add_parser("barcode", parents=[common], help="persistence barcode of the Čech filtration")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--r-max", type=int, default=None)
    sp = sub.add_parser("collapse", parents=[common], help="collapsibility bounds, witnesses, replay")
    with_complex(sp)
    sp.add_argument("--complex")
    sp.add_argument("--orders", type=int, default=50, help="number of random maximal-face orders")
    sp.add_argument("--refine-steps", type=int, default=0, help="local-search swaps on the best order")
    sp.add_argument("--d", type=int, default=None, help="decide d-collapsibility exhaustively")
    sp.add_argument("--max-states", type=int, default=200_000)
    sp.add_argument("--replay", help="JSON collapse sequence to replay (needs --d)")
    sp = sub.add_parser("contiguity", parents=[common], help="projection-chain contiguity verdict")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--codomain-delta", type=int, choices=[1, 2], default=2)
    sp = sub.add_parser("verify-table", parents=[common], help="compare computed homology with the registry")
    sp.add_argument("--max-n", type=int, default=4)
    sp.add_argument("--coeff", choices=[Z, Z2], default=None)
    sub.add_parser("registry", parents=[common], help="dump the registry and labelled predictions")
    return p


def run(job: JobSpec) -> tuple[int, str]:
    return COMMANDS[job.command](job)


def _setup_logging(verbose: bool) -> None:
    pkg = logging.getLogger("cechgraph")
    for h in [h for h in pkg.handlers if getattr(h, "_cechgraph_cli", False)]:
        pkg.removeHandler(h)
    h = logging.StreamHandler(sys.stderr)
    h.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    h._cechgraph_cli = True
    pkg.addHandler(h)
    pkg.setLevel(logging.INFO if verbose else logging.WARNING)
    log.setLevel(logging.INFO)


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    _setup_logging(ns.verbose)
    job = JobSpec.from_args(ns)
    try:
        if job.budget_faces < 1 or job.jobs < 1:
            raise UsageError("--budget-faces and --jobs must be positive")
        status, text = run(job)
    except UsageError as e:
        print(f"cechgraph: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SizeError as e:
        print(f"cechgraph: size limit: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, ConnectivityError, OSError) as e:
        print(f"cechgraph: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CechError as e:
        print(f"cechgraph: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
