"""Command-line entry point: ``credal-medoids <subcommand> ...``.

Exit codes: 0 success; 1 usage error, including out-of-range parameter
values; 2 unreadable or invalid data; 3 non-convergence under
``--strict-convergence``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .baselines import fit_fcmdd, fit_fmmdd, fit_pam
from .credal import HARDEN_RULES, HardLabel
from .datagen import CIRCLE_LAYOUTS, FIXTURES, LabeledPointSet, builtin_fixture, generate_circles, generate_gaussian_ring
from .dissimilarity import (
    DEFAULT_SIGNAL_STEPS,
    GRAPH_INDICES,
    AdjacencyMatrix,
    DissimilarityMatrix,
    graph_similarity,
    load_matrix,
    similarity_to_dissimilarity,
    write_csv,
    write_edge_list,
)
from .ecmdd import EMPTY_SET_EXPONENTS, MEDOID_UPDATES, EcmddConfig, fit
from .errors import CredalMedoidsError, InvalidArgumentError
from .evaluation import B_STAR_RULES, CSV_FIELDS, classical_metrics, evidential_metrics, metric_report, validity_index

log = logging.getLogger("credal_medoids")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NOT_CONVERGED = 0, 1, 2, 3
SEED_ENV = "CREDAL_MEDOIDS_SEED"
ALGORITHMS = ("secmdd", "wecmdd", "wecmdd-0", "wecmdd-q", "pam", "fcmdd", "fmmdd")
VARIANT_OF = {"secmdd": "single", "wecmdd": "weighted", "wecmdd-0": "weighted-normalized", "wecmdd-q": "weighted-top-q"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- argument helpers --------------------------------------------------------


def _init_spec(text: str):
    if text.startswith("explicit:"):
        try:
            return [int(tok) for tok in text[len("explicit:"):].split(",") if tok.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad explicit init {text!r}") from None
    if text in ("farthest-random", "farthest-min-rowsum"):
        return text
    raise argparse.ArgumentTypeError("init must be farthest-random, farthest-min-rowsum or explicit:i,j,...")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="path to a matrix file, or fixture:<name> (" + ", ".join(FIXTURES) + ")")
    p.add_argument("--format", choices=("csv", "edge-list"), default=None,
                   help="input format; inferred from the extension when omitted (.edges/.txt are edge lists)")
    p.add_argument("--graph-index", choices=GRAPH_INDICES, default="signal",
                   help="similarity index applied to graph inputs (default: signal)")
    p.add_argument("--steps", type=int, default=DEFAULT_SIGNAL_STEPS,
                   help=f"propagation steps T for the signal index (default: {DEFAULT_SIGNAL_STEPS})")
    p.add_argument("--squared", action="store_true", help="use squared Euclidean distances for point fixtures")


def _add_model(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", choices=ALGORITHMS, default="secmdd")
    p.add_argument("--c", type=int, default=2, help="number of clusters")
    p.add_argument("--alpha", type=float, default=1.0, help="penalty exponent on focal set size")
    p.add_argument("--beta", type=float, default=2.0, help="fuzzifier on masses and memberships")
    p.add_argument("--delta", type=float, default=100.0, help="cost scale of the empty set")
    p.add_argument("--eta", type=float, default=1.0, help="distance term in the choice of imprecise-class medoids")
    p.add_argument("--gamma", type=float, default=1.0, help="share of singleton medoids in imprecise-class dissimilarity")
    p.add_argument("--xi", type=float, default=1.0, help="outlier damping in imprecise-class weights")
    p.add_argument("--psi", type=float, default=2.0, help="smoothness exponent of prototype weights")
    p.add_argument("--q", type=int, default=None, help="prototypes kept per class by wecmdd-q")
    p.add_argument("--max-card", type=int, default=2, help="largest focal set size besides the full frame")
    p.add_argument("--full-frame", dest="full_frame", action="store_true", default=True,
                   help="include the set of all clusters (default)")
    p.add_argument("--no-full-frame", dest="full_frame", action="store_false")
    p.add_argument("--empty-set-exponent", choices=EMPTY_SET_EXPONENTS, default="literal")
    p.add_argument("--medoid-update", choices=MEDOID_UPDATES, default="profile",
                   help="secmdd medoid step: profile descent (default) or singleton-mass scan")
    p.add_argument("--init", type=_init_spec, default="farthest-random",
                   help="farthest-random, farthest-min-rowsum or explicit:i,j,... (0-based)")
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--seed", type=int, default=0, help=f"random seed, overridden by ${SEED_ENV}")
    p.add_argument("--harden", choices=HARDEN_RULES, default="max-betp", help="rule for the primary labels")
    p.add_argument("--strict-convergence", action="store_true", help="exit 3 when a run does not converge")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="credal-medoids", description="Evidential c-medoids clustering of dissimilarity data.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("cluster", help="run one algorithm on one input")
    _add_input(p)
    _add_model(p)
    p.add_argument("--truth", default=None, help="truth labels file; fixtures use their own truth")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("eval", help="score predicted labels against truth labels")
    p.add_argument("--pred", required=True, help="labels.csv from cluster, or a file of one label per line")
    p.add_argument("--truth", required=True, help="file of one crisp label per line")
    p.add_argument("--b-star", choices=B_STAR_RULES, default="specific")
    p.add_argument("--out", default=None, help="write metrics.csv here instead of stdout")

    p = sub.add_parser("gen", help="write a generated data set or a fixture to disk")
    p.add_argument("source", help="circles, gaussian-ring or fixture:<name>")
    p.add_argument("--points-per-circle", type=int, default=361)
    p.add_argument("--layout", choices=CIRCLE_LAYOUTS, default="uniform")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--per-component", type=int, default=1000)
    p.add_argument("--radius", type=float, default=10.0)
    p.add_argument("--sd", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--squared", action="store_true")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("sweep", help="repeat cluster over a grid of c or alpha")
    _add_input(p)
    _add_model(p)
    p.add_argument("--param", choices=("c", "alpha"), required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--truth", default=None)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("graph-sim", help="turn an edge list into a dissimilarity CSV")
    p.add_argument("--input", required=True, help="edge list path or fixture:karate")
    p.add_argument("--index", choices=GRAPH_INDICES, default="signal")
    p.add_argument("--steps", type=int, default=DEFAULT_SIGNAL_STEPS)
    p.add_argument("--out", required=True, help="output CSV path")
    return parser


# -- input handling ----------------------------------------------------------


def _resolve_seed(seed: int) -> int:
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return seed
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _guess_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "edge-list" if Path(path).suffix.lower() in (".edges", ".txt", ".edgelist") else "csv"


def _load_raw(spec: str, fmt: str | None):
    """Payload and optional truth for an ``--input`` value."""
    if spec.startswith("fixture:"):
        fx = builtin_fixture(spec[len("fixture:"):])
        return fx.payload, fx.truth
    return load_matrix(spec, _guess_format(spec, fmt)), None


def _to_dissimilarity(payload, args) -> DissimilarityMatrix:
    if isinstance(payload, DissimilarityMatrix):
        return payload
    if isinstance(payload, AdjacencyMatrix):
        return similarity_to_dissimilarity(graph_similarity(payload, args.graph_index, args.steps))
    if isinstance(payload, LabeledPointSet):
        return payload.dissimilarity(squared=args.squared)
    raise CredalMedoidsError(f"unsupported input payload {type(payload).__name__}")


def _read_truth(path: str) -> list[int]:
    """One integer label per line; for CSV rows the last field is the label and a header row is skipped."""
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    fields = [ln.split(",")[-1].strip() for ln in lines if ln and not ln.startswith("#")]
    if fields and not fields[0].lstrip("-").isdigit():
        fields = fields[1:]
    try:
        return [int(f) for f in fields]
    except ValueError as exc:
        raise CredalMedoidsError(f"truth labels in {path} must be integers: {exc}") from None


def _read_pred(path: str, column: str = "max_mass_label") -> tuple[list[HardLabel], list[int] | None]:
    """Evidential labels plus crisp labels when a ``max_betp_label`` column exists."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and lines[0].startswith("object_id"):
        reader = csv.DictReader(lines)
        rows = list(reader)
        ev = [HardLabel.parse(r[column]) for r in rows]
        crisp = [HardLabel.parse(r["max_betp_label"]).cluster for r in rows] if "max_betp_label" in reader.fieldnames else None
        if crisp is not None and any(k is None for k in crisp):
            raise CredalMedoidsError("max_betp_label column must hold specific labels")
        return ev, crisp
    return [HardLabel.parse(ln.strip()) for ln in lines], None


# -- outputs -----------------------------------------------------------------


def _manifest(input_desc, algo: str, params: dict, seed: int | None, outputs: list[str]) -> dict:
    return {
        "input": input_desc,
        "algorithm": algo,
        "parameters": params,
        "seed": seed,
        "outputs": outputs,
        "tool_version": __version__,
    }


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _manifest_line(manifest: dict | None) -> str:
    return "" if manifest is None else "# manifest: " + json.dumps(manifest, sort_keys=True, separators=(",", ":")) + "\n"


def _write_labels(path: Path, mass_labels, betp_labels, manifest: dict | None = None) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(_manifest_line(manifest))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["object_id", "max_mass_label", "max_betp_label"])
        for i, (a, b) in enumerate(zip(mass_labels, betp_labels)):
            w.writerow([i, str(a), str(b)])


def _write_metrics(path: Path, rows: list[dict], extra_fields: Sequence[str] = (), manifest: dict | None = None) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(_manifest_line(manifest))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*extra_fields, *CSV_FIELDS])
        for row in rows:
            w.writerow([row.get(k, "") for k in (*extra_fields, *CSV_FIELDS)])


def _metric_row(report) -> dict:
    return {"p": report.precision, "r": report.recall, "ri": report.rand_index, "ep": report.ep,
            "er": report.er, "eri": report.eri, "nstar": "" if report.nstar is None else report.nstar}


# -- running one model -------------------------------------------------------


def _run_model(d: DissimilarityMatrix, args, seed: int, c: int | None = None, alpha: float | None = None):
    """Fit the requested algorithm; returns (result dict, mass labels, betp labels, partition, converged)."""
    c = args.c if c is None else c
    alpha = args.alpha if alpha is None else alpha
    if args.algo in VARIANT_OF:
        cfg = EcmddConfig(
            c=c, alpha=alpha, beta=args.beta, delta=args.delta, eta=args.eta, gamma=args.gamma, xi=args.xi,
            psi=args.psi, max_cardinality=args.max_card, include_full_frame=args.full_frame,
            max_iterations=args.max_iter, seed=seed, init=args.init, variant=VARIANT_OF[args.algo], q=args.q,
            empty_set_exponent=args.empty_set_exponent, medoid_update=args.medoid_update,
        )
        res = fit(d, cfg)
        out = res.to_dict()
        out["labels"][args.harden] = [str(x) for x in res.labels(args.harden)]
        return out, res.labels("max-mass"), res.labels("max-betp"), res.partition, res.converged
    if args.algo == "pam":
        res = fit_pam(d, c, seed=seed, max_passes=args.max_iter)
    elif args.algo == "fcmdd":
        res = fit_fcmdd(d, c, beta=args.beta, init=args.init, seed=seed, max_iterations=args.max_iter)
    else:
        res = fit_fmmdd(d, c, beta=args.beta, psi=args.psi, init=args.init, seed=seed, max_iterations=args.max_iter)
    labels = [HardLabel.specific(int(k)) for k in res.labels]
    return res.to_dict(), labels, labels, None, res.converged


def _model_params(args, c=None, alpha=None) -> dict:
    keys = ("beta", "delta", "eta", "gamma", "xi", "psi", "q", "max_card", "full_frame", "empty_set_exponent",
            "medoid_update", "max_iter", "harden")
    params = {k: getattr(args, k) for k in keys}
    params["c"] = args.c if c is None else c
    params["alpha"] = args.alpha if alpha is None else alpha
    params["init"] = args.init
    return params


def _input_desc(args) -> dict:
    return {"input": args.input, "format": args.format, "graph_index": args.graph_index,
            "steps": args.steps, "squared": args.squared}


def cmd_cluster(args) -> int:
    seed = _resolve_seed(args.seed)
    payload, truth = _load_raw(args.input, args.format)
    if args.truth:
        truth = _read_truth(args.truth)
    d = _to_dissimilarity(payload, args)
    result, mass_labels, betp_labels, partition, converged = _run_model(d, args, seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs = ["result.json", "labels.csv"] + (["metrics.csv"] if truth is not None else [])
    manifest = _manifest(_input_desc(args), args.algo, _model_params(args), seed, outputs)
    if truth is not None:
        crisp = [lab.cluster for lab in betp_labels]
        report = metric_report(partition, truth, crisp_labels=crisp, evidential_labels=mass_labels)
        result["metrics"] = report.to_dict()
        _write_metrics(out / "metrics.csv", [_metric_row(report)], manifest=manifest)
    result["manifest"] = manifest
    _write_json(out / "result.json", result)
    _write_labels(out / "labels.csv", mass_labels, betp_labels, manifest)
    if not converged:
        log.warning("run did not converge within %d iterations", args.max_iter)
        if args.strict_convergence:
            return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_eval(args) -> int:
    ev, crisp = _read_pred(args.pred)
    truth = _read_truth(args.truth)
    if crisp is None:
        crisp = [lab.cluster if lab.is_specific else -1 - i for i, lab in enumerate(ev)]
    p, r, ri = classical_metrics(crisp, truth)
    ep, er, eri = evidential_metrics(ev, truth, args.b_star)
    row = {"p": p, "r": r, "ri": ri, "ep": ep, "er": er, "eri": eri, "nstar": ""}
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        manifest = _manifest({"pred": args.pred, "truth": args.truth}, "eval", {"b_star": args.b_star},
                             None, [out.name])
        _write_metrics(out, [row], manifest=manifest)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        w.writerow([row[k] for k in CSV_FIELDS])
    return EXIT_OK


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seed = _resolve_seed(args.seed)
    if args.source.startswith("fixture:"):
        fx = builtin_fixture(args.source[len("fixture:"):])
        payload, truth, name = fx.payload, fx.truth, fx.name
    elif args.source == "circles":
        payload = generate_circles(args.points_per_circle, seed, args.layout)
        truth, name = payload.truth, "circles"
    elif args.source == "gaussian-ring":
        payload = generate_gaussian_ring(args.k, args.per_component, args.radius, args.sd, seed)
        truth, name = payload.truth, "gaussian-ring"
    else:
        raise UsageError("source must be circles, gaussian-ring or fixture:<name>")
    files = []
    if isinstance(payload, AdjacencyMatrix):
        write_edge_list(payload, out / f"{name}.edges")
        files.append(f"{name}.edges")
    else:
        if isinstance(payload, LabeledPointSet):
            np.savetxt(out / f"{name}_points.csv", payload.points, delimiter=",", header="x,y", comments="")
            files.append(f"{name}_points.csv")
            payload = payload.dissimilarity(squared=args.squared)
        header = ",".join(payload.labels) if payload.labels else None
        write_csv(payload, out / f"{name}.csv", header=header)
        files.append(f"{name}.csv")
    if truth is not None:
        (out / f"{name}_truth.txt").write_text("".join(f"{int(t)}\n" for t in truth), encoding="utf-8")
        files.append(f"{name}_truth.txt")
    params = {k: getattr(args, k) for k in ("points_per_circle", "layout", "k", "per_component", "radius", "sd", "squared")}
    _write_json(out / "manifest.json", _manifest(args.source, "gen", params, seed, files))
    return EXIT_OK


def _grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise UsageError("--step must be positive")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise UsageError("--to must not be below --from")
    return [start + k * step for k in range(count)]


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args.seed)
    payload, truth = _load_raw(args.input, args.format)
    if args.truth:
        truth = _read_truth(args.truth)
    d = _to_dissimilarity(payload, args)
    rows, runs, all_converged = [], [], True
    for value in _grid(args.start, args.stop, args.step):
        c = int(round(value)) if args.param == "c" else None
        alpha = value if args.param == "alpha" else None
        result, mass_labels, betp_labels, partition, converged = _run_model(d, args, seed, c=c, alpha=alpha)
        all_converged &= converged
        row = {args.param: c if c is not None else alpha, "converged": converged}
        if partition is not None:
            row["nstar"] = validity_index(partition)
        if truth is not None:
            crisp = [lab.cluster for lab in betp_labels]
            row.update(_metric_row(metric_report(partition, truth, crisp_labels=crisp, evidential_labels=mass_labels)))
        rows.append(row)
        runs.append({"value": row[args.param], "result": result})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = _manifest(_input_desc(args), args.algo,
                         {**_model_params(args), "param": args.param, "from": args.start, "to": args.stop, "step": args.step},
                         seed, ["result.json", "metrics.csv"])
    _write_metrics(out / "metrics.csv", rows, extra_fields=(args.param, "converged"), manifest=manifest)
    scored = [r for r in rows if r.get("nstar") not in (None, "")]
    best = min(scored, key=lambda r: r["nstar"])[args.param] if scored else None
    _write_json(out / "result.json", {"runs": runs, "best_by_nstar": best, "manifest": manifest})
    if args.strict_convergence and not all_converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_graph_sim(args) -> int:
    if args.input.startswith("fixture:"):
        adj = builtin_fixture(args.input[len("fixture:"):]).payload
        if not isinstance(adj, AdjacencyMatrix):
            raise CredalMedoidsError(f"{args.input} is not a graph")
    else:
        adj = load_matrix(args.input, "edge-list")
    d = similarity_to_dissimilarity(graph_similarity(adj, args.index, args.steps))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    header = ",".join(adj.labels) if adj.labels else None
    write_csv(d, out, header=header)
    return EXIT_OK


COMMANDS = {"cluster": cmd_cluster, "eval": cmd_eval, "gen": cmd_gen, "sweep": cmd_sweep, "graph-sim": cmd_graph_sim}


def execute(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidArgumentError) as exc:
        print(f"credal-medoids: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CredalMedoidsError, OSError) as exc:
        print(f"credal-medoids: error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(execute())
