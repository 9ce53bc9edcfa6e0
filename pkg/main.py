from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from bipartite import (
    PureOrder,
    all_pure_orders,
    compression,
    extrusion,
    find_cross,
    find_pure_order,
    is_buchsbaum_bipartite,
    is_cm_bipartite,
    is_cm_extrudable,
    is_triangular,
    odd_hole_obstruction,
    pure_order_problem,
)
from complex_core import (
    SimplicialComplex,
    dim,
    f_vector,
    h_vector,
    independence_complex,
    is_pure,
    strip_zeros,
)
from config import Config, load_config
from decomposability import (
    IntervalPartitioning,
    ShedTree,
    h_from_partitioning,
    is_vertex_decomposable,
    partitioning_problem,
    replay_shed_tree,
    whisker_partitioning,
)
from errors import DomainError, FlagForgeError, ParseError
from formats import (
    complex_from_json,
    complex_to_json,
    graph_to_json,
    is_json_path,
    load_json,
    parse_partition_spec,
    read_graph,
    stanley_reisner_text,
    write_graph,
)
from graph_core import Graph
from homology import buchsbaum_witness, cm_witness, is_buchsbaum, is_cm, reduced_betti
from search import ScanReport, flag_f_witness, realize_f_as_flag, run_scan, scan_h_pattern
from whiskering import clique_whisker

logger = logging.getLogger("flagforge")

Payload = Dict[str, Any]


# ---------- Verdicts ----------
@dataclass
class Verdict:
    command: str
    args: Dict[str, Any]
    payload: Payload
    quiet_keys: Tuple[str, ...]
    elapsed_ms: float = 0.0
    exit_code: int = 0

    def to_json(self, quiet: bool = False) -> Payload:
        if quiet:
            return {k: self.payload.get(k) for k in self.quiet_keys}
        out: Payload = {"command": self.command, "args": self.args}
        out.update(self.payload)
        out["elapsed_ms"] = round(self.elapsed_ms, 3)
        out["exit_code"] = self.exit_code
        return out


@dataclass
class Handler:
    run: Callable[[argparse.Namespace, Config], Tuple[Payload, Tuple[str, ...]]]
    help: str
    options: List[Tuple[Tuple[str, ...], Dict[str, Any]]] = field(default_factory=list)


# ---------- Inputs ----------
def read_complex_or_graph(path: str) -> Tuple[SimplicialComplex, Optional[Graph]]:
    """Complex JSON (has 'facets') is taken as is; any graph file becomes Ind(G)."""
    if is_json_path(path):
        obj = load_json(path)
        if isinstance(obj, dict) and "facets" in obj:
            return complex_from_json(obj, path), None
    G = read_graph(path)
    return independence_complex(G), G


def _check_size(n: int, path: str, cfg: Config) -> None:
    if n > cfg.max_vertices:
        raise DomainError(f"{path}: {n} vertices exceeds max_vertices={cfg.max_vertices}")


def _graph(args: argparse.Namespace, cfg: Config) -> Graph:
    G = read_graph(args.input)
    _check_size(G.n, args.input, cfg)
    return G


def _complex(args: argparse.Namespace, cfg: Config) -> Tuple[SimplicialComplex, Optional[Graph]]:
    delta, G = read_complex_or_graph(args.input)
    _check_size(delta.n, args.input, cfg)
    return delta, G


def read_verdict(path: str) -> Payload:
    obj = load_json(path)
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: a verdict is a JSON object")
    return obj


def _certificate(verdict: Payload, path: str) -> Any:
    cert = verdict.get("certificate")
    if cert is None:
        raise ParseError(f"{path}: verdict carries no certificate")
    return cert


def _verified(problem: Optional[str]) -> Tuple[Payload, Tuple[str, ...]]:
    if problem is not None:
        raise DomainError(f"certificate rejected: {problem}")
    return {"verified": True}, ("verified",)


# ---------- Complex commands ----------
def cmd_fvector(args, cfg):
    delta, _ = _complex(args, cfg)
    f = f_vector(delta)
    return {"f": list(f), "nonzero": list(strip_zeros(f))}, ("f",)


def cmd_hvector(args, cfg):
    delta, _ = _complex(args, cfg)
    h = h_vector(delta)
    return {"h": list(h), "nonzero": list(strip_zeros(h))}, ("h",)


def cmd_ind(args, cfg):
    G = _graph(args, cfg)
    delta = independence_complex(G)
    return {"complex": complex_to_json(delta), "pure": is_pure(delta), "dim": dim(delta)}, ("complex",)


def cmd_betti(args, cfg):
    delta, _ = _complex(args, cfg)
    return {"betti": list(reduced_betti(delta))}, ("betti",)


def cmd_is_cm(args, cfg):
    delta, _ = _complex(args, cfg)
    if not is_pure(delta):
        return {"cm": False, "pure": False, "witness": None}, ("cm",)
    witness = cm_witness(delta)
    payload = {
        "cm": witness is None,
        "pure": True,
        "witness": {"face": list(witness[0]), "degree": witness[1]} if witness is not None else None,
    }
    return payload, ("cm",)


def cmd_is_buchsbaum(args, cfg):
    delta, _ = _complex(args, cfg)
    ok = is_buchsbaum(delta)
    witness = None if ok or not is_pure(delta) else buchsbaum_witness(delta)
    return {"buchsbaum": ok, "cm": is_cm(delta), "witness": witness}, ("buchsbaum",)


def cmd_check_vd(args, cfg):
    delta, _ = _complex(args, cfg)
    if args.verify:
        tree = ShedTree.from_json(_certificate(read_verdict(args.verify), args.verify))
        replay_shed_tree(delta, tree)
        return _verified(None)
    tree = is_vertex_decomposable(delta, preserve_dimension=args.strict)
    payload = {
        "vertex_decomposable": tree is not None,
        "certificate": tree.to_json() if tree is not None else None,
    }
    return payload, ("vertex_decomposable",)


def cmd_export_sr(args, cfg):
    delta, _ = _complex(args, cfg)
    text = stanley_reisner_text(delta, args.scheme or cfg.sr_variable_scheme)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    return {"generators": text.splitlines()}, ("generators",)


# ---------- Whiskering ----------
def cmd_whisker(args, cfg):
    G = _graph(args, cfg)
    pi = parse_partition_spec(args.partition)
    wg = clique_whisker(G, pi)
    if args.out:
        write_graph(wg.graph, args.out)
    return {"graph": graph_to_json(wg.graph), "whiskers": list(wg.whisker_map)}, ("graph",)


def cmd_whisker_partition(args, cfg):
    G = _graph(args, cfg)
    pi = parse_partition_spec(args.partition)
    delta = independence_complex(clique_whisker(G, pi).graph)
    if args.verify:
        p = IntervalPartitioning.from_json(_certificate(read_verdict(args.verify), args.verify))
        return _verified(partitioning_problem(delta, p))
    p = whisker_partitioning(G, pi)
    payload = {
        "certificate": p.to_json(),
        "h": list(h_from_partitioning(p, len(pi))),
        "valid": partitioning_problem(delta, p) is None,
    }
    return payload, ("certificate",)


# ---------- Bipartite ----------
def cmd_pure_order(args, cfg):
    G = _graph(args, cfg)
    if args.verify:
        order = PureOrder.from_json(_certificate(read_verdict(args.verify), args.verify))
        return _verified(pure_order_problem(G, order))
    order = find_pure_order(G)
    cross = find_cross(G, order) if order is not None else None
    payload: Payload = {
        "pure": order is not None,
        "certificate": order.to_json(G) if order is not None else None,
        "cross": list(cross) if cross is not None else None,
    }
    if args.all:
        payload["orders"] = [o.to_json() for o in all_pure_orders(G)]
    return payload, ("pure",)


def cmd_check_cm_bipartite(args, cfg):
    G = _graph(args, cfg)
    if args.verify:
        order = PureOrder.from_json(_certificate(read_verdict(args.verify), args.verify))
        problem = pure_order_problem(G, order)
        if problem is None and not is_triangular(G, order):
            problem = "order is not triangular"
        return _verified(problem)
    v = is_cm_bipartite(G)
    payload = {
        "cm": v.value,
        "verdicts": {"triangular": v.triangular, "cross_free": v.cross_free, "homology": v.oracle},
        "consistent": v.consistent,
        "certificate": v.certificate.to_json(G) if v.certificate is not None else None,
    }
    return payload, ("cm",)


def cmd_check_buchsbaum_bipartite(args, cfg):
    G = _graph(args, cfg)
    verdict = is_buchsbaum_bipartite(G)
    oracle = is_buchsbaum(independence_complex(G))
    return {"buchsbaum": verdict, "homology": oracle, "consistent": verdict == oracle}, ("buchsbaum",)


def cmd_compress(args, cfg):
    G = _graph(args, cfg)
    compressed, order = compression(G)
    if args.out:
        write_graph(compressed, args.out)
    payload = {
        "graph": graph_to_json(compressed),
        "order": order.to_json(G),
        "f": list(f_vector(independence_complex(compressed))),
    }
    return payload, ("graph",)


def cmd_extrude_search(args, cfg):
    G = _graph(args, cfg)
    budget = args.budget if args.budget is not None else cfg.extrusion_edge_budget
    if args.verify:
        cert = _certificate(read_verdict(args.verify), args.verify)
        try:
            word = int(cert["word"])
        except (TypeError, KeyError, ValueError) as e:
            raise ParseError(f"{args.verify}: not an extrusion certificate: {e}") from e
        delta = independence_complex(extrusion(G, word).result)
        return _verified(None if is_cm(delta) else f"extrusion word {word} is not Cohen-Macaulay")
    search = is_cm_extrudable(G, budget=budget, jobs=args.jobs or cfg.jobs, find_all=args.all)
    result = search.result.to_json() if search.result is not None else None
    payload: Payload = {
        "result": result,
        "candidates_tried": search.candidates_tried,
        "certificate": result,
    }
    if args.all:
        payload["pure_words"] = list(search.pure_words)
    return payload, ("result", "candidates_tried")


def cmd_odd_hole(args, cfg):
    G = _graph(args, cfg)
    budget = args.budget if args.budget is not None else cfg.extrusion_edge_budget
    r = odd_hole_obstruction(G, budget=budget, jobs=args.jobs or cfg.jobs)
    payload = {"status": r.status, "hole": list(r.hole), "mode": r.mode or None, "candidates": r.candidates}
    return payload, ("status",)


# ---------- Search ----------
def _parse_vector(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.replace("(", "").replace(")", "").split(",") if tok.strip()]
    except ValueError as e:
        raise ParseError(f"not an integer vector: {text!r}") from e


def cmd_realize_f(args, cfg):
    f = _parse_vector(args.vector)
    G = realize_f_as_flag(f, n_max=args.n_max, cap=cfg.enumeration_cap_dedup)
    payload: Payload = {"graph": graph_to_json(G) if G is not None else None}
    if args.whiskered and G is not None:
        wg = flag_f_witness(f, cap=cfg.enumeration_cap_dedup)
        payload["whiskered"] = graph_to_json(wg.graph) if wg is not None else None
    return payload, ("graph",)


def _write_report(report: ScanReport, path: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        if path.endswith((".yaml", ".yml")):
            f.write(report.to_yaml())
        else:
            json.dump(report.to_json(), f)
            f.write("\n")
    os.replace(tmp, path)


def cmd_scan(args, cfg):
    if args.conjecture == "h133":
        result = scan_h_pattern((1, 3, 3), args.n, dedup=not args.labeled)
        payload = {
            "confirmed": result.confirmed,
            "checked": result.checked,
            "hits": [graph_to_json(G) for G in result.hits],
        }
        return payload, ("confirmed",)

    resume = ScanReport.from_json(load_json(args.resume)) if args.resume else None
    if args.conjecture == "h-is-f-bipartite":
        cap = cfg.enumeration_cap_bipartite
    elif args.labeled:
        cap = cfg.enumeration_cap_labeled
    else:
        cap = cfg.enumeration_cap_dedup
    checkpoint = (lambda rep: _write_report(rep, args.out)) if args.out else None
    report = run_scan(
        args.conjecture,
        args.n,
        jobs=args.jobs or cfg.jobs,
        resume=resume,
        dedup=not args.labeled,
        cap=cap,
        progress_every=cfg.progress_every,
        checkpoint=checkpoint,
    )
    if args.out:
        _write_report(report, args.out)
    payload = {
        "held": report.held,
        "counterexamples": [report.records[i].to_json() for i in report.counterexamples],
        "totals": dict(sorted(report.totals.items())),
        "records": len(report.records),
        "out": args.out,
    }
    return payload, ("held", "counterexamples")


# ---------- Parser ----------
_INPUT = (("input",), {"help": "graph (.txt/.json) or complex (.json) file"})
_VERIFY = (("--verify",), {"metavar": "VERDICT", "help": "re-check the certificate of a saved verdict"})
_OUT = (("--out",), {"default": None})
_BUDGET = (("--budget",), {"type": int, "default": None, "help": "max edges for extrusion search"})

COMMANDS: Dict[str, Handler] = {
    "fvector": Handler(cmd_fvector, "face vector of a complex or of Ind(G)", [_INPUT]),
    "hvector": Handler(cmd_hvector, "h-vector of a complex or of Ind(G)", [_INPUT]),
    "ind": Handler(cmd_ind, "independence complex of a graph", [_INPUT]),
    "betti": Handler(cmd_betti, "reduced Betti numbers over Q", [_INPUT]),
    "is-cm": Handler(cmd_is_cm, "Cohen-Macaulay test (Reisner)", [_INPUT]),
    "is-buchsbaum": Handler(cmd_is_buchsbaum, "Buchsbaum test", [_INPUT]),
    "check-vd": Handler(cmd_check_vd, "vertex-decomposability with shedding tree", [
        _INPUT, _VERIFY,
        (("--strict",), {"action": "store_true", "help": "deletions must keep the dimension"}),
    ]),
    "export-sr": Handler(cmd_export_sr, "Stanley-Reisner generators", [
        _INPUT, _OUT, (("--scheme",), {"choices": ["x", "label"], "default": None}),
    ]),
    "whisker": Handler(cmd_whisker, "clique-whisker a graph", [
        _INPUT, _OUT, (("--partition",), {"required": True}),
    ]),
    "whisker-partition": Handler(cmd_whisker_partition, "interval partitioning of Ind(G^pi)", [
        _INPUT, _VERIFY, (("--partition",), {"required": True}),
    ]),
    "pure-order": Handler(cmd_pure_order, "pure order of a bipartite graph", [
        _INPUT, _VERIFY, (("--all",), {"action": "store_true"}),
    ]),
    "check-cm-bipartite": Handler(cmd_check_cm_bipartite, "Cohen-Macaulay bipartite classifier", [_INPUT, _VERIFY]),
    "check-buchsbaum-bipartite": Handler(cmd_check_buchsbaum_bipartite, "Buchsbaum bipartite classifier", [_INPUT]),
    "compress": Handler(cmd_compress, "compression of a Cohen-Macaulay bipartite graph", [_INPUT, _OUT]),
    "extrude-search": Handler(cmd_extrude_search, "search for a Cohen-Macaulay extrusion", [
        _INPUT, _VERIFY, _BUDGET, (("--all",), {"action": "store_true"}),
    ]),
    "odd-hole": Handler(cmd_odd_hole, "odd-hole obstruction to extrusion", [_INPUT, _BUDGET]),
    "realize-f": Handler(cmd_realize_f, "graph whose Ind has the given face vector", [
        (("vector",), {"help": "comma separated, e.g. 1,3"}),
        (("--n-max",), {"type": int, "default": None}),
        (("--whiskered",), {"action": "store_true", "help": "also give G whiskered at every vertex"}),
    ]),
    "scan": Handler(cmd_scan, "exhaustive conjecture scans", [
        (("--conjecture",), {"choices": ["h-is-f", "h-is-f-bipartite", "h133"], "default": "h-is-f"}),
        (("--n",), {"type": int, "required": True}),
        _OUT,
        (("--resume",), {"default": None, "help": "partial report to continue"}),
        (("--labeled",), {"action": "store_true", "help": "scan labeled graphs, no isomorphism reduction"}),
    ]),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=os.getenv("FLAGFORGE_CONFIG"))
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--quiet", action="store_true", help="print only the result fields")
    common.add_argument("--pretty", action="store_true", help="indented JSON")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--debug", action="store_true")

    p = argparse.ArgumentParser(prog="flagforge", description="Flag complexes, whiskering and bipartite CM tools.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, handler in COMMANDS.items():
        sp = sub.add_parser(name, help=handler.help, parents=[common])
        for flags, kwargs in handler.options:
            sp.add_argument(*flags, **kwargs)
    return p


def _echo(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "quiet", "pretty", "verbose", "debug"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v not in (None, False)}


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


def _emit(obj: Any, pretty: bool, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, indent=2 if pretty else None) + "\n")
    stream.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed usage; bad arguments are parse errors
        return 0 if e.code == 0 else ParseError.exit_code
    _configure_logging(args)

    started = time.perf_counter()
    try:
        cfg = load_config(args.config)
        if args.jobs is not None and args.jobs < 1:
            raise ParseError("--jobs must be at least 1")
        payload, quiet_keys = COMMANDS[args.command].run(args, cfg)
    except FlagForgeError as e:
        logger.debug("%s failed", args.command, exc_info=True)
        _emit({"error": type(e).__name__, "message": str(e), "exit_code": e.exit_code}, args.pretty, sys.stderr)
        return e.exit_code

    verdict = Verdict(args.command, _echo(args), payload, quiet_keys)
    verdict.elapsed_ms = (time.perf_counter() - started) * 1000.0
    _emit(verdict.to_json(quiet=args.quiet), args.pretty)
    return 0


if __name__ == "__main__":
    sys.exit(main())
