"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 state space over the configured bound.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .dynamics import Attractor, StateSpaceTooLarge, attractors, strong_basin, weak_basin
from .model import (
    MAX_NODES,
    BooleanNetwork,
    Control,
    ParseError,
    parse_network,
    state_from_string,
    state_to_string,
)
from .onestep import ControlQuery, Mode, minimal_controls
from .oracle import MAX_ORACLE_NODES, Schedule, simulate, verify_path
from .sequential import (
    ControlPath,
    SeqMode,
    SequentialQuery,
    default_budget,
    sequential_paths,
    shortest,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3

#: Column layout of the benchmark report: one column per mode for each measure.
BENCH_COLUMNS = (
    "network", "|V|", "|E|", "|A|",
    "#perturbations ASI", "#perturbations AST", "#perturbations ASP",
    "# paths ASI", "# paths AST", "# paths ASP",
    "time (seconds) ASI", "time (seconds) AST", "time (seconds) ASP",
)

SEQ_MODES = ("ASI", "AST", "ASP")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    model: Optional[Path] = None
    command: str = ""
    mode: Optional[str] = None
    k: Optional[int] = None
    forbid_nodes: list = field(default_factory=list)
    forbid_intermediates: list = field(default_factory=list)
    format: str = "json"
    seed: int = 0
    max_n: int = MAX_NODES
    labels: Optional[Path] = None
    min_steps: int = 1


# ---------------------------------------------------------------------------
# Loading and selectors


def load_network(path) -> BooleanNetwork:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read model: {exc}") from exc
    try:
        return parse_network(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_labels(path) -> dict[str, str]:
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read labels: {exc}") from exc
    for no, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{no}: expected 'name = selector'")
        name, sel = (part.strip() for part in line.split("=", 1))
        out[name] = sel
    return out


class Session:
    """A parsed model, its attractors and the label mapping."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.g = load_network(cfg.model)
        self.name = Path(cfg.model).stem
        if self.g.n > cfg.max_n:
            raise StateSpaceTooLarge(
                f"network has {self.g.n} nodes; the limit is {cfg.max_n} (see --max-n)")
        atts = attractors(self.g, max_nodes=cfg.max_n)
        labels = _read_labels(cfg.labels) if cfg.labels else {}
        names = {}
        for label, sel in labels.items():
            names[self._plain(atts, sel).id] = label
        self.attractors = [Attractor(a.id, a.states, names.get(a.id)) for a in atts]
        self.labels = labels

    def _plain(self, atts, sel: str) -> Attractor:
        # a bit string has one character per node; any other number (or A<k>) is an id
        sel = sel.strip()
        if len(sel) == self.g.n and set(sel) <= {"0", "1"}:
            s = state_from_string(sel)
            for a in atts:
                if s in a.states:
                    return a
            raise InputError(f"state {sel} does not belong to an attractor")
        if sel[:1] in ("A", "a"):
            sel = sel[1:].lstrip("_")
        if sel.isdigit():
            k = int(sel)
            if 1 <= k <= len(atts):
                return atts[k - 1]
            raise InputError(f"no attractor with id {k}")
        raise InputError(f"unknown attractor selector {sel!r}")

    def select(self, sel: str) -> Attractor:
        sel = str(sel).strip()
        if sel in self.labels:
            sel = self.labels[sel]
        return self._plain(self.attractors, sel)

    def node(self, name: str) -> int:
        try:
            return self.g.index(name)
        except KeyError:
            raise InputError(f"unknown node {name!r}") from None

    def forbidden(self) -> frozenset:
        return frozenset(self.node(x) for x in self.cfg.forbid_nodes)

    def state(self, s: int) -> str:
        return state_to_string(s, self.g.n)

    def attractor_json(self, a: Attractor) -> dict:
        out = {"id": a.id, "states": sorted(self.state(s) for s in a.states)}
        if a.name:
            out["name"] = a.name
        return out

    def control_json(self, c: Control) -> dict:
        return {
            "zero": [self.g.names[i] for i in sorted(c.zero)],
            "one": [self.g.names[i] for i in sorted(c.one)],
        }

    def header(self) -> dict:
        return {
            "network": self.name,
            "attractors": [self.attractor_json(a) for a in self.attractors],
        }


# ---------------------------------------------------------------------------
# Commands (each returns a JSON-ready dict)


def cmd_attractors(cfg: RunConfig) -> dict:
    return Session(cfg).header()


def cmd_basins(cfg: RunConfig, selector: Optional[str] = None) -> dict:
    ses = Session(cfg)
    chosen = [ses.select(selector)] if selector is not None else ses.attractors
    out = ses.header()
    out["basins"] = [
        {
            "id": a.id,
            "weak": weak_basin(ses.g, a).to_strings(),
            "strong": strong_basin(ses.g, a).to_strings(),
        }
        for a in chosen
    ]
    return out


def cmd_control(cfg: RunConfig, source: str, target: str) -> dict:
    ses = Session(cfg)
    src, tgt = ses.select(source), ses.select(target)
    if src.id == tgt.id:
        raise InputError("source and target must be different attractors")
    mode = Mode.parse(cfg.mode or "OT")
    k = ses.g.n if cfg.k is None else cfg.k
    sols = minimal_controls(ses.g, ControlQuery(src, tgt, mode, k, ses.forbidden()))
    out = ses.header()
    out.update(mode=mode.value, source=src.id, target=tgt.id, k=k, controls=[
        {
            "nodes": [ses.g.names[i] for i in sorted(s.nodes)],
            "values": [1 if i in s.control.one else 0 for i in sorted(s.nodes)],
            "size": s.size,
        }
        for s in sols
    ])
    return out


def _paths(ses: Session, src: Attractor, tgt: Attractor, mode: SeqMode,
           k: Optional[int]) -> tuple[int, list[ControlPath]]:
    forbidden = ses.forbidden()
    if k is None:
        k = default_budget(ses.g, src, tgt, mode, forbidden)
    blocked = {ses.select(x).id for x in ses.cfg.forbid_intermediates}
    allowed = frozenset(a.id for a in ses.attractors) - blocked
    q = SequentialQuery(src, tgt, mode, k, forbidden, allowed, ses.cfg.min_steps)
    return k, sequential_paths(ses.g, q)


def cmd_paths(cfg: RunConfig, source: str, target: str) -> dict:
    ses = Session(cfg)
    src, tgt = ses.select(source), ses.select(target)
    if src.id == tgt.id:
        raise InputError("source and target must be different attractors")
    mode = SeqMode.parse(cfg.mode or "AST")
    k, paths = _paths(ses, src, tgt, mode, cfg.k)
    out = ses.header()
    out.update(source=src.id, target=tgt.id, k=k, paths=[
        {
            "mode": p.mode.value,
            "intermediates": list(p.intermediates),
            "controls": [ses.control_json(c) for c in p.controls],
            "total": p.total,
        }
        for p in paths
    ])
    return out


def _control_from_json(ses: Session, item) -> Control:
    try:
        return Control(frozenset(ses.node(x) for x in item["zero"]),
                       frozenset(ses.node(x) for x in item["one"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed control entry {item!r}") from exc


def cmd_verify(cfg: RunConfig, path_file) -> dict:
    ses = Session(cfg)
    if ses.g.n > MAX_ORACLE_NODES:
        raise StateSpaceTooLarge(f"verification is limited to {MAX_ORACLE_NODES} nodes")
    try:
        doc = json.loads(Path(path_file).read_text(encoding="utf-8"))
        source, target, entries = doc["source"], doc["target"], doc["paths"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed path file: {exc}") from exc
    src, tgt = ses.select(str(source)), ses.select(str(target))
    results = []
    for idx, entry in enumerate(entries):
        try:
            mids = [ses.select(str(x)).id for x in entry["intermediates"]]
            controls = [_control_from_json(ses, c) for c in entry["controls"]]
            mode = SeqMode.parse(entry["mode"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed path #{idx}: {exc}") from exc
        try:
            verdict = verify_path(ses.g, src, tgt, Schedule(controls, mids, mode.value))
        except ValueError as exc:
            raise InputError(f"path #{idx}: {exc}") from exc
        row = {"index": idx, "ok": verdict.ok}
        if not verdict.ok:
            row["failing_step"] = verdict.failing_step
            row["witness"] = None if verdict.witness is None else ses.state(verdict.witness)
            row["reason"] = verdict.reason
        results.append(row)
    return {"network": ses.name, "ok": all(r["ok"] for r in results), "verdicts": results}


def cmd_simulate(cfg: RunConfig, state: str, steps: int) -> dict:
    ses = Session(cfg)
    try:
        s0 = state_from_string(state)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if len(state.strip()) != ses.g.n:
        raise InputError(f"state must have {ses.g.n} bits")
    run = simulate(ses.g, s0, steps, cfg.seed)
    return {"network": ses.name, "seed": cfg.seed, "trajectory": [ses.state(s) for s in run]}


def bench_row(cfg: RunConfig, source: Optional[str] = None,
              target: Optional[str] = None) -> dict:
    ses = Session(cfg)
    if len(ses.attractors) < 2:
        raise InputError("network has fewer than two attractors")
    src = ses.select(source) if source else ses.attractors[0]
    tgt = ses.select(target) if target else ses.attractors[-1]
    row = {"network": ses.name, "V": ses.g.n, "E": ses.g.num_edges,
           "A": len(ses.attractors), "source": src.id, "target": tgt.id,
           "k": {}, "perturbations": {}, "paths": {}, "time": {}}
    for mode in SEQ_MODES:
        start = time.perf_counter()
        k, paths = _paths(ses, src, tgt, SeqMode(mode), cfg.k)
        best = shortest(paths)
        row["time"][mode] = round(time.perf_counter() - start, 3)
        row["k"][mode] = k
        row["perturbations"][mode] = best[0].total if best else None
        row["paths"][mode] = len(best)
    return row


def cmd_bench(cfg: RunConfig, models: Sequence, source: Optional[str] = None,
              target: Optional[str] = None) -> dict:
    rows = []
    for model in models:
        one = RunConfig(**{**cfg.__dict__, "model": Path(model)})
        try:
            rows.append(bench_row(one, source, target))
        except (InputError, StateSpaceTooLarge, ValueError) as exc:
            rows.append({"network": Path(model).stem, "error": str(exc)})
    return {"columns": list(BENCH_COLUMNS), "rows": rows}


# ---------------------------------------------------------------------------
# Table rendering


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[str(x) for x in header]] + [["-" if x is None else str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_table(command: str, doc: dict) -> str:
    if command == "bench":
        rows = []
        for r in doc["rows"]:
            if "error" in r:
                rows.append([r["network"], "error: " + r["error"]] + [None] * 11)
                continue
            rows.append([r["network"], r["V"], r["E"], r["A"]]
                        + [r["perturbations"][m] for m in SEQ_MODES]
                        + [r["paths"][m] for m in SEQ_MODES]
                        + [f"{r['time'][m]:.3f}" for m in SEQ_MODES])
        return _table(BENCH_COLUMNS, rows)
    if command == "verify":
        return _table(("path", "ok", "failing step", "witness"), [
            [v["index"], "yes" if v["ok"] else "no", v.get("failing_step"), v.get("witness")]
            for v in doc["verdicts"]])
    if command == "simulate":
        return _table(("step", "state"), list(enumerate(doc["trajectory"])))
    text = _table(("id", "name", "size", "states"), [
        [a["id"], a.get("name"), len(a["states"]), " ".join(a["states"])]
        for a in doc["attractors"]])
    if command == "basins":
        text += "\n" + _table(("id", "weak", "strong"), [
            [b["id"], " ".join(b["weak"]), " ".join(b["strong"])] for b in doc["basins"]])
    elif command == "control":
        text += f"\n{doc['mode']} A{doc['source']} -> A{doc['target']} (k={doc['k']})\n"
        text += _table(("size", "control"), [
            [c["size"], ", ".join(f"{n}={v}" for n, v in zip(c["nodes"], c["values"]))]
            for c in doc["controls"]])
    elif command == "paths":
        text += f"\nA{doc['source']} -> A{doc['target']} (k={doc['k']})\n"
        rows = []
        for p in doc["paths"]:
            steps = " -> ".join(
                "{" + ", ".join([f"{x}=0" for x in c["zero"]] + [f"{x}=1" for x in c["one"]])
                + "} A" + str(a)
                for c, a in zip(p["controls"], p["intermediates"]))
            rows.append([p["mode"], p["total"], steps])
        text += _table(("mode", "total", "steps"), rows)
    return text


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--max-n", type=int, default=MAX_NODES,
                        help="largest network analysed explicitly (default %(default)s)")
    common.add_argument("--labels", type=Path, help="file of 'name = selector' lines")
    common.add_argument("--seed", type=int, default=0)

    steer = argparse.ArgumentParser(add_help=False)
    steer.add_argument("--mode", choices=("OI", "OT", "OP", "ASI", "AST", "ASP"))
    steer.add_argument("-k", "--max-perturbations", dest="k", type=int)
    steer.add_argument("--forbid-node", dest="forbid_nodes", action="append", default=[],
                       metavar="NAME")
    steer.add_argument("--forbid-intermediate", dest="forbid_intermediates", action="append",
                       default=[], metavar="SELECTOR")
    steer.add_argument("--min-steps", type=int, default=1,
                       help="only report paths with at least this many control steps")

    parser = argparse.ArgumentParser(
        prog="bncontrol",
        description="Attractors, basins and source-target control of asynchronous Boolean networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("attractors", parents=[common], help="list attractors")
    p.add_argument("model", type=Path)
    p = sub.add_parser("basins", parents=[common], help="weak and strong basins")
    p.add_argument("model", type=Path)
    p.add_argument("attractor", nargs="?")
    p = sub.add_parser("control", parents=[common, steer], help="minimal one-step controls")
    p.add_argument("model", type=Path)
    p.add_argument("source")
    p.add_argument("target")
    p = sub.add_parser("paths", parents=[common, steer], help="sequential control paths")
    p.add_argument("model", type=Path)
    p.add_argument("source")
    p.add_argument("target")
    p = sub.add_parser("verify", parents=[common], help="check a paths JSON file")
    p.add_argument("model", type=Path)
    p.add_argument("path_file", type=Path)
    p = sub.add_parser("simulate", parents=[common], help="random asynchronous run")
    p.add_argument("model", type=Path)
    p.add_argument("state")
    p.add_argument("--steps", type=int, default=50)
    p = sub.add_parser("bench", parents=[common, steer], help="ASI/AST/ASP report over models")
    p.add_argument("models", type=Path, nargs="*")
    p.add_argument("--source")
    p.add_argument("--target")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        model=getattr(args, "model", None),
        command=args.command,
        mode=getattr(args, "mode", None),
        k=getattr(args, "k", None),
        forbid_nodes=getattr(args, "forbid_nodes", []),
        forbid_intermediates=getattr(args, "forbid_intermediates", []),
        format=args.format,
        seed=args.seed,
        max_n=args.max_n,
        labels=args.labels,
        min_steps=getattr(args, "min_steps", 1),
    )


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, dict, str]:
    """Execute a command; returns ``(exit code, document, rendered output)``."""
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        if args.command == "attractors":
            doc = cmd_attractors(cfg)
        elif args.command == "basins":
            doc = cmd_basins(cfg, args.attractor)
        elif args.command == "control":
            if cfg.mode and cfg.mode.startswith("AS"):
                raise InputError("control takes a one-step mode (OI, OT, OP)")
            doc = cmd_control(cfg, args.source, args.target)
        elif args.command == "paths":
            if cfg.mode and not cfg.mode.startswith("AS"):
                raise InputError("paths takes a sequential mode (ASI, AST, ASP)")
            doc = cmd_paths(cfg, args.source, args.target)
        elif args.command == "verify":
            doc = cmd_verify(cfg, args.path_file)
        elif args.command == "simulate":
            doc = cmd_simulate(cfg, args.state, args.steps)
        else:
            doc = cmd_bench(cfg, args.models, args.source, args.target)
    except InputError as exc:
        doc = {"error": str(exc)}
        return EXIT_INPUT, doc, json.dumps(doc) + "\n"
    except StateSpaceTooLarge as exc:
        doc = {"error": str(exc)}
        return EXIT_BOUND, doc, json.dumps(doc) + "\n"
    code = EXIT_OK
    if args.command == "verify" and not doc["ok"]:
        code = EXIT_VERIFY
    if cfg.format == "table":
        text = render_table(args.command, doc)
    else:
        text = json.dumps(doc, indent=2) + "\n"
    return code, doc, text


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, doc, text = run(argv)
    stream = sys.stderr if "error" in doc and len(doc) == 1 else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
