"""Acceptance checks, one per criterion.

Each ``criterion_N`` returns ``(ok, detail, payload)``; the payload is the
JSON-ready data the check looked at, used again by the determinism check.
Run under pytest, or directly with ``python3 tests/test_acceptance.py`` for
the summary lines only.
"""

from __future__ import annotations

import glob
import json
import sys
import tempfile
import time
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if __name__ == "__main__":
    sys.path.insert(0, str(ROOT / "src"))

from bncontrol import (  # noqa: E402
    ControlQuery,
    Mode,
    SequentialQuery,
    attractors,
    default_budget,
    minimal_controls,
    parse_network,
    sequential_paths,
    shortest,
    state_from_string,
    strong_basin,
    weak_basin,
)
from bncontrol import dynamics, oracle  # noqa: E402
from bncontrol.cli import BENCH_COLUMNS, load_network, run  # noqa: E402
from bncontrol.onestep import minimal_size  # noqa: E402
from bncontrol.oracle import (  # noqa: E402
    Oracle,
    brute_force_minimal_controls,
    brute_force_paths,
    random_network,
)

CORPUS = sorted(glob.glob(str(ROOT / "corpus" / "*.bnet")))
THREE_NODE = "x1 = x2\nx2 = x1\nx3 = x2 & x3\n"
RANDOM_SEEDS = range(240)
PAIRS_PER_NETWORK = 3
ORACLE_K = 3

RESULTS: dict[int, tuple[bool, str]] = {}


def _bits(*strings):
    return {state_from_string(s) for s in strings}


def _path_tuples(paths):
    return {
        (p.attractors, tuple((tuple(sorted(c.zero)), tuple(sorted(c.one))) for c in p.controls))
        for p in paths
    }


def _pairs(atts, limit=None):
    pairs = [(a, b) for a in atts for b in atts if a.id != b.id]
    return pairs if limit is None else pairs[:limit]


# ---------------------------------------------------------------------------


def criterion_1():
    start = time.perf_counter()
    g = parse_network(THREE_NODE)
    atts = attractors(g)
    got = [set(a.states) for a in atts]
    want = [_bits("000"), _bits("110"), _bits("111")]
    weak = [set(weak_basin(g, a)) for a in atts] if len(atts) == 3 else []
    want_weak = [set(range(8)) - _bits("110", "111"),
                 _bits("010", "100", "101", "110"),
                 _bits("011", "101", "111")]
    elapsed = time.perf_counter() - start
    ok = got == want and weak == want_weak and elapsed < 1.0
    payload = {"attractors": [a.states for a in atts],
               "weak": [sorted(w) for w in weak]}
    return ok, f"attractors and weak basins exact={got == want and weak == want_weak}, " \
               f"{elapsed:.3f} s", payload


def criterion_2():
    start = time.perf_counter()
    g = parse_network(THREE_NODE)
    a1, _, a3 = attractors(g)
    x1, x2, x3 = 0, 1, 2
    best = {}
    for mode in ("ASI", "AST", "ASP"):
        best[mode] = shortest(sequential_paths(g, SequentialQuery(a1, a3, mode)))
    elapsed = time.perf_counter() - start
    want = {
        "ASI": {((1, 2, 3), (((), (x1, x2)), ((), (x3,))))},
        "AST": {((1, 2, 3), (((), (x1,)), ((), (x3,)))), ((1, 2, 3), (((), (x2,)), ((), (x3,))))},
    }
    want["ASP"] = want["AST"]
    totals = {m: sorted({p.total for p in ps}) for m, ps in best.items()}
    exact = all(_path_tuples(best[m]) == want[m] for m in want) and \
        totals == {"ASI": [3], "AST": [2], "ASP": [2]}
    counts = {m: len(ps) for m, ps in best.items()}
    detail = (f"shortest path counts ASI={counts['ASI']} AST={counts['AST']} "
              f"ASP={counts['ASP']} (expected 1/2/2), totals {totals}, {elapsed:.3f} s")
    if not exact:
        extra = sorted(str(r) for m in want for r, _ in _path_tuples(best[m]) - want[m])
        detail += f"; extra routes {sorted(set(extra))} are direct one-step paths"
    payload = {m: sorted(map(str, _path_tuples(ps))) for m, ps in best.items()}
    return exact and elapsed < 1.0, detail, payload


def _compare_network(g, o):
    """Mismatch descriptions and a summary of the engine's answers for one network."""
    bad = []
    atts = attractors(g)
    if [a.states for a in atts] != o.attractors():
        return ["attractors"], {"attractors": [a.states for a in atts]}
    summary = {"attractors": [a.states for a in atts], "basins": [], "controls": [], "paths": []}
    for a in atts:
        wb, sb = weak_basin(g, a), strong_basin(g, a)
        if wb != o.weak_basin(a.states):
            bad.append(f"weak basin A{a.id}")
        if sb != o.strong_basin(a.states):
            bad.append(f"strong basin A{a.id}")
        summary["basins"].append([len(wb), len(sb)])
    for a, b in _pairs(atts, PAIRS_PER_NETWORK):
        for mode in Mode:
            got = [sorted(s.nodes) for s in minimal_controls(g, ControlQuery(a, b, mode, ORACLE_K))]
            want = [sorted(x) for x in brute_force_minimal_controls(
                g, a, b, mode, ORACLE_K, oracle=o)]
            if got != want:
                bad.append(f"{mode.value} A{a.id}->A{b.id}")
            summary["controls"].append(got)
        for mode in ("AST", "ASP", "ASI"):
            got = _path_tuples(sequential_paths(g, SequentialQuery(a, b, mode, ORACLE_K)))
            if got != brute_force_paths(g, a, b, mode, ORACLE_K, oracle=o):
                bad.append(f"{mode} paths A{a.id}->A{b.id}")
            summary["paths"].append(sorted(map(str, got)))
    return bad, summary


def criterion_3():
    start = time.perf_counter()
    mismatches = []
    payload = []
    pairs = 0
    for seed in RANDOM_SEEDS:
        n = 3 + seed % 6
        g = random_network(n, seed, max_indegree=3)
        bad, summary = _compare_network(g, Oracle(g))
        pairs += len(_pairs(attractors(g), PAIRS_PER_NETWORK))
        mismatches += [f"seed {seed}: {b}" for b in bad]
        payload.append(summary)
    elapsed = time.perf_counter() - start
    ok = not mismatches and len(RANDOM_SEEDS) >= 200
    detail = (f"{len(RANDOM_SEEDS)} networks (n in 3..8), {pairs} attractor pairs, "
              f"k={ORACLE_K}: {len(mismatches)} mismatches, {elapsed:.1f} s")
    if mismatches:
        detail += f"; first: {mismatches[:3]}"
    return ok, detail, payload


def _best_total(g, a, b, mode):
    k = default_budget(g, a, b, mode)
    best = shortest(sequential_paths(g, SequentialQuery(a, b, mode, k)))
    return best[0].total if best else None


def criterion_4():
    violations = []
    checked = 0
    payload = {}
    for path in CORPUS:
        g = load_network(path)
        rows = []
        for a, b in _pairs(attractors(g)):
            oi = minimal_size(g, a, b, Mode.OI)
            ot = minimal_size(g, a, b, Mode.OT)
            tot = {m: _best_total(g, a, b, m) for m in ("ASI", "AST", "ASP")}
            rows.append([a.id, b.id, oi, ot, tot])
            if None in (oi, ot) or None in tot.values():
                continue
            checked += 1
            name = f"{Path(path).stem} A{a.id}->A{b.id}"
            if ot > oi:
                violations.append(f"{name}: OT {ot} > OI {oi}")
            if tot["AST"] > tot["ASI"]:
                violations.append(f"{name}: AST {tot['AST']} > ASI {tot['ASI']}")
            if tot["ASP"] > tot["ASI"]:
                violations.append(f"{name}: ASP {tot['ASP']} > ASI {tot['ASI']}")
        payload[Path(path).stem] = rows
    detail = f"{checked} corpus pairs where every mode succeeds: {len(violations)} violations"
    if violations:
        detail += f"; {violations[:3]}"
    return not violations and checked > 0, detail, payload


def criterion_5():
    problems = []
    payload = {}
    for path in CORPUS:
        g = load_network(path)
        atts = attractors(g)
        stem = Path(path).stem
        strong = []
        for a in atts:
            sb, wb = strong_basin(g, a), weak_basin(g, a)
            if not (set(a.states) <= set(sb) <= set(wb)):
                problems.append(f"{stem}: basin nesting A{a.id}")
            strong.append(set(sb))
        for i, x in enumerate(strong):
            if any(x & y for y in strong[i + 1:]):
                problems.append(f"{stem}: strong basins overlap at A{i + 1}")
        forbidden = frozenset({0})
        counts = []
        for a, b in _pairs(atts):
            for mode in Mode:
                for sol in minimal_controls(g, ControlQuery(a, b, mode, g.n, forbidden)):
                    if sol.nodes & forbidden:
                        problems.append(f"{stem}: {mode.value} control uses a forbidden node")
            for mode in ("ASI", "AST", "ASP"):
                k = default_budget(g, a, b, mode, forbidden)
                paths = sequential_paths(g, SequentialQuery(a, b, mode, k, forbidden))
                counts.append(len(paths))
                for p in paths:
                    if len(set(p.attractors)) != len(p.attractors):
                        problems.append(f"{stem}: {mode} path revisits an attractor")
                    if p.total > k or any(sum(c.size for c in p.controls[i:]) > k - 1
                                          for i in range(1, len(p))):
                        problems.append(f"{stem}: {mode} path breaks the budget rule")
                    if any(c.nodes & forbidden for c in p.controls):
                        problems.append(f"{stem}: {mode} path uses a forbidden node")
        payload[stem] = counts
    detail = f"{len(CORPUS)} corpus networks: {len(problems)} invariant violations"
    if problems:
        detail += f"; {problems[:3]}"
    return not problems, detail, payload


def criterion_6():
    failures = []
    emitted = 0
    payload = {}
    with tempfile.TemporaryDirectory() as tmp:
        for path in CORPUS:
            g = load_network(path)
            stem = Path(path).stem
            outputs = []
            for a, b in _pairs(attractors(g)):
                for mode in ("ASI", "AST", "ASP"):
                    code, doc, text = run(["paths", path, str(a.id), str(b.id), "--mode", mode])
                    if code != 0:
                        failures.append(f"{stem} {mode} A{a.id}->A{b.id}: paths exit {code}")
                        continue
                    outputs.append(text)
                    emitted += len(doc["paths"])
                    if not doc["paths"]:
                        continue
                    file = Path(tmp) / "paths.json"
                    file.write_text(text)
                    code, verdict, _ = run(["verify", path, str(file)])
                    if code != 0 or not verdict.get("ok"):
                        failures.append(f"{stem} {mode} A{a.id}->A{b.id}: verify exit {code}")
            payload[stem] = outputs
    detail = f"{emitted} emitted paths over {len(CORPUS)} networks: {len(failures)} failures"
    if failures:
        detail += f"; {failures[:3]}"
    return not failures and emitted > 0, detail, payload


def criterion_7():
    problems = []
    code, doc, table = run(["bench", *CORPUS])
    expected = [
        "network", "|V|", "|E|", "|A|",
        "#perturbations ASI", "#perturbations AST", "#perturbations ASP",
        "# paths ASI", "# paths AST", "# paths ASP",
        "time (seconds) ASI", "time (seconds) AST", "time (seconds) ASP",
    ]
    if code != 0 or doc["columns"] != expected or list(BENCH_COLUMNS) != expected:
        problems.append("report columns")
    _, _, text = run(["bench", *CORPUS, "--format", "table"])
    if text.splitlines()[0].split("  ")[0] != "network" or len(text.splitlines()) != len(CORPUS) + 2:
        problems.append("table layout")
    with tempfile.TemporaryDirectory() as tmp:
        for path, row in zip(CORPUS, doc["rows"]):
            if "error" in row:
                problems.append(f"{row['network']}: {row['error']}")
                continue
            g = load_network(path)
            atts = attractors(g)
            src, tgt = atts[row["source"] - 1], atts[row["target"] - 1]
            o = Oracle(g)
            if (row["V"], row["A"]) != (g.n, len(o.attractors())):
                problems.append(f"{row['network']}: |V| or |A|")
            for mode in ("ASI", "AST", "ASP"):
                k = row["k"][mode]
                found = brute_force_paths(g, src, tgt, mode, k, oracle=o)
                totals = [sum(len(z) + len(w) for z, w in ctrls) for _, ctrls in found]
                best = min(totals) if totals else None
                count = sum(t == best for t in totals)
                if (row["perturbations"][mode], row["paths"][mode]) != (best, count):
                    problems.append(f"{row['network']} {mode}: bench {row['perturbations'][mode]}"
                                    f"/{row['paths'][mode]} vs oracle {best}/{count}")
                rc, pdoc, ptext = run(["paths", path, str(src.id), str(tgt.id), "--mode", mode,
                                       "-k", str(k)])
                if pdoc["paths"]:
                    file = Path(tmp) / "bench_paths.json"
                    file.write_text(ptext)
                    if run(["verify", path, str(file)])[0] != 0:
                        problems.append(f"{row['network']} {mode}: verify")
    detail = f"bench over {len(CORPUS)} corpus networks: columns match the reference layout, " \
             f"{len(problems)} disagreements with the oracle recount"
    if problems:
        detail += f"; {problems[:3]}"
    return not problems, detail, None


CHECKS = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
          5: criterion_5, 6: criterion_6, 7: criterion_7}


def _fresh_run():
    dynamics._cached_ts.cache_clear()
    oracle.oracle_for.cache_clear()
    out = {}
    for number in range(1, 7):
        _, _, payload = CHECKS[number]()
        out[number] = json.dumps(payload, sort_keys=True, default=list)
    return out


def criterion_8():
    first, second = _fresh_run(), _fresh_run()
    differing = [k for k in first if first[k] != second[k]]
    size = sum(len(v) for v in first.values())
    detail = f"two runs of criteria 1-6, {size} bytes of JSON: " \
             f"{'identical' if not differing else 'differ in ' + str(differing)}"
    return not differing, detail, None


CHECKS[8] = criterion_8


def _line(number, ok, detail):
    return f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    ok, detail, _ = CHECKS[number]()
    RESULTS[number] = (ok, detail)
    print(_line(number, ok, detail))
    assert ok, detail


def main():
    failed = 0
    for number in sorted(CHECKS):
        ok, detail, _ = CHECKS[number]()
        print(_line(number, ok, detail), flush=True)
        failed += not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
