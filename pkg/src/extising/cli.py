"""Command-line interface: ``extising <command> ...``.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage or
input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from . import braid as br
from . import rsymbols as rs
from . import twists as tw
from .census import symmetric_column_permutation_census
from .fsymbols import all_f_symbols, enumerate_bicharacters, phi_from_bicharacter, trace_class, \
    verify_pentagon
from .model import AnyonModel, build_extended_ising, validate_model
from .reproduce import SCHEMA_VERSION, RunManifest, digest, export_model_bundle, \
    run_reproduce_all, summary_table

OUT_ENV = "EXTISING_OUT"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _load_model(path) -> AnyonModel:
    try:
        m = AnyonModel.load(path)
    except FileNotFoundError:
        raise UsageError(f"model file not found: {path}") from None
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read model file {path}: {exc}") from None
    if m.k is None:
        raise UsageError("model is not a member of the extended Ising hierarchy (no k)")
    if m != build_extended_ising(m.k):
        raise UsageError(f"model in {path} differs from the level-{m.k} hierarchy model")
    return m


def _pick(seq, idx, what):
    if not 0 <= idx < len(seq):
        raise UsageError(f"{what} {idx} out of range [0, {len(seq)})")
    return seq[idx]


def _word(text: str):
    try:
        w = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad braid word {text!r}") from None
    if not w or any(x == 0 or abs(x) > 3 for x in w):
        raise UsageError("braid word letters must be nonzero and |letter| <= 3")
    return w


def _gate_json(g: br.GateMatrix, k: int):
    nf = br.match_named_gate(g, k)
    return {"matrix": g.to_json(), "is_clifford": br.is_clifford(g, k),
            "named_form": None if nf is None else nf.to_json()}


# ---------------------------------------------------------------------------
# commands: each returns (passed, result)
# ---------------------------------------------------------------------------

def cmd_model_build(a):
    m = build_extended_ising(a.k)
    if a.file:
        m.save(a.file)
    return True, m.to_json()


def cmd_model_validate(a):
    try:
        m = AnyonModel.load(a.file)
    except FileNotFoundError:
        raise UsageError(f"model file not found: {a.file}") from None
    rep = validate_model(m)
    return rep.ok, rep.to_json()


def cmd_f_enumerate(a):
    rows = []
    for i, b in enumerate(enumerate_bicharacters(a.k)):
        phi = phi_from_bicharacter(b)
        rows.append({"index": i, "M": b.M.astype(int).tolist(), "phi": phi.astype(int).tolist(),
                     "trace": trace_class(phi), "f_indices": {"+": 2 * i, "-": 2 * i + 1}})
    return True, {"k": a.k, "count": len(rows), "bicharacters": rows}


def cmd_f_pentagon(a):
    m = _load_model(a.model)
    bs = enumerate_bicharacters(m.k)
    _pick(bs, a.bicharacter, "bicharacter index")
    f = all_f_symbols(m)[2 * a.bicharacter + (a.sign == "-")]
    rep = verify_pentagon(f, jobs=a.jobs)
    return rep.passed, {"k": m.k, "bicharacter": a.bicharacter, "sign": a.sign, **rep.to_json()}


def cmd_f_census(a):
    try:
        rep = symmetric_column_permutation_census(a.order)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return rep.passed, rep.to_json()


def _solutions(a):
    m = _load_model(a.model)
    f = _pick(all_f_symbols(m), a.f_index, "f-index")
    return m, f, rs.solve_r(f)


def cmd_r_solve(a):
    m, f, sols = _solutions(a)
    rows = []
    passed = bool(sols)
    for i, r in enumerate(sols):
        row = {"index": i, "r_symbols": r.to_json(), "census": rs.census(r).to_json(),
               "normalized_diagonal": [x.to_json() for x in r.normalized_diagonal()],
               "trace_constraint": rs.trace_constraint_holds(r)}
        if a.mirror:
            row["mirror_hexagon"] = rs.verify_hexagon(r, mirror=True).passed
        rows.append(row)
    res = {"k": m.k, "f_index": a.f_index, "trace": trace_class(f.phi), "count": len(sols),
           "solutions": rows}
    if a.mirror:
        res["mirror_survivors"] = sum(r["mirror_hexagon"] for r in rows)
    return passed, res


def cmd_r_census(a):
    if a.model is not None:
        m = _load_model(a.model)
    elif a.k is not None:
        m = build_extended_ising(a.k)
    else:
        raise UsageError("r census needs --model FILE or --k K")
    fs = all_f_symbols(m)
    idx = range(len(fs)) if a.f_index is None else [a.f_index]
    rows, ok = [], True
    for i in idx:
        f = _pick(fs, i, "f-index")
        sols = rs.solve_r(f)
        got = sorted({rs.census(r).as_tuple() for r in sols})
        want = rs.table_row(m.k, trace_class(f.phi))
        good = got == [want]
        ok &= good
        rows.append({"f_index": i, "trace": trace_class(f.phi), "solutions": len(sols),
                     "census": [list(c) for c in got], "table_row": list(want), "matches": good})
    return ok, {"k": m.k, "columns": ["+1", "-1", "+i", "-i"], "rows": rows}


def cmd_r_sum_squares(a):
    try:
        found = rs.sum_of_squares_solutions(a.k) if 1 <= a.k <= 20 else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if found is None:
        raise UsageError("k must be in 1..20")
    want = rs.sum_of_squares_characterization(a.k)
    return found == want, {"k": a.k, "solutions": [list(p) for p in found],
                           "matches_characterization": found == want}


def cmd_braid(a):
    m = _load_model(a.model)
    fs = all_f_symbols(m)
    if a.mode == "table":
        rows = []
        ok = True
        for fi, f in enumerate(fs):
            for ri, r in enumerate(rs.solve_r(f)):
                gens = {str(g): _gate_json(br.braid_generator(g, f, r), m.k) for g in (1, 2, 3)}
                ok &= all(v["is_clifford"] for v in gens.values())
                rows.append({"f_index": fi, "r_index": ri, "generators": gens})
        F = {str(fi): _gate_json(br.f_matrix(f), m.k) for fi, f in enumerate(fs)}
        return ok, {"k": m.k, "f_matrices": F, "entries": rows}
    if a.f is None or a.r is None or a.word is None:
        raise UsageError("braid needs --f IDX --r IDX --word LETTERS (or the 'table' mode)")
    f = _pick(fs, a.f, "f index")
    r = _pick(rs.solve_r(f), a.r, "r index")
    word = _word(a.word)
    g = br.braid_word(word, f, r)
    res = {"k": m.k, "f_index": a.f, "r_index": a.r, "word": word, **_gate_json(g, m.k)}
    return res["is_clifford"], res


def _check_layers(k):
    if not 1 <= k <= tw.MAX_K:
        raise UsageError(f"--layers must be in 1..{tw.MAX_K}")


def cmd_twists(a):
    _check_layers(a.layers)
    k = a.layers
    if a.action == "group":
        g = tw.generate_group(k)
        gens = tw.generators(k)
        return len(g) == tw.group_order_formula(k), {
            "layers": k, "order": len(g), "order_formula": tw.group_order_formula(k),
            "generators": [{"name": s.name, **s.to_json()} for s in gens]}
    if a.action == "theorem":
        rep = tw.verify_selfinverse_theorem(k)
        return rep.passed, rep.to_json()
    summaries = tw.classify_group(k)
    classes = []
    for s in summaries:
        d = s.to_json(labels=(k == 2))
        d["id"] = s.cls.index
        if not a.class_reps_only:
            d["members"] = [tw.classify_twist(g, s.cls.index).to_json(labels=(k == 2))
                            for g in s.cls.elements]
        classes.append(d)
    return True, {"layers": k, "class_count": len(classes), "classes": classes}


def cmd_export(a):
    try:
        digests = export_model_bundle(a.k, a.f_index, a.r_index, a.out)
    except IndexError as exc:
        raise UsageError(str(exc)) from None
    return True, {"directory": str(a.out), "files": digests}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _scalar(v) -> bool:
    return isinstance(v, (str, int, float, bool)) or v is None


def render_table(res: dict) -> str:
    lines = []
    for key, v in res.items():
        if _scalar(v):
            lines.append(f"{key:<24} {v}")
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            cols = [c for c in v[0] if _scalar(v[0][c])]
            lines.append(f"{key}:")
            if cols:
                w = {c: max(len(c), *(len(str(row.get(c))) for row in v)) for c in cols}
                lines.append("  " + "  ".join(f"{c:>{w[c]}}" for c in cols))
                for row in v:
                    lines.append("  " + "  ".join(f"{str(row.get(c)):>{w[c]}}" for c in cols))
        elif isinstance(v, list) and all(_scalar(x) or (isinstance(x, list) and all(map(_scalar, x)))
                                         for x in v):
            lines.append(f"{key:<24} {v}")
        else:
            lines.append(f"{key:<24} <{type(v).__name__}; use --format json>")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="extising", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--out", dest="out_dir", default=None,
                   help=f"directory for JSON reports (default: ${OUT_ENV})")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--format", choices=("json", "table"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("model", help="build or validate anyon models")
    msub = pm.add_subparsers(dest="action", required=True)
    b = msub.add_parser("build", parents=[common])
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--out", dest="file", default=None, help="write the model JSON here")
    b.set_defaults(fn=cmd_model_build)
    v = msub.add_parser("validate", parents=[common])
    v.add_argument("file")
    v.set_defaults(fn=cmd_model_validate)

    pf = sub.add_parser("f", help="bicharacters, F-symbols and the pentagon")
    fsub = pf.add_subparsers(dest="action", required=True)
    e = fsub.add_parser("enumerate", parents=[common])
    e.add_argument("--k", type=int, required=True)
    e.set_defaults(fn=cmd_f_enumerate)
    pe = fsub.add_parser("pentagon", parents=[common])
    pe.add_argument("--model", required=True)
    pe.add_argument("--bicharacter", type=int, default=0)
    pe.add_argument("--sign", choices=("+", "-"), default="+")
    pe.set_defaults(fn=cmd_f_pentagon)
    c = fsub.add_parser("census", parents=[common])
    c.add_argument("--order", type=int, required=True)
    c.set_defaults(fn=cmd_f_census)

    pr = sub.add_parser("r", help="hexagon solutions")
    rsub = pr.add_subparsers(dest="action", required=True)
    s = rsub.add_parser("solve", parents=[common])
    s.add_argument("--model", required=True)
    s.add_argument("--f-index", type=int, default=0)
    s.add_argument("--mirror", action="store_true", help="also check the reversed-braiding hexagon")
    s.set_defaults(fn=cmd_r_solve)
    rc = rsub.add_parser("census", parents=[common])
    rc.add_argument("--model", default=None)
    rc.add_argument("--k", type=int, default=None)
    rc.add_argument("--f-index", type=int, default=None)
    rc.set_defaults(fn=cmd_r_census)
    sq = rsub.add_parser("sum-squares", parents=[common])
    sq.add_argument("--k", type=int, required=True)
    sq.set_defaults(fn=cmd_r_sum_squares)

    pb = sub.add_parser("braid", parents=[common], help="braid-word unitaries")
    pb.add_argument("mode", nargs="?", choices=("table",), default=None)
    pb.add_argument("--model", required=True)
    pb.add_argument("--f", type=int, default=None)
    pb.add_argument("--r", type=int, default=None)
    pb.add_argument("--word", default=None, help="comma separated, e.g. 1,2,-1")
    pb.set_defaults(fn=cmd_braid, action=None)

    pt = sub.add_parser("twists", parents=[common], help="surface-code symmetry groups")
    pt.add_argument("action", choices=("group", "classify", "theorem"))
    pt.add_argument("--layers", type=int, required=True)
    pt.add_argument("--class-reps-only", action="store_true")
    pt.set_defaults(fn=cmd_twists)

    rp = sub.add_parser("reproduce", parents=[common], help="run every acceptance criterion")
    rp.add_argument("--out", dest="out_dir", default=argparse.SUPPRESS)
    rp.add_argument("--criteria", default=None, help="comma separated subset, e.g. 1,2,7")
    rp.set_defaults(fn=None, action=None)

    ex = sub.add_parser("export", parents=[common], help="write a model bundle")
    ex.add_argument("--k", type=int, required=True)
    ex.add_argument("--f-index", type=int, default=0)
    ex.add_argument("--r-index", type=int, default=0)
    ex.add_argument("--out", required=True, help="bundle directory")
    ex.set_defaults(fn=cmd_export, action=None)
    return p


def _emit(args, name, params, passed, result, wall):
    envelope = {"schema_version": SCHEMA_VERSION, "command": name, "parameters": params,
                "passed": bool(passed), "result": result}
    if args.format == "json":
        print(json.dumps(envelope, indent=1, sort_keys=True, ensure_ascii=False))
    else:
        print(f"{name}: {'PASS' if passed else 'FAIL'}")
        print(render_table(result))
    out_dir = args.out_dir or os.environ.get(OUT_ENV)
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = name.replace(" ", "_")
        (out / f"{stem}.json").write_text(
            json.dumps(envelope, indent=1, sort_keys=True, ensure_ascii=False) + "\n")
        man = RunManifest(name, params, digest(envelope), wall)
        (out / f"{stem}.manifest.json").write_text(json.dumps(man.to_json(), indent=1) + "\n")


_NOT_PARAMS = {"fn", "command", "action", "out_dir", "jobs", "format"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    t0 = time.perf_counter()
    try:
        if args.command == "reproduce":
            return _reproduce(args)
        name = " ".join(x for x in (args.command, args.action, getattr(args, "mode", None)) if x)
        params = {k: v for k, v in vars(args).items() if k not in _NOT_PARAMS and k != "mode"}
        passed, result = args.fn(args)
    except UsageError as exc:
        print(f"extising: error: {exc}", file=sys.stderr)
        return 2
    _emit(args, name, params, passed, result, time.perf_counter() - t0)
    return 0 if passed else 1


def _reproduce(args) -> int:
    crit = None
    if args.criteria:
        try:
            crit = [int(x) for x in args.criteria.split(",")]
        except ValueError:
            raise UsageError("--criteria takes comma separated integers") from None
    out = args.out_dir or os.environ.get(OUT_ENV) or "reproduce-out"

    def log(msg):
        print(msg, file=sys.stderr, flush=True)

    try:
        code, results, manifest = run_reproduce_all(out, jobs=args.jobs, criteria=crit, log=log)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, "all_passed": code == 0,
                          "result_digest": manifest.result_digest, "out": str(out),
                          "criteria": [{"id": r.id, "name": r.name, "passed": r.passed}
                                       for r in results]}, indent=1, sort_keys=True))
    else:
        print(summary_table(results))
        print(f"digest {manifest.result_digest}")
    if code:
        failed = next(r for r in results if not r.passed)
        print(f"extising: criterion {failed.id} ({failed.name}) failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
