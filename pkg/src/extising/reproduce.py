"""Acceptance criteria as runnable checks, plus bundle export."""
from __future__ import annotations

import hashlib
import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import braid as br
from . import rsymbols as rs
from . import twists as tw
from .census import symmetric_column_permutation_census
from .cyclo import CycloNumber
from .fsymbols import (FSymbols, all_f_symbols, enumerate_bicharacters, f_symbols_from_phi,
                       trace_class, verify_pentagon)
from .model import AnyonModel, build_extended_ising, validate_model

SCHEMA_VERSION = "1"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    result_digest: str
    wall_time_s: float
    version: str = __version__

    def to_json(self):
        return {"schema_version": SCHEMA_VERSION, "command": self.command,
                "parameters": self.parameters, "version": self.version,
                "wall_time_s": round(self.wall_time_s, 3), "result_digest": self.result_digest}


# ---------------------------------------------------------------------------
# shared solved data
# ---------------------------------------------------------------------------

def _solve_worker(args):
    k, fi = args
    f = all_f_symbols(build_extended_ising(k))[fi]
    return [r.to_json() for r in rs.solve_r(f)]


class Context:
    """Lazily built models, F-sets and hexagon solutions for one run."""

    def __init__(self, jobs: int = 1):
        self.jobs = max(1, int(jobs))
        self._models = {}
        self._fs = {}
        self._rs = {}

    def model(self, k) -> AnyonModel:
        if k not in self._models:
            self._models[k] = build_extended_ising(k)
        return self._models[k]

    def fsets(self, k) -> list[FSymbols]:
        if k not in self._fs:
            self._fs[k] = all_f_symbols(self.model(k))
        return self._fs[k]

    def solutions(self, k) -> list[list]:
        if k not in self._rs:
            fs = self.fsets(k)
            if self.jobs > 1:
                with ProcessPoolExecutor(self.jobs) as ex:
                    raw = list(ex.map(_solve_worker, [(k, i) for i in range(len(fs))]))
                self._rs[k] = [[rs.RSymbols.from_json(d, f) for d in sols]
                               for f, sols in zip(fs, raw)]
            else:
                self._rs[k] = [rs.solve_r(f) for f in fs]
        return self._rs[k]


def _phase_class(diag) -> tuple:
    """Multiset of 16th-root indices, minimised over global phase."""
    idx = [x.root_index() for x in diag]
    if any(i is None for i in idx):
        raise ValueError("diagonal entry is not a root of unity")
    return min(tuple(sorted((i + m) % 16 for i in idx)) for m in range(16))


def _roots(values) -> tuple:
    return _phase_class([CycloNumber.zeta({1: 0, -1: 8, 1j: 4, -1j: 12}[v]) for v in values])


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def c1_hierarchy(ctx):
    rows, ok = [], True
    for k, want in zip(range(1, 5), (3, 5, 9, 17)):
        m = ctx.model(k)
        rep = validate_model(m)
        qd = m.qdim[m.beta] == CycloNumber.sqrt2() ** k
        good = rep.ok and m.n == want and qd
        ok &= good
        rows.append({"k": k, "charges": m.n, "violations": len(rep.violations),
                     "qdim_beta_exact": qd, "ok": good})
    return ok, {"levels": rows}


def c2_bicharacters(ctx):
    counts = {k: len(enumerate_bicharacters(k)) for k in (1, 2, 3)}
    traces = Counter(trace_class(f.phi) for f in ctx.fsets(2)[::2])
    ok = counts[1] == 1 and counts[2] == 4 and dict(traces) == {4: 1, 0: 3}
    return ok, {"k1_bicharacters": counts[1], "k2_bicharacters": counts[2],
                "k3_bicharacters": counts[3],
                "k2_trace_distribution": {str(t): c for t, c in sorted(traces.items())}}


def c3_pentagon(ctx):
    rows, ok = [], True
    for k in (1, 2):
        for i, f in enumerate(ctx.fsets(k)):
            rep = verify_pentagon(f, jobs=ctx.jobs)
            ok &= rep.passed
            rows.append({"k": k, "f_index": i, "checked": rep.instances_checked,
                         "violations": rep.violation_count})
    for i in (0, 1):  # Sylvester bicharacter, both signs
        f = ctx.fsets(3)[i]
        rep = verify_pentagon(f, jobs=ctx.jobs)
        ok &= rep.passed
        rows.append({"k": 3, "f_index": i, "checked": rep.instances_checked,
                     "violations": rep.violation_count})
    mutations = []
    f1 = ctx.fsets(1)[0]
    for a in range(2):
        for b in range(2):
            phi = f1.phi.copy()
            phi[a, b] *= -1
            rep = verify_pentagon(f_symbols_from_phi(f1.model, phi, 1))
            mutations.append({"entry": [a, b], "violations": rep.violation_count})
            ok &= rep.violation_count >= 1
    return ok, {"runs": rows, "k1_mutations": mutations}


def c4_hexagon(ctx):
    k1 = [r for sols in ctx.solutions(1) for r in sols]
    target = _roots([1, 1j])
    k1_classes = sorted({_phase_class(r.beta_beta) for r in k1})
    has = target in k1_classes
    # the quoted overall phase e^{-i pi/8} on diag(1, i)
    literal = any(list(r.beta_beta) == [CycloNumber.zeta(15), CycloNumber.zeta(3)] for r in k1)
    k2 = {_phase_class(r.beta_beta) for sols in ctx.solutions(2) for r in sols}
    want = {_roots([1, 1, 1, -1]), _roots([1, 1j, 1j, -1])}
    ok = has and literal and k2 == want
    return ok, {"k1_solution_count": len(k1), "k1_contains_diag_1_i": has,
                "k1_has_phase_exp_minus_i_pi_over_8": literal,
                "k2_phase_classes": [list(c) for c in sorted(k2)],
                "k2_expected": [list(c) for c in sorted(want)]}


def c5_table_census(ctx):
    ok = True
    rows = []
    for k in (1, 2, 3):
        for i, (f, sols) in enumerate(zip(ctx.fsets(k), ctx.solutions(k))):
            tr = trace_class(f.phi)
            cs = sorted({rs.census(r).as_tuple() for r in sols})
            expected = rs.table_row(k, tr)
            bosons = sum(rs.statistics(j, f.phi) is rs.Statistics.BOSON for j in range(1 << k))
            good = (bool(sols) and cs == [expected]
                    and all(rs.trace_constraint_holds(r) for r in sols)
                    and bosons == ((1 << k) + tr) // 2)
            ok &= good
            rows.append({"k": k, "f_index": i, "trace": tr, "solutions": len(sols),
                         "census": [list(c) for c in cs], "table_row": list(expected),
                         "bosons": bosons, "ok": good})
    counts = {str(k): sorted({r["solutions"] for r in rows if r["k"] == k}) for k in (1, 2, 3)}
    return ok, {"solution_counts": counts, "per_f": rows}


def c6_permutation_census(ctx):
    out, ok = {}, True
    for order in (4, 8):
        rep = symmetric_column_permutation_census(order)
        d = rep.delta_distribution
        if order == 4:
            good = rep.passed and set(d) <= {0, 4, -4} and (d.get(4, 0) + d.get(-4, 0)) > 0
        else:
            good = rep.passed and set(d) == {0}
        ok &= good
        out[f"order_{order}"] = {"symmetric": rep.symmetric_count,
                                 "permutations_per_matrix": rep.permutations_per_matrix,
                                 "delta_distribution": {str(a): b for a, b in sorted(d.items())}}
    return ok, out


def c7_sum_of_squares(ctx):
    ok = True
    res = {}
    for k in range(1, 21):
        found = rs.sum_of_squares_solutions(k)
        good = found == rs.sum_of_squares_characterization(k)
        ok &= good
        res[str(k)] = len(found)
    return ok, {"solution_counts": res}


def _is_s_family(name):
    return name is not None and name.replace("†", "").replace("^⊗", "").strip("S0123456789⊗") == ""


def c8_braiding(ctx):
    ok = True
    det = {}
    # k = 1: sigma_1 is S up to phase
    k1 = [(f, r) for f, sols in zip(ctx.fsets(1), ctx.solutions(1)) for r in sols]
    names = [br.match_named_gate(br.braid_generator(1, f, r), 1) for f, r in k1]
    det["k1_sigma1_named"] = sorted(Counter(n.name for n in names if n).items())
    good = all(n is not None and n.name in ("S", "S†") for n in names) and \
        any(n.name == "S" and n.translation == 0 for n in names)
    ok &= good
    # k = 2: S x S or CZ
    per_f = []
    for i, (f, sols) in enumerate(zip(ctx.fsets(2), ctx.solutions(2))):
        tr = trace_class(f.phi)
        primary = "S^⊗2" if tr == 0 else "CZ"
        hits = []
        for r in sols:
            for g in (1, 3):
                nf = br.match_named_gate(br.braid_generator(g, f, r), 2)
                hits.append(None if nf is None else (nf.name, nf.translation))
            s2 = br.braid_generator(2, f, r)
            F = br.f_matrix(f)
            nf = br.match_named_gate(F @ s2 @ F.dagger(), 2)
            hits.append(None if nf is None else (nf.name, nf.translation))
        family = all(h is not None and (_is_s_family(h[0]) if tr == 0 else h[0] == "CZ")
                     for h in hits)
        strict = any(h == (primary, 0) for h in hits)
        ok &= family and strict
        per_f.append({"f_index": i, "trace": tr, "matches": sorted(Counter(map(str, hits)).items()),
                      "all_in_family": family, "exact_primary_form": strict})
    det["k2_generators"] = per_f
    # F matrices
    fm = []
    for k in (1, 2, 3):
        for i, f in enumerate(ctx.fsets(k)):
            nf = br.match_named_gate(br.f_matrix(f), k)
            zero_diag = not np.diag(f.bicharacter.M).any()
            want = "SWAP·(H⊗H)" if (zero_diag and k == 2) else (
                f"(SWAP·(H⊗H))^⊗{k // 2}" if zero_diag else ("H" if k == 1 else f"H^⊗{k}"))
            good = nf is not None and nf.name == want
            ok &= good
            fm.append({"k": k, "f_index": i, "match": None if nf is None else nf.name, "ok": good})
    det["f_matrices"] = fm
    # braid relations, k <= 3
    rel = {}
    for k in (1, 2, 3):
        n_pairs = bad = 0
        for f, sols in zip(ctx.fsets(k), ctx.solutions(k)):
            for r in sols:
                s1, s2, s3 = (br.braid_generator(g, f, r) for g in (1, 2, 3))
                n_pairs += 1
                if not (s1 @ s2 @ s1 == s2 @ s1 @ s2 and s2 @ s3 @ s2 == s3 @ s2 @ s3
                        and s1 @ s3 == s3 @ s1):
                    bad += 1
        ok &= bad == 0
        rel[str(k)] = {"pairs": n_pairs, "failures": bad}
    det["braid_relations"] = rel
    # random words, k <= 2
    rng = random.Random(20240611)
    pairs = [(f, r) for k in (1, 2) for f, sols in zip(ctx.fsets(k), ctx.solutions(k))
             for r in sols]
    non_clifford = 0
    for _ in range(100):
        f, r = pairs[rng.randrange(len(pairs))]
        word = [rng.choice((1, 2, 3)) * rng.choice((1, -1)) for _ in range(rng.randint(1, 12))]
        if not br.is_clifford(br.braid_word(word, f, r), f.k):
            non_clifford += 1
    ok &= non_clifford == 0
    det["random_words"] = {"sampled": 100, "non_clifford": non_clifford}
    return ok, det


def c9_twists(ctx):
    det = {}
    g1 = tw.generate_group(1)
    g2 = tw.generate_group(2)
    summaries = tw.classify_group(2)
    special = [s for s in summaries
               if s.classification.self_inverse and s.classification.localisable_invariant
               and not s.classification.symmetry.is_identity]
    letters = sorted(s.classification.letter or "?" for s in special)
    no_fam2 = {g.packed for g in g2} == {g.packed for g in tw.generate_group(2, (1, 3))}
    det.update({"k1_symmetry_group_order": len(g1), "k2_symmetry_group_order": len(g2),
                "k2_conjugacy_classes": len(summaries),
                "k2_class_sizes": [s.cls.size for s in summaries],
                "k2_invariant_classes": [
                    {"size": s.cls.size, "level": s.classification.level,
                     "bosons": s.classification.boson_count,
                     "fermions": s.classification.fermion_count,
                     "letter": s.classification.letter} for s in special],
                "family2_redundant_k2": no_fam2})
    ok = (len(g1) == 2 and len(g2) == 72 and len(summaries) == 9 and letters == ["B", "C", "G"]
          and no_fam2)
    g3 = tw.generate_group(3)
    every = tw.enumerate_all_form_preserving(3)
    complete = set(every.tolist()) == {g.packed for g in g3}
    no_fam2_3 = {g.packed for g in g3} == {g.packed for g in tw.generate_group(3, (1, 3))}
    det.update({"k3_symmetry_group_order": len(g3), "k3_order_formula": tw.group_order_formula(3),
                "k3_all_form_preserving": int(len(every)), "k3_closure_complete": complete,
                "family2_redundant_k3": no_fam2_3})
    ok &= complete and len(g3) == tw.group_order_formula(3) and no_fam2_3
    thm = {}
    for k in (1, 2, 3):
        rep = tw.verify_selfinverse_theorem(k)
        ok &= rep.passed
        thm[str(k)] = {"elements": rep.elements_checked, "self_inverse": rep.self_inverse_count,
                       "counterexamples": len(rep.counterexamples)}
    det["selfinverse_theorem"] = thm
    return ok, det


def c10_determinism(ctx):
    """Internal repeat: cheap criteria twice, and the pentagon at jobs 1 vs jobs > 1."""
    fast = (c1_hierarchy, c2_bicharacters, c6_permutation_census, c7_sum_of_squares)
    a = [digest(fn(Context(1))) for fn in fast]
    b = [digest(fn(Context(1))) for fn in fast]
    f = ctx.fsets(2)[0]
    p1 = digest(verify_pentagon(f, jobs=1).to_json())
    p2 = digest(verify_pentagon(f, jobs=max(2, ctx.jobs)).to_json())
    ok = a == b and p1 == p2
    return ok, {"repeat_digests_equal": a == b, "pentagon_jobs_invariant": p1 == p2}


CRITERIA = [
    (1, "hierarchy", c1_hierarchy, 1.0),
    (2, "bicharacters", c2_bicharacters, 1.0),
    (3, "pentagon", c3_pentagon, 610.0),
    (4, "hexagon", c4_hexagon, 30.0),
    (5, "rtable_census", c5_table_census, 300.0),
    (6, "hadamard_permutation_census", c6_permutation_census, 120.0),
    (7, "sum_of_squares", c7_sum_of_squares, 1.0),
    (8, "braiding_gates", c8_braiding, 120.0),
    (9, "twist_groups", c9_twists, 610.0),
    (10, "determinism", c10_determinism, None),
]


@dataclass
class CriterionResult:
    id: int
    name: str
    passed: bool
    details: dict
    wall_time_s: float = field(default=0.0, compare=False)
    budget_s: float | None = None

    def to_json(self):
        """Digested payload; timing lives in the manifest."""
        return {"schema_version": SCHEMA_VERSION, "id": self.id, "name": self.name,
                "passed": bool(self.passed), "details": self.details}


def run_criterion(cid: int, ctx: Context) -> CriterionResult:
    for i, name, fn, budget in CRITERIA:
        if i == cid:
            t = time.perf_counter()
            ok, det = fn(ctx)
            return CriterionResult(i, name, bool(ok), _jsonable(det), time.perf_counter() - t,
                                   budget)
    raise ValueError(f"no criterion {cid}")


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=_default))


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(type(o))


def summary_table(results) -> str:
    lines = [f"{'#':>2}  {'criterion':<28} {'result':<6} {'time':>8}"]
    for r in results:
        lines.append(f"{r.id:>2}  {r.name:<28} {'PASS' if r.passed else 'FAIL':<6} "
                     f"{r.wall_time_s:>7.2f}s")
    return "\n".join(lines)


def run_reproduce_all(out_dir=None, jobs: int = 1, criteria=None, log=None):
    """Run criteria, write one JSON report each plus a summary; returns (exit_code, results, manifest)."""
    t0 = time.perf_counter()
    ctx = Context(jobs)
    ids = [c[0] for c in CRITERIA] if not criteria else sorted(set(criteria))
    results = []
    for cid in ids:
        res = run_criterion(cid, ctx)
        results.append(res)
        if log:
            log(f"{'PASS' if res.passed else 'FAIL'} criterion {res.id} {res.name} "
                f"({res.wall_time_s:.1f}s)")
    payload = {"criteria": [r.to_json() for r in results]}
    highlights = {}
    for r in results:
        for key in ("k2_bicharacters", "k2_symmetry_group_order"):
            if key in r.details:
                highlights[key] = r.details[key]
    summary = {"schema_version": SCHEMA_VERSION, "all_passed": all(r.passed for r in results),
               "criteria": [{"id": r.id, "name": r.name, "passed": r.passed} for r in results],
               "highlights": highlights}
    first_fail = next((r for r in results if not r.passed), None)
    summary["first_failure"] = None if first_fail is None else first_fail.name
    payload["summary"] = summary
    manifest = RunManifest("reproduce", {"jobs": jobs, "criteria": ids}, digest(payload),
                           time.perf_counter() - t0)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for r in results:
            _write(out / f"criterion_{r.id:02d}_{r.name}.json", r.to_json())
        _write(out / "summary.json", summary)
        (out / "summary.txt").write_text(summary_table(results) + "\n")
        m = manifest.to_json()
        m["timings_s"] = {str(r.id): round(r.wall_time_s, 3) for r in results}
        _write(out / "manifest.json", m)
    return (0 if first_fail is None else 1), results, manifest


def _write(path: Path, obj):
    path.write_text(json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# bundles
# ---------------------------------------------------------------------------

BUNDLE_FILES = ("model.json", "f_symbols.json", "r_symbols.json", "braid_generators.json")


def export_model_bundle(k: int, f_index: int, r_index: int, out_dir) -> dict:
    model = build_extended_ising(k)
    fs = all_f_symbols(model)
    if not 0 <= f_index < len(fs):
        raise IndexError(f"f_index must be in [0, {len(fs)}) for k={k}")
    f = fs[f_index]
    sols = rs.solve_r(f)
    if not 0 <= r_index < len(sols):
        raise IndexError(f"r_index must be in [0, {len(sols)}) for this F-set")
    r = sols[r_index]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    gens = {"schema_version": SCHEMA_VERSION, "k": k, "f_index": f_index, "r_index": r_index,
            "F": br.f_matrix(f).to_json(),
            "sigma": {str(g): br.braid_generator(g, f, r).to_json() for g in (1, 2, 3)}}
    docs = {"model.json": model.to_json(), "f_symbols.json": f.to_json(),
            "r_symbols.json": r.to_json(), "braid_generators.json": gens}
    for name, obj in docs.items():
        _write(out / name, obj)
    return {name: digest(obj) for name, obj in docs.items()}


def load_model_bundle(path, verify: bool = False):
    """Load a bundle; with ``verify`` re-run pentagon and hexagon and raise on failure."""
    p = Path(path)
    model = AnyonModel.load(p / "model.json")
    f = FSymbols.load(p / "f_symbols.json", model)
    r = rs.RSymbols.load(p / "r_symbols.json", f)
    g = json.loads((p / "braid_generators.json").read_text())
    gens = {int(i): br.GateMatrix.from_json(m) for i, m in g["sigma"].items()}
    if verify:
        if not verify_pentagon(f).passed:
            raise ValueError(f"{p}: pentagon fails on reload")
        if not rs.verify_hexagon(r).passed:
            raise ValueError(f"{p}: hexagon fails on reload")
    return model, f, r, gens
