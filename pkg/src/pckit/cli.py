"""Command-line front end: ``pckit <task> --input problem.json [flags]``.

Each task reads its parameters from the task records of the problem file
(``{"task": "pc-eq", "reps": ["a", "b"]}``).  When the file has no record for
the requested task, one is built from ``--rep``/``--op``/``--flavor`` flags.
``pckit run`` executes every record in the file.

Exit codes: 0 success, 1 a task failed, 2 the problem file did not load,
3 an oracle cross-check disagreed with the fast path.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import linalg as la
from . import pseudochar as pc
from .coeffring import GF, RingElem, teichmueller
from .cohomology import (GModule, ad_module, centralizer_algebra_dim, centralizer_points,
                         cohomology_dims, gl1_pseudo_tangent, rep_tangent_dim)
from .errors import (ClosureCapExceeded, MembershipViolation, NotAHomomorphism, ParseError,
                     PckitError, SchemaError, SearchSpaceTooLarge)
from .groups import Representation
from .groups import direct_sum as rep_direct_sum
from .groups import dual as rep_dual
from .groups import tensor as rep_tensor
from .invariants import (DETINV, SIGMA, STAR, InvariantSymbol, evaluate_codes, generator_set,
                         parse_symbol)
from .io import Session, load_problem, parse_kind, parse_ring
from .matgroups import GroupKind
from .reconstruct import (DEFAULT_SEARCH_CAP, brute_conjugacy, is_completely_reducible,
                          is_semisimple_by_complements, jordan_holder, naive_conjugacy,
                          semisimplify, symplectic_decompose)

log = logging.getLogger("pckit")

EXIT_OK, EXIT_TASK, EXIT_LOAD, EXIT_ORACLE = 0, 1, 2, 3

OPS = ("dual", "sum", "tensor", "sp-sum", "pair", "pushforward", "restrict")


class TaskError(PckitError):
    """A task record is missing something it needs."""


def _payload_rows(R, M):
    return [[R.payload(x) for x in row] for row in np.asarray(M)]


def _rng(opts, rec):
    return np.random.default_rng(rec.get("seed", opts.seed))


def _one_rep(session: Session, rec: dict) -> Representation:
    if "rep" in rec:
        return session.rep(rec["rep"])
    reps = rec.get("reps", [])
    if len(reps) != 1:
        raise TaskError(f"task {rec['task']!r} needs one representation ('rep')")
    return session.rep(reps[0])


def _two_reps(session: Session, rec: dict):
    reps = rec.get("reps", [])
    if len(reps) != 2:
        raise TaskError(f"task {rec['task']!r} needs two representations ('reps')")
    return session.rep(reps[0]), session.rep(reps[1])


def _oracle(name: str, verdict, agrees: bool | None) -> dict:
    return {"name": name, "verdict": verdict, "agrees": agrees}


# -- tasks -----------------------------------------------------------------------------------
# each returns (result, oracle or None)


def task_pc_from_rep(session, rec, opts):
    rho = _one_rep(session, rec)
    kind = parse_kind(rec["kind"]) if "kind" in rec else None
    theta = pc.from_rep(rho, kind)
    out = theta.to_json(group_ref=session.group.name or "session")
    out["charpolys_consistent"] = theta.check_identity() and theta.check_inverse_relation()
    return out, None


def task_pc_eq(session, rec, opts):
    a, b = _two_reps(session, rec)
    equal = pc.equals(pc.from_rep(a), pc.from_rep(b))
    k = rec.get("ext_degree", opts.ext_degree)
    # fingerprints agree exactly when the semisimplifications are GL-conjugate
    sa, sb = semisimplify(a, rng=_rng(opts, rec)), semisimplify(b, rng=_rng(opts, rec))
    conj = bool(brute_conjugacy(sa, sb, ext_degree=k, cap=opts.search_cap, rng=_rng(opts, rec)))
    return {"equal": equal}, _oracle("conjugacy of semisimplifications", {"conjugate": conj},
                                     conj == equal)


def task_conj_test(session, rec, opts):
    a, b = _two_reps(session, rec)
    k = rec.get("ext_degree", opts.ext_degree)
    kind = parse_kind(rec["kind"]) if "kind" in rec else None
    res = brute_conjugacy(a, b, ext_degree=k, kind=kind, cap=opts.search_cap, rng=_rng(opts, rec))
    try:
        ref = naive_conjugacy(a, b, ext_degree=k, kind=kind, cap=opts.search_cap)
    except SearchSpaceTooLarge as exc:
        return res.to_json(), _oracle("exhaustive group scan", f"skipped: {exc}", None)
    return res.to_json(), _oracle("exhaustive group scan", {"conjugate": bool(ref)},
                                  bool(ref) == bool(res))


def task_ssimplify(session, rec, opts):
    rho = _one_rep(session, rec)
    R = rho.ring
    factors = jordan_holder(rho, rng=_rng(opts, rec))
    ss = semisimplify(rho, rng=_rng(opts, rec))
    out = {
        "factors": [{"dim": f.d, "generators": [_payload_rows(R, f.images[g])
                                                for g in f.group.generators]}
                    for f in factors],
        "semisimplification": [_payload_rows(R, ss.images[g]) for g in ss.group.generators],
        "same_fingerprint": pc.equals(pc.from_rep(rho, GroupKind("GL", rho.d)), pc.from_rep(ss)),
    }
    flavor_kind = parse_kind(rec["kind"]) if "kind" in rec else rho.kind
    try:
        cr = is_completely_reducible(rho, flavor_kind, cap=opts.search_cap)
    except PckitError as exc:
        out["completely_reducible"] = f"unsupported: {exc}"
        return out, None
    out["completely_reducible"] = cr
    ref = is_semisimple_by_complements(rho)
    return out, _oracle("invariant complements", {"semisimple": ref}, ref == cr)


def task_sympl_decompose(session, rec, opts):
    rho = _one_rep(session, rec)
    dec = symplectic_decompose(rho)
    R = rho.ring
    whole = dec.reassemble()
    P = dec.basis
    direct = la.matmul(R, la.inverse(R, P), la.matmul(R, rho.images, P))
    out = {
        "tags": dec.tags,
        "summands": [s.to_json() for s in dec.summands],
        "basis": _payload_rows(R, P),
        "basis_check": bool(np.array_equal(direct, whole.images)),
    }
    found = brute_conjugacy(whole, rho, ext_degree=1, kind=rho.kind, cap=opts.search_cap,
                            rng=_rng(opts, rec))
    return out, _oracle("Sp-conjugacy of the reassembled sum", {"conjugate": bool(found)},
                        bool(found) and out["basis_check"])


def task_kernel(session, rec, opts):
    rho = _one_rep(session, rec)
    L = rec.get("L", opts.word_budget)
    ker = pc.kernel(pc.from_rep(rho), L)
    ref = semisimplify(rho, rng=_rng(opts, rec)).kernel()
    return ({"kernel": ker, "order": len(ker), "L": L},
            _oracle("kernel of the semisimplification", {"kernel": sorted(ref)},
                    sorted(ref) == ker))


def task_quotient(session, rec, opts):
    rho = _one_rep(session, rec)
    theta = pc.from_rep(rho)
    if "normal" in rec:
        normal = [session.element(x) for x in rec["normal"]]
    else:
        normal = pc.kernel(theta, None)
    q, proj = pc.quotient_factor(theta, normal, return_projection=True)
    out = {"normal": sorted(normal), "quotient_order": q.group.order,
           "projection": proj.tolist(), "pseudocharacter": q.to_json()}
    pulled = np.array_equal(q.fingerprint[proj], theta.fingerprint)
    return out, _oracle("pullback recovers the fingerprint", {"recovered": pulled}, pulled)


def _restriction(session, rec):
    elems = [session.element(x) for x in rec.get("subgroup", [])]
    if not elems:
        raise TaskError("op restrict needs a 'subgroup' list of elements")
    return session.group.subgroup(elems)


def task_ops(session, rec, opts):
    op = rec.get("op")
    if op not in OPS:
        raise TaskError(f"'op' must be one of {', '.join(OPS)}")
    reps = [session.rep(r) for r in rec.get("reps", [])] or [_one_rep(session, rec)]
    thetas = [pc.from_rep(r) for r in reps]
    need = 2 if op in ("sum", "tensor", "sp-sum") else 1
    if len(reps) != need:
        raise TaskError(f"op {op} takes {need} representation(s)")
    a = reps[0]
    if op == "dual":
        fast, ref = pc.dual(thetas[0]), rep_dual(a)
    elif op == "sum":
        fast, ref = pc.direct_sum(*thetas), rep_direct_sum(*reps)
    elif op == "tensor":
        fast, ref = pc.tensor(*thetas), rep_tensor(*reps)
    elif op == "sp-sum":
        fast = pc.sp_direct_sum(*thetas)
        imgs = pc.sp_interleave(a.images, reps[1].images, a.kind.n, reps[1].kind.n)
        ref = Representation(a.group, fast.kind, a.ring, imgs)
    elif op == "pair":
        fast = pc.pair_type_embed(thetas[0])
        imgs = la.block_diag(a.images, la.transpose(a.inverse_images()))
        ref = Representation(a.group, fast.kind, a.ring, imgs)
    elif op == "pushforward":
        if "target" not in rec:
            raise TaskError("op pushforward needs a 'target' kind")
        target = parse_kind(rec["target"])
        fast = pc.pushforward(thetas[0], target)
        if a.kind.flavor == "GL" and target.flavor == "Sp":
            imgs = la.block_diag(a.images, la.transpose(a.inverse_images()))
            ref = Representation(a.group, target, a.ring, imgs)
        else:
            ref = a.with_kind(target)
    else:
        sub, inc = _restriction(session, rec)
        fast = pc.restrict(thetas[0], sub, inc)
        ref = a.restrict(sub, inc)
    agree = pc.equals(fast, pc.from_rep(ref, fast.kind))
    out = {"op": op, "kind": str(fast.kind), "pseudocharacter": fast.to_json(
        group_ref=session.group.name or "session") if op != "restrict" else fast.to_json()}
    return out, _oracle("fingerprint of the matrix-level operation", {"equal": agree}, agree)


def task_emerson(session, rec, opts):
    rho = _one_rep(session, rec)
    if rho.kind.flavor != "GL":
        rho = rho.with_kind(GroupKind("GL", rho.d), check=False)
    theta = pc.from_rep(rho)
    R, d, N = rho.ring, rho.d, rho.group.order
    idx = rec.get("i", list(range(1, d + 1)))
    idx = [idx] if isinstance(idx, int) else idx
    table = {str(i): [pc.emerson_lambda(theta, i, g).payload for g in range(N)] for i in idx}
    trace_ok = all(pc.emerson_lambda(theta, 1, g).code == int(la.trace(R, rho.images[g]))
                   for g in range(N))
    det_ok = all(pc.emerson_lambda(theta, d, g).code == int(la.det(R, rho.images[g]))
                 for g in range(N))
    samples = int(rec.get("samples", 200))
    rng = _rng(opts, rec)
    r = rng.integers(0, R.size, size=(samples, N))
    s = rng.integers(0, R.size, size=(samples, N))
    c = rng.integers(0, R.size, size=samples)
    D = lambda x: pc.det_law_eval(theta, x)  # noqa: E731
    mult = np.array_equal(D(pc.group_algebra_mul(rho.group, R, r, s)), R.mul(D(r), D(s)))
    homog = np.array_equal(D(R.mul(c[:, None], r)), R.mul(R.power(c, d), D(r)))
    out = {"lambda": table, "det_law_multiplicative": mult, "det_law_homogeneous": homog,
           "samples": samples}
    ok = trace_ok and det_ok and mult and homog
    return out, _oracle("trace and determinant of the matrices",
                        {"lambda1_is_trace": trace_ok, "lambda_d_is_det": det_ok}, ok)


def _symbol(rec) -> InvariantSymbol:
    sym = rec.get("symbol")
    if isinstance(sym, dict):
        return InvariantSymbol.from_json(sym)
    if isinstance(sym, str):
        return parse_symbol(sym, rec.get("m"))
    raise TaskError("invariants eval needs a 'symbol'")


def task_invariants(session, rec, opts):
    mode = rec.get("mode", "list")
    if mode == "list":
        if "kind" in rec:
            kind = parse_kind(rec["kind"])
        else:
            kind = _one_rep(session, rec).kind
        m = rec.get("m", opts.max_arity or 1)
        L = rec.get("L", opts.word_budget or 2)
        syms = generator_set(kind, m, L)
        return {"kind": str(kind), "m": m, "L": L, "count": len(syms),
                "symbols": [str(s) for s in syms]}, None
    if mode != "eval":
        raise TaskError("invariants mode must be 'list' or 'eval'")
    rho = _one_rep(session, rec)
    sym = _symbol(rec)
    elems = [session.element(x) for x in rec.get("elements", [])]
    if len(elems) != sym.m:
        raise TaskError(f"{sym} needs {sym.m} elements")
    R = rho.ring
    code = int(evaluate_codes(sym, R, [rho.images[g] for g in elems], rho.kind))
    out = {"symbol": str(sym), "elements": elems, "value": R.payload(code)}
    # evaluate from the fingerprint through the group law instead
    theta = pc.from_rep(rho)
    G = rho.group
    if sym.orkind == SIGMA and not any(dec == STAR for _, dec in sym.word):
        g = 0
        for s, dec in sym.word:
            x = elems[s - 1]
            g = int(G.table[g, x if dec != "inverse" else G.inverse[x]])
        ref = 1 if sym.i == 0 else int(theta.fingerprint[g, sym.i - 1])
    elif sym.orkind == DETINV:
        ref = int(R.inv(theta.fingerprint[elems[sym.slot - 1], rho.d - 1]))
    else:
        return out, None
    return out, _oracle("fingerprint lookup", {"value": R.payload(ref)}, ref == code)


def _module(session, rec):
    what = rec.get("module", "ad")
    if what == "trivial":
        R = parse_ring(rec["ring"]) if "ring" in rec else session.ring
        if R is None:
            raise TaskError("trivial module needs a ring")
        return GModule.trivial(session.group, R, int(rec.get("dim", 1))), None
    rho = _one_rep(session, rec)
    if what == "natural":
        return GModule.from_rep(rho), None
    if what != "ad":
        raise TaskError("module must be 'ad', 'natural' or 'trivial'")
    flavor = rec.get("flavor", "gl")
    return ad_module(rho, flavor), (rho, flavor)


def task_cohomology(session, rec, opts):
    M, adj = _module(session, rec)
    rep = cohomology_dims(M, int(rec.get("max_degree", 2)))
    out = rep.to_json()
    out["module"] = M.name if getattr(M, "name", None) else rec.get("module", "ad")
    if adj is not None:
        ref = centralizer_algebra_dim(*adj)
        name = "centralizer algebra dimension"
    else:
        ref = int(M.invariants().shape[0])
        name = "fixed vectors"
    return out, _oracle(name, {"h0": ref}, ref == rep.h0)


def task_tangent(session, rec, opts):
    p = rec.get("p") or (session.ring.p if session.ring else None)
    out = {}
    oracle = None
    if p is not None:
        t = gl1_pseudo_tangent(session.group, int(p))
        h1 = cohomology_dims(GModule.trivial(session.group, GF(int(p))), 1).h1
        out["gl1_pseudo_tangent"] = t
        oracle = _oracle("h1 of the trivial module", {"h1": h1}, h1 == t)
    if "rep" in rec or rec.get("reps"):
        rho = _one_rep(session, rec)
        flavor = rec.get("flavor", "gl")
        out["rep_tangent_dim"] = rep_tangent_dim(rho, flavor)
        try:
            out["centralizer"] = centralizer_points(rho, cap=opts.search_cap).to_json()
        except SearchSpaceTooLarge as exc:
            out["centralizer"] = f"skipped: {exc}"
    if not out:
        raise TaskError("tangent needs a prime 'p' (or a session ring) or a representation")
    return out, oracle


def task_teichmuller(session, rec, opts):
    R = parse_ring(rec["ring"]) if "ring" in rec else session.ring
    if R is None:
        raise TaskError("teichmuller needs a ring Z/p^r")
    p = R.p
    residues = rec.get("residues", list(range(1, p)))
    lifts = {int(a): teichmueller(R, a).code for a in residues}
    torsion = all(pow(w, p - 1, R.size) == 1 for w in lifts.values())
    reduces = all(w % p == a % p for a, w in lifts.items())
    mult = all(teichmueller(R, a * b % p).code == lifts[a] * lifts[b] % R.size
               for a in lifts for b in lifts if a * b % p in lifts)
    return ({"ring": repr(R), "lifts": {str(a): w for a, w in lifts.items()}},
            _oracle("torsion, reduction and multiplicativity",
                    {"torsion": torsion, "reduces": reduces, "multiplicative": mult},
                    torsion and reduces and mult))


def task_axioms_audit(session, rec, opts):
    rho = _one_rep(session, rec)
    M = int(rec.get("M", opts.max_arity or 2))
    L = int(rec.get("L", opts.word_budget or 2))
    T = pc.RawTable.build(rho, M, L)
    report = pc.verify_axioms(T)
    out = {"M": M, "L": L, "entries": T.entry_count(), "report": report.to_json()}
    n_mut = int(rec.get("mutations", 0))
    if n_mut:
        rng = _rng(opts, rec)
        flats = rng.choice(T.entry_count(), size=min(n_mut, T.entry_count()), replace=False)
        caught = sum(not pc.verify_axioms(pc.mutate(T, int(f), rng)).ok for f in flats)
        out["mutations"] = {"tried": len(flats), "detected": int(caught)}
    ref = pc.RawTable.build(pc.from_rep(rho), M, L)
    same = all(np.array_equal(T.values[m], ref.values[m]) for m in T.values)
    return out, _oracle("table rebuilt from the fingerprint", {"equal": same}, same)


TASKS = {
    "pc-from-rep": task_pc_from_rep,
    "pc-eq": task_pc_eq,
    "conj-test": task_conj_test,
    "ssimplify": task_ssimplify,
    "sympl-decompose": task_sympl_decompose,
    "kernel": task_kernel,
    "quotient": task_quotient,
    "ops": task_ops,
    "emerson": task_emerson,
    "invariants": task_invariants,
    "cohomology": task_cohomology,
    "tangent": task_tangent,
    "teichmuller": task_teichmuller,
    "axioms-audit": task_axioms_audit,
}


def run(session: Session, rec: dict, opts) -> dict:
    """Run one task record; errors are captured in the report."""
    name = rec.get("task")
    report = {"task": name, "inputs": rec}
    fn = TASKS.get(name)
    t0 = time.perf_counter()
    try:
        if fn is None:
            raise TaskError(f"unknown task {name!r}")
        result, oracle = fn(session, rec, opts)
        report["result"] = result
        if oracle is not None:
            report["oracle"] = oracle
        report["status"] = "ok" if not oracle or oracle["agrees"] is not False else "disagree"
    except Exception as exc:  # any failure is reported against the task
        log.debug("task %s failed", name, exc_info=True)
        report["status"] = "error"
        report["error"] = {"type": type(exc).__name__, "message": f"{name}: {exc}"}
    report["seconds"] = round(time.perf_counter() - t0, 4)
    return report


def _to_jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, RingElem):
        return x.payload
    raise TypeError(f"not serialisable: {type(x).__name__}")


def _record_from_flags(task: str, args) -> dict:
    rec: dict = {"task": task}
    if args.rep:
        rec["reps"] = list(args.rep)
    for key in ("op", "flavor", "kind", "target", "mode", "symbol", "module"):
        val = getattr(args, key)
        if val is not None:
            rec[key] = val
    if args.elements:
        rec["elements"] = [int(x) if x.lstrip("-").isdigit() else x for x in args.elements]
    if args.mutations:
        rec["mutations"] = args.mutations
    return rec


def format_text(reports: list) -> str:
    lines = []
    for r in reports:
        head = f"{r['task']:<16} {r['status']:<9} {r['seconds']:>8.3f}s"
        lines.append(head)
        if r["status"] == "error":
            lines.append(f"    {r['error']['type']}: {r['error']['message']}")
            continue
        for k, v in r["result"].items():
            text = json.dumps(v, default=_to_jsonable)
            if len(text) > 100:
                text = text[:97] + "..."
            lines.append(f"    {k:<24} {text}")
        if "oracle" in r:
            o = r["oracle"]
            lines.append(f"    oracle ({o['name']}): {json.dumps(o['verdict'], default=_to_jsonable)}"
                         f" agrees={o['agrees']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pckit", description="G-pseudocharacters of finite groups")
    ap.add_argument("task", choices=sorted(TASKS) + ["run"], help="task to run ('run' = all in file)")
    ap.add_argument("--input", "-i", required=True, help="problem file (JSON)")
    ap.add_argument("--output", "-o", help="write the report here instead of stdout")
    ap.add_argument("--text", action="store_true", help="human-readable output")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ext-degree", type=int, default=2, help="extension degree for conjugacy searches")
    ap.add_argument("--word-budget", type=int, default=None, metavar="L",
                    help="maximal word length (kernel tests, invariants, axiom audits)")
    ap.add_argument("--max-arity", type=int, default=None, metavar="M",
                    help="maximal tuple arity for invariants and axiom audits")
    ap.add_argument("--search-cap", type=int, default=DEFAULT_SEARCH_CAP)
    ap.add_argument("--jobs", type=int, default=1, help="worker cap (tasks run sequentially)")
    ap.add_argument("--rep", action="append", help="representation name (repeatable)")
    ap.add_argument("--op", choices=OPS)
    ap.add_argument("--flavor", choices=("gl", "sl", "sp"))
    ap.add_argument("--kind")
    ap.add_argument("--target")
    ap.add_argument("--mode", choices=("list", "eval"))
    ap.add_argument("--symbol")
    ap.add_argument("--module", choices=("ad", "natural", "trivial"))
    ap.add_argument("--elements", nargs="*")
    ap.add_argument("--mutations", type=int, default=0)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        session = load_problem(args.input)
    except (ParseError, SchemaError, NotAHomomorphism, MembershipViolation,
            ClosureCapExceeded) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return EXIT_LOAD
    if args.task == "run":
        records = list(session.tasks)
    else:
        records = [t for t in session.tasks if t["task"] == args.task]
        if not records:
            records = [_record_from_flags(args.task, args)]
    reports = []
    for rec in records:
        log.info("running %s", rec.get("task"))
        reports.append(run(session, rec, args))
    if args.text:
        text = format_text(reports)
    else:
        # timings would make reports differ between identical runs
        for r in reports:
            r.pop("seconds", None)
        text = json.dumps({"input": session.source, "session": session.summary(),
                           "reports": reports}, indent=2, default=_to_jsonable)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if any(r["status"] == "error" for r in reports):
        return EXIT_TASK
    if any(r["status"] == "disagree" for r in reports):
        return EXIT_ORACLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
