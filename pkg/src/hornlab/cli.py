"""Command-line entry point: hornlab --cmd {m_map,check,reconstruct,minors,scaling}.

Reports are JSON on stdout (or --output), with sorted keys so equal
configurations give byte-identical files.  Wall-clock timing goes to
stderr only.  Exit codes: 0 pass, 1 check failure, 2 usage or parse
error, 3 numeric-domain error (including the enumeration cap).
"""

import argparse
import csv
import io
import json
import sys
import time

from .trop import NEG_INF, trop_str
from .network import NetworkError, network_from_json
from .multipath import (EnumerationCapExceeded, MFunction, m_map, simplex_points,
                        tropical_singular_values)
from .network import concat_all

RNG_NOTE = "stdlib random.Random keyed by (seed, stream) for exact work; " \
           "numpy Philox(SeedSequence([seed, trial])) for floating-point sampling"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input

def _read_json(path):
    if path is None:
        raise UsageError("--input is required for this command")
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror))
    if not text.strip():
        raise UsageError("input is empty")
    return json.loads(text)


def _networks(obj):
    """A single network object, a list of them, or {"networks": [...]}."""
    if isinstance(obj, dict) and "networks" in obj:
        obj = obj["networks"]
    if isinstance(obj, dict):
        obj = [obj]
    if not isinstance(obj, list) or not obj:
        raise UsageError("expected a network object or a non-empty list of networks")
    return [network_from_json(o) for o in obj]


def _mfunction(obj):
    if isinstance(obj, dict) and "values" in obj:
        try:
            return MFunction.from_json(obj)
        except (KeyError, TypeError) as exc:
            raise UsageError("bad MFunction object: %s" % exc)
    ws = [w for w, _ in _networks(obj)]
    return m_map(ws)


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError("expected a comma-separated list of numbers, got %r" % text)


def _jv(v):
    if v is NEG_INF:
        return "-inf"
    return v if isinstance(v, int) else trop_str(v)


def _alpha_str(a):
    return "".join(str(x) for x in a) if max(a) < 10 else ",".join(str(x) for x in a)


# ---------------------------------------------------------------------------
# commands

def cmd_m_map(cfg):
    ws = [w for w, _ in _networks(_read_json(cfg.input))]
    m = m_map(ws, cap=cfg.cap)
    k = len(ws)
    lams = {}
    for i in range(k):
        for j in range(i + 1, k + 1):
            key = "".join(str(t + 1) for t in range(i, j))
            try:
                lams[key] = [_jv(v) for v in tropical_singular_values(concat_all(ws[i:j]), cfg.cap)]
            except ValueError:
                lams[key] = None
    table = ["%s  %s" % (_alpha_str(a), trop_str(m[a])) for a in m.points()]
    return {"m": m.to_json(), "singular_values": lams, "table": table}, True


def cmd_check(cfg):
    from .horncheck import (horn_trop, octahedron_check, rhombus_check, tetrahedron_check,
                            trace_check)
    m = _mfunction(_read_json(cfg.input))
    scope = "faces-only" if cfg.scope == "faces" else "all-plane"
    verdicts = {}
    viol = {}
    if m.k == 3:
        try:
            ok = trace_check(*horn_trop(m))
        except ArithmeticError:
            ok = False
        verdicts["trace"] = ok
        viol["trace"] = [] if ok else ["totals of A, B, C, AB, BC, ABC"]
    rh = rhombus_check(m, scope)
    verdicts["rhombus"] = not rh
    viol["rhombus"] = [{"long": [list(p) for p in r.points()[:2]],
                        "short": [list(p) for p in r.points()[2:]]} for r in rh]
    if m.k == 3:
        for name, fn in (("tetrahedron", tetrahedron_check), ("octahedron", octahedron_check)):
            bad = fn(m)
            verdicts[name] = not bad
            viol[name] = [list(t) for t in bad]
    ok = all(verdicts.values())
    return {"n": m.n, "k": m.k, "scope": scope, "verdicts": verdicts, "violations": viol}, ok


def cmd_reconstruct(cfg):
    from .horncheck import octahedron_check
    from .reconstruct import (reconstruct_from_boundary, sample_two_face_cone, triple_is_gz,
                              two_face_points)
    from .samples import make_rng
    if cfg.input:
        src = _mfunction(_read_json(cfg.input))
        n = src.n
        x = {a: src[a] for a in two_face_points(n)}
    else:
        n = cfg.n or 2
        x = sample_two_face_cone(n, make_rng(cfg.seed, "reconstruct", n))
    t, m = reconstruct_from_boundary(x, n)
    faces = all(m[a] == x[a] for a in x)
    octa = octahedron_check(m)
    gz = triple_is_gz(t)
    triple = {
        "a": {"%d,%d" % lab: _jv(v) for lab, v in sorted(t.a.items())},
        "b": {"%d,%d" % lab: _jv(v) for lab, v in sorted(t.b.items())},
        "c": [_jv(v) for v in t.c],
    }
    verdicts = {"faces_agree": faces, "octahedron": not octa, "gz_factors": gz}
    ok = all(verdicts.values())
    return {"n": n, "two_face": {_alpha_str(a): _jv(v) for a, v in sorted(x.items())},
            "triple": triple, "m": m.to_json(), "verdicts": verdicts}, ok


def cmd_minors(cfg):
    from . import minors as M
    from .horncheck import small_tetrahedra
    from .samples import make_rng
    n = cfg.n or 3
    k = cfg.k or 3
    trials = cfg.trials or 100
    zero = cb = inv = 0
    for trial in range(trials):
        rng = make_rng(cfg.seed, "minors", trial)
        gs = [M.random_matrix(n, rng) for _ in range(k)]
        us = [M.random_unipotent(n, rng) for _ in range(k + 1)]
        vals = M.m_values(gs)
        if k == 3:
            if all(M.geometric_octahedron_residual(gs, *t, vals=vals) == 0
                   for t in small_tetrahedra(n)):
                zero += 1
        pts = [a for a in simplex_points(n, k) if any(a)]
        if all(M.cauchy_binet_expansion(gs, a) == vals[a] for a in pts):
            cb += 1
        acted = M.m_values(M.u_action(us, gs))
        if all(acted[a] == vals[a] for a in pts):
            inv += 1
    lines = []
    counts = {"cauchy_binet": cb, "unipotent_invariance": inv}
    if k == 3:
        counts["octahedron_residual"] = zero
        lines.append("octahedron residual: %d/%d exactly zero" % (zero, trials))
    lines.append("cauchy-binet expansion: %d/%d exact" % (cb, trials))
    lines.append("unipotent invariance: %d/%d exact" % (inv, trials))
    ok = all(v == trials for v in counts.values())
    return {"n": n, "k": k, "trials": trials, "counts": counts, "summary": lines}, ok


def _csv(rows, cols):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(cols)
    for r in rows:
        wr.writerow([r[c] for c in cols])
    return buf.getvalue()


def cmd_scaling(cfg):
    from . import scaling as S
    exp = cfg.experiment
    if exp == "convergence":
        s_list = _floats(cfg.s) if cfg.s else [5, 10, 20]
        if cfg.input:
            w, angles = _networks(_read_json(cfg.input))[0]
            closed = None
        else:
            from .network import standard_weighting
            w, angles = standard_weighting(2, {(1, 1): 1, (2, 1): 0, (2, 2): 0}), None
            closed = S.closed_form_error
        res = S.convergence_experiment(w, angles, s_list)
        rows = res["rows"]
        if closed:
            for r in rows:
                r["closed_form"] = closed(r["s"])
        cols = ["s", "error", "s_times_error"] + (["closed_form"] if closed else [])
        errs = [r["error"] for r in rows]
        ok = all(a > b for a, b in zip(errs, errs[1:]))
        out = {"experiment": exp, "rows": rows, "slope": res["slope"],
               "csv": _csv(rows, cols), "verdicts": {"monotone": ok}}
        if not closed:
            # the exponential rate is only promised for generic weightings
            out["generic"] = S.genericity_filter(w, cfg.delta)
        return out, ok
    if exp == "concentration":
        lam = _floats(cfg.lam)
        s_list = _floats(cfg.s) if cfg.s else [2, 5, 10]
        rows = S.concentration_experiment(lam, lam, lam, s_list, cfg.trials or 2000, cfg.seed)
        meds = [r["median"] for r in rows]
        ok = all(a > b for a, b in zip(meds, meds[1:]))
        return {"experiment": exp, "lambda": lam, "rows": rows,
                "csv": _csv(rows, ["s", "median", "q10", "q90", "max", "trials"]),
                "verdicts": {"median_decreasing": ok}}, ok
    if exp == "appendix_a":
        s_list = _floats(cfg.s) if cfg.s else [1, 5, 10]
        u, v = S.random_n2_triples(cfg.trials or 100000, S.trial_rng(cfg.seed, 0))
        rep = S.n2_inequalities(S.n2_products(u, v), s_list)
        ineq = all(x >= -1e-9 for x in rep["min_slack"])
        bound = all(b["max_excess"] <= b["limit"] for b in rep["bound"])
        rep.update({"experiment": exp, "verdicts": {"f_inequalities": ineq, "log16_bound": bound}})
        return rep, ineq and bound
    raise UsageError("unknown experiment %r" % (exp,))


COMMANDS = {"m_map": cmd_m_map, "check": cmd_check, "reconstruct": cmd_reconstruct,
            "minors": cmd_minors, "scaling": cmd_scaling}


# ---------------------------------------------------------------------------
# driver

def build_parser():
    p = argparse.ArgumentParser(prog="hornlab", description="Tropical multiple Horn toolkit.")
    p.add_argument("--cmd", required=True, choices=sorted(COMMANDS))
    p.add_argument("--input", help="JSON input file, or - for stdin")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help="also write the experiment table as CSV")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", help="comma-separated scaling parameters")
    p.add_argument("--trials", type=int)
    p.add_argument("--delta", type=float, default=0.0,
                   help="genericity margin reported with convergence runs")
    p.add_argument("--cap", type=int, help="enumeration cap (default: HORNLAB_MAX_STATES)")
    p.add_argument("--scope", choices=("faces", "all"), default="all")
    p.add_argument("--experiment", choices=("convergence", "concentration", "appendix_a"),
                   default="convergence")
    p.add_argument("--lam", default="1,-1", help="singular-value exponents for concentration")
    return p


def _config_echo(cfg):
    return {k: v for k, v in sorted(vars(cfg).items()) if v is not None}


def _emit(obj, cfg):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if cfg is not None and cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind, msg, code, cfg=None, **extra):
    err = {"type": kind, "message": msg}
    err.update(extra)
    _emit({"status": "error", "error": err}, cfg)
    return code


def main(argv=None):
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    t0 = time.perf_counter()
    try:
        body, ok = COMMANDS[cfg.cmd](cfg)
    except json.JSONDecodeError as exc:
        return _error("parse", exc.msg, 2, cfg, line=exc.lineno, column=exc.colno)
    except (UsageError, NetworkError) as exc:
        return _error("usage", str(exc), 2, cfg)
    except (EnumerationCapExceeded, OverflowError, ArithmeticError) as exc:
        return _error("numeric", str(exc), 3, cfg)
    except ValueError as exc:
        return _error("domain", str(exc), 2, cfg)
    report = {"status": "pass" if ok else "fail", "config": _config_echo(cfg), "rng": RNG_NOTE}
    report.update(body)
    if cfg.csv and "csv" in body:
        with open(cfg.csv, "w") as fh:
            fh.write(body["csv"])
    _emit(report, cfg)
    sys.stderr.write("hornlab %s: %.3f s\n" % (cfg.cmd, time.perf_counter() - t0))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
