"""Command-line front end."""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .marked import (MarkedSet, MarkedSetError, NotABasis, is_marked_basis, truncate)
from .polyring import (ModuleTerm, ParseError, Poly, PolyError, PolyMatrix, format_term, parse_param, parse_poly)
from .quasistable import NotQuasiStable, QuasiStableModule, is_quasi_stable
from .syzres import (componentwise_certificate, format_matrix, fundamental_syzygies, groebner_obstruction,
                     is_minimal, minimize, u_resolution)

SCHEMA = "mbv1"

COMMANDS = [
    "pommaret", "check-quasistable", "marked-check", "truncate", "syzygies", "resolution", "betti",
    "minimality", "cwl-certificate", "groebner-obstruction", "scheme-ideal", "syzygy-scheme",
    "resolution-scheme", "minimality-locus", "evaluate", "appendix-repro",
]
MODULE_COMMANDS = {"pommaret", "check-quasistable", "scheme-ideal", "syzygy-scheme", "resolution-scheme",
                   "minimality-locus"}
BASIS_COMMANDS = {"marked-check", "truncate", "syzygies", "resolution", "betti", "minimality",
                  "cwl-certificate", "groebner-obstruction", "evaluate"}


class InputError(ValueError):
    pass


# -- input DSL ----------------------------------------------------------------------

@dataclass
class ModuleSpec:
    nvars: int
    shifts: List[int]
    gens: List[ModuleTerm]


@dataclass
class MarkedSpec:
    nvars: int
    shifts: List[int]
    rows: List[Tuple[Poly, Poly]]   # (head, tail)


_MODULE_RE = re.compile(r"\s*module\s*\((?P<args>[^)]*)\)\s*\{(?P<body>.*)\}\s*$", re.S)
_IDEAL_RE = re.compile(r"\s*ideal\s*\[(?P<body>.*)\]\s*$", re.S)


def _split_top(text: str) -> List[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def _single_term(text: str, nvars: int, shifts: List[int], comp: Optional[int] = None) -> ModuleTerm:
    p = parse_poly(text, nvars, shifts)
    if len(p) != 1 or p.coeff(next(iter(p))) != 1:
        raise InputError(f"{text!r} is not a single monic term")
    t = next(iter(p))
    if comp is not None:
        t = ModuleTerm(t.exps, comp, shifts[comp - 1])
    return t


def parse_module(text: str, ring: Optional[int] = None) -> ModuleSpec:
    """``ideal[x2^2, x1^2]`` (needs ``ring``) or ``module(n=2, shifts=[0,0]) { e1: [...], e2: [...] }``."""
    m = _IDEAL_RE.match(text)
    if m:
        if ring is None:
            raise InputError("ideal[...] needs --ring")
        nvars = ring + 1
        return ModuleSpec(nvars, [0], [_single_term(s, nvars, [0]) for s in _split_top(m.group("body"))])
    m = _MODULE_RE.match(text)
    if not m:
        raise InputError("expected ideal[...] or module(...) { ... }")
    args = {}
    for a in _split_top(m.group("args")):
        k, _, v = a.partition("=")
        args[k.strip()] = v.strip()
    if "n" in args:
        n = int(args["n"])
    elif ring is not None:
        n = ring
    else:
        raise InputError("module(...) needs n=... or --ring")
    shifts = [int(x) for x in re.findall(r"-?\d+", args.get("shifts", "[0]"))] or [0]
    gens = []
    for part in re.finditer(r"e(\d+)\s*:\s*\[([^\]]*)\]", m.group("body")):
        k = int(part.group(1))
        if not 1 <= k <= len(shifts):
            raise InputError(f"component e{k} outside 1..{len(shifts)}")
        gens.extend(_single_term(s, n + 1, shifts, k) for s in _split_top(part.group(2)))
    return ModuleSpec(n + 1, shifts, gens)


def parse_marked(text: str, ring: int, shifts: Optional[List[int]] = None) -> MarkedSpec:
    """One ``head | tail`` per line; ``#`` comments; optional ``shifts: [..]`` line."""
    shifts = list(shifts or [0])
    rows = []
    lines = text.splitlines()
    for ln in lines:
        s = ln.split("#", 1)[0].strip()
        if s.startswith("shifts:"):
            shifts = [int(x) for x in re.findall(r"-?\d+", s)] or [0]
    for lineno, ln in enumerate(lines, start=1):
        s = ln.split("#", 1)[0].strip()
        if not s or s.startswith("shifts:"):
            continue
        head, bar, tail = s.partition("|")
        if not bar:
            raise InputError(f"line {lineno}: expected 'head | tail'")
        try:
            h = parse_poly(head, ring + 1, shifts)
            t = parse_poly(tail, ring + 1, shifts) if tail.strip() else Poly()
        except ParseError as e:
            raise InputError(f"line {lineno}: {e}") from e
        if len(h) != 1 or h.coeff(next(iter(h))) != 1:
            raise InputError(f"line {lineno}: head must be a single monic term")
        rows.append((h, t))
    if not rows:
        raise InputError("no marked elements")
    return MarkedSpec(ring + 1, shifts, rows)


def build_module(spec: ModuleSpec, degree_cap: Optional[int] = None) -> QuasiStableModule:
    return QuasiStableModule(spec.gens, spec.nvars, spec.shifts, degree_cap)


def build_marked(spec: MarkedSpec, values: Dict, degree_cap: Optional[int] = None) -> MarkedSet:
    heads = [next(iter(h)) for h, _ in spec.rows]
    U = QuasiStableModule(heads, spec.nvars, spec.shifts, degree_cap)
    elems = {}
    for (h, t), ht in zip(spec.rows, heads):
        if values:
            t = t.subs_params(values)
        if ht in elems:
            raise InputError(f"duplicate head {format_term(ht, U.m > 1)}")
        elems[ht] = h + t
    return MarkedSet(U, elems)


# -- jobs ------------------------------------------------------------------------------

@dataclass
class Job:
    command: str
    ring: Optional[int] = None
    module_text: Optional[str] = None
    basis_text: Optional[str] = None
    values: Dict = field(default_factory=dict)
    json: bool = False
    oracle: bool = False
    threads: int = 1
    degree_cap: Optional[int] = None
    truncate_degree: Optional[int] = None
    presentation: str = "U"
    style: str = "curve"


@dataclass
class Report:
    command: str
    exit_code: int
    text: str
    payload: dict = field(default_factory=dict)
    witness: Optional[dict] = None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="markedres", description="Marked bases, U-resolutions and scheme equations.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name in MODULE_COMMANDS:
            sp.add_argument("module", nargs="?", help="ideal[...] or module(...) {...} literal")
            sp.add_argument("--module-file")
        if name in BASIS_COMMANDS:
            sp.add_argument("basis", nargs="?", help="marked elements 'head | tail', separated by ';' or newlines")
            sp.add_argument("--basis-file")
            sp.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                            help="substitute a parameter in the tails")
        if name == "truncate":
            sp.add_argument("--degree", type=int, required=True)
        if name == "evaluate":
            sp.add_argument("--presentation", default="U", choices=["U", "S", "locus", "resolution"])
        if name in {"scheme-ideal", "syzygy-scheme", "resolution-scheme", "minimality-locus"}:
            sp.add_argument("--style", default="curve", choices=["curve", "small"],
                            help="curve: C,B,A 0-based with + signs; small: c,b,d 1-based with - signs")
        sp.add_argument("--ring", type=int, help="number of variables x0, x1, ...")
        sp.add_argument("--degree-cap", type=int)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--oracle", action="store_true", help="run dual-method cross-checks")
        sp.add_argument("--threads", type=int, default=1)
    return p


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def parse_input(argv: Sequence[str]) -> Job:
    ns = build_parser().parse_args(list(argv))
    # --ring counts variables; Job.ring is the top index n of K[x0..xn]
    job = Job(ns.command, ring=None if ns.ring is None else ns.ring - 1, json=ns.json, oracle=ns.oracle,
              threads=ns.threads, degree_cap=ns.degree_cap)
    if job.ring is not None and job.ring < 1:
        raise InputError("--ring must be at least 2 (variables x0, x1, ...)")
    if ns.degree_cap is not None and ns.degree_cap <= 0:
        raise InputError("--degree-cap must be positive")
    if ns.command in MODULE_COMMANDS:
        text = _read(ns.module_file) if ns.module_file else ns.module
        if not text:
            raise InputError("a module literal or --module-file is required")
        job.module_text = text
        parse_module(text, job.ring)   # validate early
        job.style = getattr(ns, "style", "curve")
    if ns.command in BASIS_COMMANDS:
        text = _read(ns.basis_file) if ns.basis_file else (ns.basis or "").replace(";", "\n")
        if not text.strip():
            raise InputError("marked elements or --basis-file are required")
        job.basis_text = text
        if job.ring is None:
            job.ring = _infer_ring(text)
        for item in ns.set:
            k, eq, v = item.partition("=")
            if not eq:
                raise InputError(f"--set expects NAME=VALUE, got {item!r}")
            try:
                job.values[parse_param(k.strip())] = Fraction(v.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise InputError(f"bad value in --set {item!r}") from e
        parse_marked(text, job.ring)
    if ns.command == "truncate":
        job.truncate_degree = ns.degree
    if ns.command == "evaluate":
        job.presentation = ns.presentation
    return job


def _infer_ring(text: str) -> int:
    idx = [int(i) for i in re.findall(r"x(\d+)", text)]
    if not idx:
        raise InputError("cannot infer the ring; pass --ring")
    return max(idx)


@contextmanager
def _executor(threads: int):
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            yield ex
    else:
        yield None


# -- rendering helpers ----------------------------------------------------------------

def _term_json(t: ModuleTerm) -> str:
    return format_term(t, True)


def poly_json(p: Poly) -> Dict[str, str]:
    return {_term_json(t): str(c) for t, c in sorted(p.items(), key=lambda tc: tc[0])}


def matrix_json(M: PolyMatrix) -> dict:
    return {
        "row_shifts": M.row_shifts,
        "col_shifts": M.col_shifts,
        "entries": [{"row": r + 1, "col": c + 1, "poly": poly_json(p)} for (r, c), p in sorted(M.entries.items())],
        "heads": [None if h is None else {"row": h[0] + 1, "exps": list(h[1])} for h in M.heads],
    }


def matrix_from_json(d: dict, nvars: int) -> PolyMatrix:
    ents = {}
    for e in d["entries"]:
        terms = {}
        for k, v in e["poly"].items():
            t = next(iter(parse_poly(k, nvars, [0] * 64)))
            terms[ModuleTerm(t.exps)] = Fraction(v)
        ents[(e["row"] - 1, e["col"] - 1)] = Poly(terms)
    heads = [None if h is None else (h["row"] - 1, tuple(h["exps"])) for h in d["heads"]]
    return PolyMatrix(d["row_shifts"], d["col_shifts"], ents, heads)


def resolution_payload(mats: List[PolyMatrix], nvars: int) -> dict:
    return {"nvars": nvars, "matrices": [matrix_json(M) for M in mats]}


def resolution_from_payload(d: dict) -> List[PolyMatrix]:
    return [matrix_from_json(m, d["nvars"]) for m in d["matrices"]]


def _render_resolution(mats: List[PolyMatrix]) -> str:
    out = []
    for t, M in enumerate(mats):
        out.append(f"∂_{t}: R(-{M.col_shifts}) -> R(-{M.row_shifts})")
        out.append(format_matrix(M))
    return "\n".join(out)


# -- dispatch ------------------------------------------------------------------------

def _module(job: Job) -> QuasiStableModule:
    return build_module(parse_module(job.module_text, job.ring), job.degree_cap)


def _basis(job: Job) -> MarkedSet:
    return build_marked(parse_marked(job.basis_text, job.ring), job.values, job.degree_cap)


def _styles(job: Job):
    from .scheme import CURVE_STYLES, SMALL_STYLES
    return SMALL_STYLES if job.style == "small" else CURVE_STYLES


def run(job: Job) -> Report:
    handler = _HANDLERS[job.command]
    with _executor(job.threads) as ex:
        return handler(job, ex)


def _cmd_pommaret(job, ex):
    U = _module(job)
    if job.oracle:
        is_quasi_stable(U.minimal_basis, cross_check=True, degree_cap=job.degree_cap)
    mod = U.m > 1
    inv = U.invariants
    lines = [f"Pommaret basis: {', '.join(format_term(t, mod) for t in U.pommaret_basis)}",
             f"stable: {'yes' if U.is_stable() else 'no'}",
             f"D = {inv.D}, pdim = {inv.pdim}, reg = {inv.reg}",
             "ranks r_ij: " + ", ".join(f"r_{i},{j}={v}" for (i, j), v in sorted(inv.ranks.items()))]
    if inv.discrepancies:
        lines.append("closed-formula discrepancies (formula, direct): " + ", ".join(
            f"r_{i},{j}: {a} vs {b}" for (i, j), (a, b) in sorted(inv.discrepancies.items())))
    payload = {"pommaret_basis": [_term_json(t) for t in U.pommaret_basis], "stable": U.is_stable(),
               "D": inv.D, "pdim": inv.pdim, "reg": inv.reg,
               "ranks": [{"i": i, "j": j, "r": v} for (i, j), v in sorted(inv.ranks.items())],
               "discrepancies": [{"i": i, "j": j, "formula": a, "direct": b}
                                 for (i, j), (a, b) in sorted(inv.discrepancies.items())]}
    return Report(job.command, 0, "\n".join(lines), payload)


def _cmd_check_qs(job, ex):
    spec = parse_module(job.module_text, job.ring)
    v = is_quasi_stable(spec.gens, cross_check=job.oracle, degree_cap=job.degree_cap)
    if v:
        return Report(job.command, 0, "quasi-stable", {"quasi_stable": True})
    g, i, j = v.witness
    w = {"generator": _term_json(g), "i": i, "j": j}
    return Report(job.command, 1, v.describe(), {"quasi_stable": False}, w)


def _basis_witness(F: MarkedSet, v) -> dict:
    h, i, r = v.witness
    return {"head": _term_json(h), "variable": i, "remainder": poly_json(r)}


def _cmd_marked_check(job, ex):
    F = _basis(job)
    v = is_marked_basis(F, ex)
    payload = {"is_basis": bool(v)}
    if job.oracle and F.is_rational():
        from .oracle import direct_sum_check
        top = F.U.invariants.reg + 2
        ds = all(direct_sum_check(F, s) for s in range(0, top + 1))
        payload["direct_sum_check"] = ds
        if ds != bool(v):
            raise AssertionError("criterion and direct-sum check disagree")
    if v:
        return Report(job.command, 0, "marked basis", payload)
    return Report(job.command, 1, v.describe(F.U.m > 1), payload, _basis_witness(F, v))


def _cmd_truncate(job, ex):
    F = _basis(job)
    T = truncate(F, job.truncate_degree)
    return Report(job.command, 0, T.describe(),
                  {"heads": [_term_json(h) for h in T.heads],
                   "elements": [poly_json(T[h]) for h in T.heads]})


def _cmd_syzygies(job, ex):
    F = _basis(job)
    S = fundamental_syzygies(F, ex)
    return Report(job.command, 0, S.describe(),
                  {"heads": [_term_json(h) for h in S.heads], "syzygies": [poly_json(S[h]) for h in S.heads]})


def _euler_check(F: MarkedSet, mats: List[PolyMatrix]) -> bool:
    from .oracle import module_hilbert_function
    n1 = F.U.nvars
    for s in range(0, F.U.invariants.reg + 4):
        alt = 0
        for t, M in enumerate(mats):
            alt += (-1) ** t * sum(comb(s - d + n1 - 1, n1 - 1) for d in M.col_shifts if s >= d)
        if alt != module_hilbert_function(F, s):
            return False
    return True


def _cmd_resolution(job, ex):
    F = _basis(job)
    res = u_resolution(F, ex)
    payload = resolution_payload(res.matrices, F.U.nvars)
    payload["is_complex"] = res.is_complex()
    if job.oracle and F.is_rational():
        payload["euler_check"] = _euler_check(F, res.matrices)
    return Report(job.command, 0, _render_resolution(res.matrices), payload)


def _cmd_betti(job, ex):
    F = _basis(job)
    res = u_resolution(F, ex)
    mr, bt = minimize(res)
    rt = res.betti()
    text = rt.render("r") + "\n\n" + bt.render("beta")
    return Report(job.command, 0, text, {
        "r": [{"i": i, "j": j, "v": v} for (i, j), v in sorted(rt.entries.items())],
        "beta": [{"i": i, "j": j, "v": v} for (i, j), v in sorted(bt.entries.items())]})


def _cmd_minimality(job, ex):
    F = _basis(job)
    v = is_minimal(u_resolution(F, ex))
    payload = {"minimal": v.minimal, "shortcut": v.shortcut, "non_unit_constants": v.non_unit_constants}
    if v.minimal is None:
        return Report(job.command, 1, v.describe(), payload, {"non_unit_constants": True})
    if v.minimal:
        return Report(job.command, 0, v.describe(), payload)
    t, r, c, u = v.witness
    return Report(job.command, 1, v.describe(), payload,
                  {"matrix": t, "row": r + 1, "col": c + 1, "constant": str(u)})


def _cmd_cwl(job, ex):
    c = componentwise_certificate(_basis(job))
    return Report(job.command, 0 if c else 1, f"{c.status}: {c.reason}", {"status": c.status, "reason": c.reason})


def _cmd_groebner(job, ex):
    ob = groebner_obstruction(_basis(job))
    text = ("obstruction: not a Groebner basis for any term order with this initial ideal" if ob
            else "no obstruction detected")
    return Report(job.command, 0 if ob else 1, text, {"obstruction": ob})


def _presentation_report(job, pres_list) -> Report:
    text = "\n".join(p.describe() + ("" if p.is_empty else "\n  " + "\n  ".join(str(g) for g in p.generators))
                     for p in pres_list)
    if any(p.constant_slots for p in pres_list):
        from .polyring import param_name
        text += "\nconstant slots: " + ", ".join(
            f"{param_name(p)} at [{r + 1},{c + 1}] = {v}" for pr in pres_list for p, r, c, v in pr.constant_slots)
    return Report(job.command, 0, text, {"presentations": [p.to_json() for p in pres_list]})


def _cmd_scheme(job, ex):
    from .scheme import marked_scheme_ideal
    U = _module(job)
    p = marked_scheme_ideal(U, _styles(job)[0], ex)
    if p.is_empty:
        fam = next(iter(p.families))
        p_text = f"Mf(U) = affine space of dimension {p.families[fam]}"
        return Report(job.command, 0, p_text, {"presentations": [p.to_json()]})
    return _presentation_report(job, [p])


def _cmd_syzygy_scheme(job, ex):
    from .scheme import syzygy_scheme_ideal
    return _presentation_report(job, [syzygy_scheme_ideal(_module(job), _styles(job))])


def _cmd_resolution_scheme(job, ex):
    from .scheme import resolution_scheme_ideals
    return _presentation_report(job, resolution_scheme_ideals(_module(job), _styles(job)))


def _cmd_locus(job, ex):
    from .scheme import minimality_locus_ideal
    st = _styles(job)
    return _presentation_report(job, [minimality_locus_ideal(_module(job), st[0], st[1])])


def _cmd_evaluate(job, ex):
    from .scheme import (generic_chain, marked_scheme_ideal, minimality_locus_ideal, resolution_scheme_ideals,
                         syzygy_scheme_ideal)
    F = _basis(job)
    if not F.is_rational():
        raise InputError("evaluate needs rational coefficients (use --set)")
    chain = generic_chain(F.U)
    if job.presentation == "U":
        pres = [marked_scheme_ideal(F.U, chain[0].style, generic=chain[0])]
    elif job.presentation == "S":
        pres = [syzygy_scheme_ideal(F.U, chain=chain)]
    elif job.presentation == "locus":
        pres = [minimality_locus_ideal(F.U, chain=chain[:2])]
    else:
        pres = resolution_scheme_ideals(F.U, chain=chain)
    from .scheme import evaluate_point
    ok = True
    residues = []
    for p in pres:
        good, nz = evaluate_point(p, F, chain)
        ok = ok and good
        residues.extend(str(r) for r in nz)
    if ok:
        text = "all generators vanish"
    else:
        text = "\n".join([f"{len(residues)} generator(s) do not vanish:"] + [f"  {r}" for r in residues])
    return Report(job.command, 0 if ok else 1, text, {"vanishes": ok},
                  None if ok else {"residues": residues})


def _cmd_curve_repro(job, ex):
    from .corpus import curve_basis, curve_components, curves_module
    from .oracle import intersect_by_degree, quotient_hilbert_function
    from .polyring import param_name
    from .scheme import (generic_chain, latex_entries, latex_marked_set, marked_scheme_ideal,
                         minimality_locus_ideal, resolution_scheme_ideals)
    U = curves_module()
    chain = generic_chain(U)
    counts = {g.style.family: len(g.params) for g in chain}
    lines = ["parameter counts: " + ", ".join(f"{k}={v}" for k, v in counts.items())]
    ug = marked_scheme_ideal(U, generic=chain[0])
    sres = resolution_scheme_ideals(U, chain=chain)
    locus = minimality_locus_ideal(U, chain=chain[:2])
    lines.append(ug.describe())
    lines.extend(p.describe() for p in sres)
    lines.append("constant slots: " + ", ".join(f"{param_name(p)} = {v}" for p, _, _, v in locus.constant_slots))
    lines.append("generic marked set:")
    lines.extend("  " + s for s in latex_marked_set(chain[0]))
    for t in (1, 2):
        lines.append(f"generic ∂_{t}:")
        lines.extend("  " + " & ".join(row) for row in latex_entries(chain[t]))
    ideals = {}
    for name in ("I1", "I2", "I3"):
        F = curve_basis(name)
        res = u_resolution(F, ex)
        v = is_minimal(res)
        mr, bt = minimize(res)
        hr = quotient_hilbert_function(list(mr.matrices[-1].entries.values()), range(5), 4)
        comps = curve_components(name)
        hf = [comb(s + 3, 3) - intersect_by_degree(comps, s, 4).dim for s in range(2, 7)]
        ideals[name] = {"minimal": bool(v.minimal), "hartshorne_rao": hr, "hilbert_function_2_6": hf}
        lines.append(f"{name}: J-resolution {'minimal' if v.minimal else v.describe()}; "
                     f"Hartshorne-Rao HF {tuple(hr)}; HF(R/I, 2..6) = {hf}")
    payload = {"counts": counts, "U_generators": len(ug.generators),
               "S_generators": [len(p.generators) for p in sres],
               "constant_slots": [param_name(p) for p, *_ in locus.constant_slots], "ideals": ideals}
    return Report(job.command, 0, "\n".join(lines), payload)


_HANDLERS = {
    "pommaret": _cmd_pommaret,
    "check-quasistable": _cmd_check_qs,
    "marked-check": _cmd_marked_check,
    "truncate": _cmd_truncate,
    "syzygies": _cmd_syzygies,
    "resolution": _cmd_resolution,
    "betti": _cmd_betti,
    "minimality": _cmd_minimality,
    "cwl-certificate": _cmd_cwl,
    "groebner-obstruction": _cmd_groebner,
    "scheme-ideal": _cmd_scheme,
    "syzygy-scheme": _cmd_syzygy_scheme,
    "resolution-scheme": _cmd_resolution_scheme,
    "minimality-locus": _cmd_locus,
    "evaluate": _cmd_evaluate,
    "appendix-repro": _cmd_curve_repro,
}


def render(report: Report, as_json: bool) -> str:
    if as_json:
        doc = {"schema": SCHEMA, "command": report.command, "exit_code": report.exit_code,
               "result": report.payload}
        if report.witness is not None:
            doc["witness"] = report.witness
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    return report.text


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        job = parse_input(argv)
        report = run(job)
    except SystemExit as e:   # argparse usage errors
        return 2 if e.code else 0
    except (InputError, PolyError, MarkedSetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NotQuasiStable as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except NotABasis as e:
        if "--json" in argv:
            h, i, r = e.witness
            print(json.dumps({"schema": SCHEMA, "command": argv[0], "exit_code": 1,
                              "witness": {"head": _term_json(h), "variable": i, "remainder": poly_json(r)}},
                             indent=2, sort_keys=True, ensure_ascii=False))
        else:
            print(str(e) if str(e).startswith("not a marked basis") else f"not a marked basis: {e}")
        return 1
    print(render(report, job.json))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
