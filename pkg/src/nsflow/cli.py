"""Command-line front end.

Exit codes: 0 success / all checks passed, 1 a check failed, 2 malformed
input or usage error.  Every checking command accepts ``--json`` for a
machine-readable record instead of the text table.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Optional, Sequence, TextIO

from . import builders
from .documents import (
    DocumentError,
    dump_json,
    export_dot,
    graph_from_doc,
    graph_to_doc,
    load_json,
    template_from_doc,
    template_to_doc,
    template_to_dot,
)
from .graph import (
    check_s3,
    check_template_vertex,
    iter_residuals,
    summand_lower_bound,
    validate_abstract,
)
from .template import build_lorenz, template_genus, thicken_boundary, validate_template

OK, FAILED, MALFORMED = 0, 1, 2


class InputError(Exception):
    """Unreadable or schema-violating input; maps to exit code 2."""


class CheckFailed(Exception):
    """A precondition of a constructive command failed; maps to exit code 1."""


def _read(path: str):
    try:
        return load_json(path)
    except OSError as exc:
        raise InputError(f"{path}: cannot read file: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load_graph(path: str):
    try:
        return graph_from_doc(_read(path))
    except DocumentError as exc:
        raise InputError(f"{path}: schema violation at {exc.where or '/'}: {exc.message}") from None


def _load_template(path: str):
    try:
        return template_from_doc(_read(path))
    except DocumentError as exc:
        raise InputError(f"{path}: schema violation at {exc.where or '/'}: {exc.message}") from None


def _emit(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out is None:
        stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"{out}: cannot write file: {exc.strerror or exc}") from None


def _diag_lines(diags) -> list[str]:
    return [f"  {d}" for d in diags]


# --------------------------------------------------------------------------
# graph commands


def cmd_graph_validate(args, out: TextIO) -> int:
    L = _load_graph(args.file)
    diags = validate_abstract(L)
    if args.json:
        out.write(dump_json({"ok": not diags, "diagnostics": [d.to_dict() for d in diags]}))
    else:
        out.write(f"{len(L.vertices)} vertices, {len(L.edges)} edges\n")
        out.write("valid\n" if not diags else "\n".join(["invalid:"] + _diag_lines(diags)) + "\n")
    return OK if not diags else FAILED


def cmd_graph_s3check(args, out: TextIO) -> int:
    L = _load_graph(args.file)
    rep = check_s3(L)
    conds = [("condition1", rep.condition1), ("condition2", rep.condition2), ("condition3", rep.condition3)]
    if args.json:
        rec = {"passed": rep.passed, "preconditions": [d.to_dict() for d in rep.preconditions]}
        for name, c in conds:
            rec[name] = {"passed": c.passed, "diagnostics": [d.to_dict() for d in c.details]}
        out.write(dump_json(rec))
    else:
        out.write(f"preconditions: {'ok' if not rep.preconditions else 'violated'}\n")
        out.writelines(line + "\n" for line in _diag_lines(rep.preconditions))
        titles = {"condition1": "tree / terminal degree", "condition2": "saddle bounds", "condition3": "balance"}
        for name, c in conds:
            out.write(f"{name} ({titles[name]}): {'pass' if c.passed else 'FAIL'}\n")
            out.writelines(line + "\n" for line in _diag_lines(c.details))
        out.write(f"S3: {'PASS' if rep.passed else 'FAIL'}\n")
    return OK if rep.passed else FAILED


def cmd_graph_summands(args, out: TextIO) -> int:
    L = _load_graph(args.file)
    diags = validate_abstract(L)
    if diags:
        if args.json:
            out.write(dump_json({"ok": False, "diagnostics": [d.to_dict() for d in diags]}))
        else:
            out.write("\n".join(["not a Lyapunov graph:"] + _diag_lines(diags)) + "\n")
        return FAILED
    b = summand_lower_bound(L)
    if args.json:
        out.write(
            dump_json(
                {
                    "n": b.n,
                    "ok": b.ok,
                    "certificate": list(b.certificate),
                    "source_edge": b.source_edge,
                    "cycle_rank": b.cycle_rank,
                    "diagnostics": [d.to_dict() for d in b.diagnostics],
                }
            )
        )
    else:
        out.write(f"summand lower bound n = {b.n}\n")
        out.write(f"cycle rank = {b.cycle_rank}\n")
        if b.source_edge is not None:
            out.write(f"heaviest edge: {b.source_edge}\n")
        out.write(f"certificate: {', '.join(b.certificate) if b.certificate else '-'}\n")
        out.writelines(line + "\n" for line in _diag_lines(b.diagnostics))
        out.write(f"ok: {str(b.ok).lower()}\n")
    return OK if b.ok else FAILED


def cmd_graph_residuals(args, out: TextIO) -> int:
    L = _load_graph(args.file)
    rows = list(iter_residuals(L))
    bad = [r for r in rows if r[1] != r[2]]
    if args.json:
        out.write(
            dump_json(
                {
                    "ok": not bad,
                    "vertices": [{"id": v, "residual": a, "required": r} for v, a, r in rows],
                }
            )
        )
    else:
        width = max([len("vertex")] + [len(v) for v, _, _ in rows])
        out.write(f"{'vertex':<{width}}  residual  required\n")
        for v, a, r in rows:
            mark = "" if a == r else "  <-- mismatch"
            out.write(f"{v:<{width}}  {a:>8}  {r:>8}{mark}\n")
    return OK if not bad else FAILED


def cmd_graph_surgery(args, out: TextIO) -> int:
    L1 = _load_graph(args.left)
    L2 = _load_graph(args.right)
    try:
        G = builders.surgery_connect(L1, args.left_edge, L2, args.right_edge)
    except builders.SurgeryError as exc:
        raise CheckFailed(f"surgery precondition failed: {exc}") from None
    _emit(dump_json(graph_to_doc(G)), args.output, out)
    return OK


# --------------------------------------------------------------------------
# generators


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("n must be >= 1")
    return n


def cmd_gen_lemma34(args, out: TextIO) -> int:
    _emit(dump_json(graph_to_doc(builders.build_lemma34(args.n))), args.output, out)
    return OK


def cmd_gen_prop35(args, out: TextIO) -> int:
    _emit(dump_json(graph_to_doc(builders.build_prop35(args.n))), args.output, out)
    return OK


def cmd_gen_section5(args, out: TextIO) -> int:
    fx = builders.build_section5()
    try:
        os.makedirs(args.output, exist_ok=True)
    except OSError as exc:
        raise InputError(f"{args.output}: cannot create directory: {exc.strerror or exc}") from None
    for name, L in (("G", fx.G), ("L", fx.L)):
        _emit(dump_json(graph_to_doc(L)), os.path.join(args.output, f"{name}.json"), out)
    out.write(f"wrote G.json and L.json to {args.output}\n")
    return OK


# --------------------------------------------------------------------------
# template commands


def _checked_template(path: str, out: TextIO, as_json: bool):
    T = _load_template(path)
    diags = validate_template(T)
    if diags:
        if as_json:
            out.write(dump_json({"ok": False, "diagnostics": [d.to_dict() for d in diags]}))
        else:
            out.write("\n".join(["invalid template:"] + _diag_lines(diags)) + "\n")
        return None
    return T


def cmd_template_validate(args, out: TextIO) -> int:
    T = _checked_template(args.file, out, args.json)
    if T is None:
        return FAILED
    if args.json:
        out.write(dump_json({"ok": True, "diagnostics": []}))
    else:
        out.write(f"{len(T.charts)} charts, {len(T.strips)} strips\nvalid\n")
    return OK


def _report_table(rep) -> str:
    lines = ["side      chi  circles  genus"]
    for c in rep.entrance + rep.exit:
        lines.append(f"{c.kind:<8}  {c.euler_char:>3}  {c.boundary_circles:>7}  {c.capped_genus:>5}")
    lines.append(f"dividing curves: {rep.dividing_curves}")
    lines.append(f"s0={rep.s0} s1={rep.s1} t0={rep.t0} t1={rep.t1}")
    lines.append(f"total boundary euler characteristic: {rep.total_boundary_euler}")
    lines.append(f"closed boundary genera: {', '.join(map(str, rep.closed_genera))}")
    lines.append(f"template genus: {template_genus(rep)}")
    return "\n".join(lines) + "\n"


def cmd_template_boundary(args, out: TextIO) -> int:
    T = _checked_template(args.file, out, args.json)
    if T is None:
        return FAILED
    rep = thicken_boundary(T)
    out.write(dump_json(rep.to_dict()) if args.json else _report_table(rep))
    return OK


def cmd_template_genus(args, out: TextIO) -> int:
    T = _checked_template(args.file, out, args.json)
    if T is None:
        return FAILED
    g = template_genus(thicken_boundary(T))
    out.write(dump_json({"template_genus": g}) if args.json else f"{g}\n")
    return OK


def cmd_template_lorenz(args, out: TextIO) -> int:
    _emit(dump_json(template_to_doc(build_lorenz())), args.output, out)
    return OK


def cmd_template_check_vertex(args, out: TextIO) -> int:
    L = _load_graph(args.graph)
    T = _checked_template(args.template, out, args.json)
    if T is None:
        return FAILED
    if args.vertex not in L:
        raise InputError(f"{args.graph}: no vertex {args.vertex!r}")
    try:
        res = check_template_vertex(L, args.vertex, thicken_boundary(T))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        out.write(
            dump_json(
                {
                    "passed": res.passed,
                    "side": res.side,
                    "template_genus": res.g_T,
                    "s": res.s,
                    "weight_sum": res.weight_sum,
                    "s_ok": res.s_ok,
                    "genus_ok": res.genus_ok,
                    "summand_ok": res.summand_ok,
                    "certificate": list(res.certificate),
                }
            )
        )
    else:
        out.write(f"side: {res.side}, template genus {res.g_T}\n")
        out.write(f"heavy edges s = {res.s}: {'ok' if res.s_ok else 'FAIL'}\n")
        out.write(f"weight sum {res.weight_sum} - s >= g(T): {'ok' if res.genus_ok else 'FAIL'}\n")
        out.write(f"summand certificate [{', '.join(res.certificate)}]: {'ok' if res.summand_ok else 'FAIL'}\n")
        out.write("PASS\n" if res.passed else "FAIL\n")
    return OK if res.passed else FAILED


# --------------------------------------------------------------------------
# export


def cmd_export_dot(args, out: TextIO) -> int:
    doc = _read(args.file)
    try:
        if isinstance(doc, dict) and "charts" in doc:
            text = template_to_dot(template_from_doc(doc))
        else:
            text = export_dot(doc)
    except DocumentError as exc:
        raise InputError(f"{args.file}: schema violation at {exc.where or '/'}: {exc.message}") from None
    _emit(text, args.output, out)
    return OK


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Raise instead of exiting so :func:`run` controls the exit code."""

    def error(self, message: str):
        raise InputError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nsflow", description="Lyapunov graph and template checks for nonsingular flows.")
    groups = p.add_subparsers(dest="group", metavar="{graph,gen,template,export}", parser_class=_Parser)
    groups.required = True

    def add(sub, name: str, fn: Callable, help: str, file_arg: bool = False, json_flag: bool = False):
        q = sub.add_parser(name, help=help)
        if file_arg:
            q.add_argument("file", metavar="FILE")
        if json_flag:
            q.add_argument("--json", action="store_true", help="machine-readable output")
        q.set_defaults(func=fn)
        return q

    g = groups.add_parser("graph", help="Lyapunov graph checks").add_subparsers(dest="cmd", parser_class=_Parser)
    g.required = True
    add(g, "validate", cmd_graph_validate, "abstract well-formedness", True, True)
    add(g, "s3check", cmd_graph_s3check, "realizability on the 3-sphere", True, True)
    add(g, "summands", cmd_graph_summands, "forced S1xS2 summands with certificate", True, True)
    add(g, "residuals", cmd_graph_residuals, "per-vertex balance residuals", True, True)
    q = add(g, "surgery", cmd_graph_surgery, "connected sum of two graphs")
    q.add_argument("--left", required=True, metavar="A")
    q.add_argument("--left-edge", required=True, metavar="E1")
    q.add_argument("--right", required=True, metavar="B")
    q.add_argument("--right-edge", required=True, metavar="E2")
    q.add_argument("-o", "--output", metavar="OUT")

    gen = groups.add_parser("gen", help="generate fixture graphs").add_subparsers(dest="cmd", parser_class=_Parser)
    gen.required = True
    for name, fn in (("lemma34", cmd_gen_lemma34), ("prop35", cmd_gen_prop35)):
        q = add(gen, name, fn, f"{name} family")
        q.add_argument("--n", type=_positive, required=True)
        q.add_argument("-o", "--output", metavar="OUT")
    q = add(gen, "section5", cmd_gen_section5, "gadget graph G and closed graph L")
    q.add_argument("-o", "--output", metavar="DIR", required=True)

    t = groups.add_parser("template", help="template boundary analysis").add_subparsers(
        dest="cmd", parser_class=_Parser
    )
    t.required = True
    add(t, "validate", cmd_template_validate, "template well-formedness", True, True)
    add(t, "boundary", cmd_template_boundary, "entrance/exit decomposition", True, True)
    add(t, "genus", cmd_template_genus, "template genus", True, True)
    q = add(t, "lorenz", cmd_template_lorenz, "write the Lorenz template")
    q.add_argument("-o", "--output", metavar="OUT")
    q = add(t, "check-vertex", cmd_template_check_vertex, "saddle vertex vs template boundary data", json_flag=True)
    q.add_argument("--graph", required=True, metavar="G")
    q.add_argument("--vertex", required=True, metavar="V")
    q.add_argument("--template", required=True, metavar="T")

    e = groups.add_parser("export", help="export formats").add_subparsers(dest="cmd", parser_class=_Parser)
    e.required = True
    q = add(e, "dot", cmd_export_dot, "Graphviz DOT text", True)
    q.add_argument("-o", "--output", metavar="OUT")
    return p


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as exc:
        stderr.write(f"usage error: {exc}\n")
        return MALFORMED
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args, stdout)
    except InputError as exc:
        stderr.write(f"error: {exc}\n")
        return MALFORMED
    except CheckFailed as exc:
        stderr.write(f"{exc}\n")
        return FAILED


def main() -> None:
    sys.exit(run())
