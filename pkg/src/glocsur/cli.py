"""Command-line front end: ``glocsur check|sixterm|presets|selftest``.

Exit codes: 0 surjective (or all checks passed), 1 not surjective (or a
check failed), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .errors import GlocsurError, InvariantViolation, MalformedInputError
from .gmodule import DEFAULT_MAX_ORDER
from .io import (
    Report,
    emit_json,
    group_str,
    parse_problem,
    parse_sixterm,
    problem_doc,
    subgroup_doc,
)
from .localization import LocalizationProblem, PlaceSpec, is_surjective
from .presets import PRESETS, RadicalData, preset, prime_degree_check, theorem51_predict
from .sixterm import build_six_term, check_exactness

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise MalformedInputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from None


# -- six-term payload ------------------------------------------------------------


def _sixterm_data(st, verify: bool) -> dict:
    T = st.torsion_groups
    data = {
        "subgroup": list(st.subgroup.elements),
        "torsion": [group_str(0, g.invariant_factors) for g in T],
        "tensor_ranks": list(st.tensor_ranks),
        "maps": {
            "i_tors": st.i_tors.matrix.tolist(),
            "j_tors": st.j_tors.matrix.tolist(),
            "delta": st.delta_matrix(),
            "i_tensor": st.i_tensor.tolist(),
            "j_tensor": st.j_tensor.tolist(),
        },
    }
    if verify:
        rep = check_exactness(st)
        data["exactness"] = {
            "exact": rep.exact,
            "level": rep.level,
            "nodes": [{"node": n.node, "exact": n.exact, "witness": n.witness, "note": n.note}
                      for n in rep.nodes],
            "composites_zero": rep.composites_zero,
        }
    return data


# -- commands ------------------------------------------------------------------


def cmd_check(args) -> tuple[Report, int]:
    pf = parse_problem(_load(args.file), args.max_group_order)
    problem = pf.problem
    v = is_surjective(problem)
    data = {
        "surjective": v.surjective,
        "obstruction": {"group": group_str(*v.obstruction), "invariant_factors": v.obstruction[1],
                        "generators": [list(g) for g in v.obstruction_generators]},
        "torsion_coinvariants": group_str(*v.torsion_coinvariants),
        "im_sigma_S": subgroup_doc(v.im_sigma_S),
        "im_sigma_complement": subgroup_doc(v.im_sigma_comp),
        "places": [
            {"id": pid, "kind": problem.place(pid).kind.value, "side": "S" if pid in problem.S.explicit else "S^c",
             "decomp_order": len(problem.place(pid).decomp), "image": group_str(*img.canonical())}
            for pid, img in v.per_place.items()
        ],
    }
    if pf.radical is not None:
        rad = {}
        if pf.v0 is not None:
            rad["v0"] = pf.v0
            rad["pr_condition_predicts_surjective"] = theorem51_predict(pf.radical, problem, pf.v0)
            if pf.p is not None:
                rad["prime_degree_pattern"] = prime_degree_check(pf.radical, problem, pf.v0, pf.p)
        if args.verify_exactness:
            st = build_six_term(pf.radical.short_exact_sequence())
            rad["six_term"] = _sixterm_data(st, True)
        data["radical"] = rad
    return Report.make("check", data), EXIT_OK if v.surjective else EXIT_FAIL


def cmd_sixterm(args) -> tuple[Report, int]:
    seq, H = parse_sixterm(_load(args.file), args.max_group_order)
    st = build_six_term(seq, H)
    data = _sixterm_data(st, True)
    return Report.make("sixterm", data), EXIT_OK if data["exactness"]["exact"] else EXIT_FAIL


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise MalformedInputError(f"parameter {item!r} must look like key=value")
        try:
            out[key] = json.loads(val)
        except json.JSONDecodeError:
            out[key] = val
    return out


def preset_problem(name: str, params: dict) -> tuple[LocalizationProblem, RadicalData | None]:
    """The standard fixture for a preset.

    One finite place per conjugacy class of cyclic subgroups (the trivial
    class is the split place and the only one outside S), plus a real place
    in S when the group has an element of order 2. When the carrier is a
    lattice the radical is all of M; when it is finite the radical is zero.
    """
    M = preset(name, **params)
    G = M.group
    places, S = [], []
    for k, H in enumerate(G.cyclic_subgroup_classes()):
        if H.is_trivial():
            pid = "split"
        elif len(H) == G.order:
            pid = "inert"
        else:
            pid = f"f{k}"
        places.append(PlaceSpec(pid, "finite", H))
        if pid != "split":
            S.append(pid)
    inv2 = [H for H in G.cyclic_subgroup_classes() if len(H) == 2]
    if inv2:
        places.append(PlaceSpec("real", "real", inv2[0]))
        S.append("real")
    problem = LocalizationProblem(M, places, S)
    rad = None
    if M.carrier.free_rank == M.rank and not M.carrier.invariant_factors:
        rad = RadicalData(M, tuple(tuple(int(i == j) for j in range(M.rank)) for i in range(M.rank)))
    elif M.carrier.is_finite():
        rad = RadicalData(M, ())
    return problem, rad


def cmd_presets(args) -> tuple[Report | None, int]:
    if args.action == "list":
        data = {"presets": [{"name": p.name, "params": p.params, "description": p.description}
                            for p in PRESETS.values()]}
        return Report.make("presets list", data), EXIT_OK
    if not args.name:
        raise MalformedInputError("presets emit needs a preset name")
    params = _parse_params(args.param)
    problem, rad = preset_problem(args.name, params)
    v = is_surjective(problem)
    desc = (f"preset {args.name} {json.dumps(params, sort_keys=True)}; expected verdict: "
            f"{'surjective' if v.surjective else 'not surjective'}, obstruction {group_str(*v.obstruction)}")
    doc = problem_doc(problem, rad, "split" if rad is not None else None, desc)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return None, EXIT_OK


def cmd_selftest(args) -> tuple[Report, int]:
    from .selftest import run_all
    results = run_all(args.seed, args.scale, args.suite)
    data = {"seed": args.seed, "suites": [r.as_dict() for r in results],
            "passed": all(r.ok for r in results)}
    report = Report.make("selftest", data)
    report.notes = [f"{r.name}: {r.seconds:.2f}s" for r in results]
    return report, EXIT_OK if data["passed"] else EXIT_FAIL


# -- text rendering --------------------------------------------------------------


def _render_text(r: Report) -> str:
    d = r.data
    lines = []
    if r.command == "check":
        lines.append(f"verdict: {'surjective' if d['surjective'] else 'NOT surjective'}")
        lines.append(f"obstruction: {d['obstruction']['group']}")
        lines.append(f"torsion coinvariants: {d['torsion_coinvariants']}")
        lines.append("places:")
        for p in d["places"]:
            lines.append(f"  {p['id']:<10} {p['kind']:<8} {p['side']:<4} |G_w|={p['decomp_order']:<4} "
                         f"im λ = {p['image']}")
        if "radical" in d:
            for k, val in d["radical"].items():
                if k != "six_term":
                    lines.append(f"radical {k}: {val}")
            if "six_term" in d["radical"]:
                lines.extend(_render_sixterm(d["radical"]["six_term"]))
    elif r.command == "sixterm":
        lines.extend(_render_sixterm(d))
    elif r.command == "presets list":
        for p in d["presets"]:
            params = ", ".join(p["params"])
            lines.append(f"{p['name']:<26} ({params})  {p['description']}")
    elif r.command == "selftest":
        for s in d["suites"]:
            lines.append(f"{'PASS' if s['failed'] == 0 else 'FAIL'} {s['name']}: "
                         f"{s['passed']} passed, {s['failed']} failed")
            lines.extend(f"    {f}" for f in s["failures"])
        lines.append(f"seed {d['seed']}: {'all suites passed' if d['passed'] else 'failures present'}")
    lines.extend(r.notes)
    if r.wall_time is not None:
        lines.append(f"wall time: {r.wall_time:.3f}s")
    return "\n".join(lines) + "\n"


def _render_sixterm(d: dict) -> list[str]:
    m = d["maps"]
    t = d["torsion"]
    r = d["tensor_ranks"]
    lines = [
        f"0 -> {t[0]} -> {t[1]} -> {t[2]} -δ-> (Q/Z)^{r[0]} -> (Q/Z)^{r[1]} -> (Q/Z)^{r[2]} -> 0",
        f"i_* (torsion): {m['i_tors']}",
        f"j_* (torsion): {m['j_tors']}",
        f"δ: {m['delta']}",
        f"i_* (tensor): {m['i_tensor']}",
        f"j_* (tensor): {m['j_tensor']}",
    ]
    if "exactness" in d:
        ex = d["exactness"]
        lines.append(f"exactness (checked at level {ex['level']}): {'exact' if ex['exact'] else 'NOT exact'}")
        for n in ex["nodes"]:
            extra = "" if n["exact"] else f"  witness {n['witness']} {n['note']}".rstrip()
            lines.append(f"  {n['node']}: {'ok' if n['exact'] else 'FAIL'}{extra}")
    return lines


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=["text", "json"],
                        default=os.environ.get("GLOCSUR_REPORT", "text"),
                        help="report format (default: $GLOCSUR_REPORT or text)")
    common.add_argument("--max-group-order", type=int, default=DEFAULT_MAX_ORDER)
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="glocsur", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide surjectivity of loc_S")
    p.add_argument("file", help="problem file (JSON), or - for stdin")
    p.add_argument("--verify-exactness", action="store_true",
                   help="also build and verify the six-term sequence of the radical")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sixterm", parents=[common], help="six-term sequence of a short exact sequence")
    p.add_argument("file")
    p.add_argument("--verify-exactness", action="store_true", help="accepted; exactness is always checked")
    p.set_defaults(func=cmd_sixterm)

    p = sub.add_parser("presets", parents=[common], help="list presets or emit a problem file")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="preset parameter; values are parsed as JSON when possible")
    p.add_argument("--out", help="write the problem file here instead of stdout")
    p.set_defaults(func=cmd_presets)

    p = sub.add_parser("selftest", parents=[common], help="run the randomized property suites")
    p.add_argument("--scale", type=float, default=1.0, help="multiply the default instance counts")
    p.add_argument("--suite", action="append", help="run only the named suite (repeatable)")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_group_order < 1:
        print("error: --max-group-order must be positive", file=sys.stderr)
        return EXIT_INPUT
    t = time.perf_counter()
    try:
        report, code = args.func(args)
    except MalformedInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as e:
        print(f"internal invariant violated: {e}", file=sys.stderr)
        return EXIT_FAIL
    except GlocsurError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if report is not None:
        if args.report == "json":
            sys.stdout.write(emit_json(report))
        else:
            report.wall_time = time.perf_counter() - t
            sys.stdout.write(_render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
