"""Command-line front end.

Exit codes: 0 when the checked property holds (or the command succeeded),
1 when it fails (the report carries a witness), 2 on input or resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import bruteforce, choice, fileformat, metastable, reduction, stability
from .core import augment_autarkic, prune_null_contracts, validate
from .errors import ContractNetError, TheoremViolation

OK, FAIL, ERROR = 0, 1, 2


def _ids(s):
    return sorted(s)


def _menu(m):
    return sorted(m)


def _witness(w):
    if w is None:
        return None
    return {"dominator": w.dominator, "per_agent": w.as_dict()}


def _working(instance, cap):
    base, pruned = prune_null_contracts(instance, cap)
    return augment_autarkic(metastable.linearize_equipment(base, cap)), pruned


def cmd_validate(args):
    violations = validate(fileformat.load_instance(args.instance))
    return (OK if not violations else ERROR), {"valid": not violations, "violations": violations}


def cmd_choose(args):
    inst = fileformat.load_instance(args.instance)
    if args.agent not in inst.equipment:
        raise ContractNetError(f"unknown agent {args.agent!r}")
    menu = fileformat.parse_system(args.menu)
    return OK, {"agent": args.agent, "menu": _menu(menu), "choice": _menu(choice.choose(inst.equipment[args.agent], menu))}


def cmd_check_plott(args):
    spec = fileformat.load_spec(args.spec)
    pi = choice.is_path_independent(spec, args.cap)
    her = choice.check_heredity(spec, args.cap)
    out = choice.check_outcast(spec, args.cap)
    report = {
        "path_independent": pi.holds,
        "witness": None if pi.holds else [_menu(pi.witness[0]), _menu(pi.witness[1])],
        "heredity": her.holds,
        "outcast": out.holds,
        "null_set": _menu(choice.largest_null_set(spec, args.cap)) if pi.holds else None,
    }
    return (OK if pi.holds else FAIL), report


def cmd_decompose(args):
    spec = fileformat.load_spec(args.spec)
    parts = choice.am_decompose(spec, args.cap)
    return OK, {"parts": [list(p.ranking) for p in parts]}


def cmd_reduce(args):
    inst = fileformat.load_instance(args.instance)
    reduced, smap = reduction.reduce_to_weak_orders(inst, args.cap)
    report = {"splits": len(smap.steps), "agents": list(reduced.agents), "contracts": list(reduced.contract_ids)}
    if args.out:
        fileformat.save_instance(reduced, args.out)
        report["instance_file"] = str(args.out)
    else:
        report["instance"] = fileformat.instance_to_json(reduced)
    if args.map_out:
        Path(args.map_out).write_text(fileformat.dumps(fileformat.splitmap_to_json(smap)))
        report["split_map_file"] = str(args.map_out)
    else:
        report["split_map"] = fileformat.splitmap_to_json(smap)
    return OK, report


def cmd_stable(args):
    inst = fileformat.load_instance(args.instance)
    if args.enumerate:
        systems = stability.enumerate_stable(inst, args.cap if args.cap_set else stability.DEFAULT_CAP)
        return OK, {"count": len(systems), "systems": [_ids(s) for s in systems]}
    system = inst.system(fileformat.parse_system(args.check))
    v = stability.is_stable(inst, system)
    report = {
        "system": _ids(system),
        "stable": v.stable,
        "s0_violations": [{"agent": a, "choice": _ids(c)} for a, c in v.s0_violations],
        "blocking": v.blocking,
    }
    return (OK if v.stable else FAIL), report


def cmd_metastable(args):
    inst = fileformat.load_instance(args.instance)
    if args.solve:
        sol = metastable.solve_metastable_detailed(inst, args.cap)
        return OK, {
            "system": _ids(sol.system),
            "compromise": dict(sol.compromise.values),
            "pruned": _ids(sol.pruned),
            "metastable": True,
        }
    if args.minimize is not None:
        return _minimize(inst, args.minimize)
    system = inst.system(fileformat.parse_system(args.check))
    v = metastable.is_metastable(inst, system, exclude_members=args.exclude_members)
    return (OK if v.holds else FAIL), {"system": _ids(system), "metastable": v.holds, "witness": _witness(v.witness)}


def _minimize(inst, text):
    system = inst.system(fileformat.parse_system(text))
    out = metastable.minimize(inst, system)
    return OK, {"system": _ids(system), "minimized": _ids(out), "removed": _ids(system - out)}


def cmd_minimize(args):
    return _minimize(fileformat.load_instance(args.instance), args.system)


def cmd_compromise(args):
    inst = fileformat.load_instance(args.instance)
    working, pruned = _working(inst, args.cap)
    if args.all:
        vectors = [dict(x.values) for x in metastable.iter_compromises(working)]
        return OK, {"agents": list(working.agents), "count": len(vectors), "compromises": vectors}
    x = metastable.find_compromise(working)
    full = metastable.system_from_compromise(working, x)
    return OK, {
        "compromise": dict(x.values),
        "threshold_system": _ids(full),
        "dummies": _ids(c.id for c in working.contracts if c.autarkic_dummy),
    }


def cmd_oracle(args):
    inst = fileformat.load_instance(args.instance)
    if args.what == "stable":
        systems = bruteforce.enumerate_stable_oracle(inst)
        return OK, {"count": len(systems), "systems": [_ids(s) for s in systems]}
    if args.what == "metastable":
        systems = bruteforce.enumerate_metastable(inst)
        report = {"count": len(systems), "systems": [_ids(s) for s in systems]}
        if args.check:
            member = inst.system(fileformat.parse_system(args.check)) in systems
            report["member"] = member
            return (OK if member else FAIL), report
        return OK, report
    working, _ = _working(inst, args.cap)
    vectors = bruteforce.enumerate_compromises(working)
    return (OK if vectors else FAIL), {"agents": list(working.agents), "count": len(vectors), "compromises": [list(v) for v in vectors]}


def cmd_generate(args):
    cfg = bruteforce.GeneratorConfig(
        seed=args.seed,
        agents=tuple(args.agents),
        contracts=tuple(args.contracts),
        max_participants=args.max_participants,
        autarkic=not args.no_autarkic,
        union_agents=args.union_agents,
    )
    inst = bruteforce.generate(cfg)
    text = fileformat.dumps(fileformat.instance_to_json(inst))
    if args.out:
        Path(args.out).write_text(text)
        return OK, {"instance_file": str(args.out), "agents": len(inst.agents), "contracts": len(inst.contracts)}
    return OK, {"instance": fileformat.instance_to_json(inst)}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--cap", type=int, default=None, help="size cap for exhaustive scans")

    p = argparse.ArgumentParser(prog="contractnet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check instance invariants")
    s.add_argument("instance")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("choose", parents=[common], help="evaluate one agent's choice on a menu")
    s.add_argument("instance")
    s.add_argument("--agent", required=True)
    s.add_argument("--menu", required=True, help="JSON array of contract ids, or a file holding one")
    s.set_defaults(func=cmd_choose)

    s = sub.add_parser("check-plott", parents=[common], help="decide path independence of a spec file")
    s.add_argument("spec")
    s.set_defaults(func=cmd_check_plott)

    s = sub.add_parser("decompose", parents=[common], help="write a spec as a union of linear orders")
    s.add_argument("spec")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("reduce", parents=[common], help="split agents down to weak-order equipment")
    s.add_argument("instance")
    s.add_argument("--out", help="write the reduced instance here")
    s.add_argument("--map-out", help="write the split map here")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("stable", parents=[common], help="check or enumerate stable systems")
    s.add_argument("instance")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--check", metavar="SYSTEM")
    g.add_argument("--enumerate", action="store_true")
    s.set_defaults(func=cmd_stable)

    s = sub.add_parser("metastable", parents=[common], help="solve, check or minimize meta-stable systems")
    s.add_argument("instance")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--solve", action="store_true")
    g.add_argument("--check", metavar="SYSTEM")
    g.add_argument("--minimize", metavar="SYSTEM")
    s.add_argument("--exclude-members", action="store_true", help="contracts already in the system cannot dominate it")
    s.set_defaults(func=cmd_metastable)

    s = sub.add_parser("compromise", parents=[common], help="compromise vector of the linearized, augmented instance")
    s.add_argument("instance")
    s.add_argument("--all", action="store_true", help="list every grid compromise")
    s.set_defaults(func=cmd_compromise)

    s = sub.add_parser("minimize", parents=[common], help="shrink a meta-stable system to a minimal one")
    s.add_argument("instance")
    s.add_argument("system")
    s.set_defaults(func=cmd_minimize)

    s = sub.add_parser("oracle", parents=[common], help="brute-force enumerations")
    s.add_argument("what", choices=["stable", "metastable", "compromise"])
    s.add_argument("instance")
    s.add_argument("--check", metavar="SYSTEM", help="with 'metastable': test membership")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("generate", parents=[common], help="emit a seeded random instance")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--agents", type=int, nargs=2, default=[2, 4], metavar=("MIN", "MAX"))
    s.add_argument("--contracts", type=int, nargs=2, default=[2, 7], metavar=("MIN", "MAX"))
    s.add_argument("--max-participants", type=int, default=3)
    s.add_argument("--union-agents", type=int, default=0)
    s.add_argument("--no-autarkic", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_generate)
    return p


def _human(report) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, (dict, list)) and len(json.dumps(value)) > 100:
            lines.append(f"{key}:")
            lines.extend("  " + ln for ln in json.dumps(value, indent=2).splitlines())
        else:
            lines.append(f"{key}: {json.dumps(value)}")
    return "\n".join(lines) + "\n"


def run(argv=None, out=None, err=None):
    """Run one command; returns ``(exit_code, report)`` and prints the report."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    args.cap_set = args.cap is not None
    if args.cap is None:
        args.cap = choice.DEFAULT_CAP
    start = time.perf_counter()
    report = {"command": args.command}
    try:
        code, body = args.func(args)
    except TheoremViolation as exc:
        code, body = FAIL, {"error": f"theorem violation: {exc}"}
    except ContractNetError as exc:
        code, body = ERROR, {"error": str(exc)}
    report.update(body)
    report["elapsed_s"] = round(time.perf_counter() - start, 6)
    if args.command == "generate" and not args.json and "instance" in report:
        out.write(fileformat.dumps(report["instance"]))
    elif args.json:
        out.write(fileformat.dumps(report))
    else:
        (err if code == ERROR else out).write(_human(report))
    return code, report


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
