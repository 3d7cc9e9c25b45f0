"""Command-line front end tying the verifiers together.

Exit codes: 0 all checks pass, 1 at least one verified violation,
2 input/parse/configuration error.
"""

from __future__ import annotations

import argparse
import sys

from . import core, diskbase, finite, topology, urysohn
from .report import build_report, make_finding, render_report

DEFAULT_SEED = 0xC0FFEE
DEFAULT_SAMPLES = 10000


class InputError(Exception):
    """Bad input file or configuration; maps to exit code 2."""


def _parse_point(text: str) -> core.DiskPoint:
    try:
        re_s, im_s = text.split(",")
        return core.DiskPoint(float(re_s), float(im_s))
    except ValueError as exc:
        raise InputError(f"bad point {text!r}: {exc}") from exc


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_gyrogroup(path: str) -> finite.FiniteGyrogroup:
    try:
        table = finite.load_cayley_table(_read_file(path))
        return finite.check_axioms(table)
    except finite.TableParseError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except finite.AxiomError as exc:
        raise InputError(f"{path}: table is not a gyrogroup: {exc}") from exc


def cmd_check_table(args) -> tuple[dict, list[str]]:
    text = _read_file(args.file)
    try:
        table = finite.load_cayley_table(text)
    except finite.TableParseError as exc:
        raise InputError(f"{args.file}: {exc}") from exc

    config = {"file": args.file, "subgyrogroups": args.subgyrogroups}
    findings = []
    try:
        gyro = finite.check_axioms(table)
    except finite.AxiomError as exc:
        for axiom in ("G1", "G2", "G3", "G4"):
            if axiom == exc.axiom:
                findings.append(make_finding(axiom, False, witness=exc.witness))
                break
            findings.append(make_finding(axiom, True))
        return build_report("check-table", config, findings), []
    findings = [make_finding(axiom, True) for axiom in ("G1", "G2", "G3", "G4")]

    if args.subgyrogroups:
        infos = finite.find_subgyrogroups(gyro)
        bad = [i for i in infos if i.normal and not i.gyration_invariant]
        findings.append(make_finding(
            "subgyrogroup_gyration_invariance",
            not bad,
            witness={
                "subgyrogroups": [
                    {"members": sorted(i.members), "normal": i.normal}
                    for i in infos
                ],
                **({"violations": [sorted(i.members) for i in bad]} if bad else {}),
            },
        ))
    return build_report("check-table", config, findings), []


def cmd_identities(args) -> tuple[dict, list[str]]:
    if args.table:
        # G1/G2 are needed to build the structure at all; G3/G4 defects
        # surface as identity findings, not input errors
        try:
            table = finite.load_cayley_table(_read_file(args.table))
            gyro = finite.unchecked_gyrogroup(table)
        except (finite.TableParseError, finite.AxiomError) as exc:
            raise InputError(f"{args.table}: {exc}") from exc
        ctx: core.GyroContext = core.FiniteContext(gyro)
    else:
        ctx = core.MobiusContext()
    rep = core.verify_gyro_identities(ctx, args.samples, seed=args.seed, tol=args.tol)
    config = {
        "table": args.table, "samples": args.samples,
        "seed": args.seed, "tol": args.tol,
    }
    return build_report("identities", config, rep.to_findings()), []


def cmd_topology(args) -> tuple[dict, list[str]]:
    gyro = _load_gyrogroup(args.file)
    try:
        fam = topology.load_family(_read_file(args.base), gyro.order)
        conditions = topology.check_conditions(gyro, fam, mode=args.mode)
    except ValueError as exc:
        raise InputError(f"{args.base}: {exc}") from exc
    try:
        topo = topology.generate_topology(gyro, fam)
    except topology.CarrierTooLargeError as exc:
        raise InputError(str(exc)) from exc

    findings = conditions.to_findings()
    notes = list(conditions.notes)
    valid, witness = topo.is_topology()
    findings.append(make_finding("topology_is_valid", valid, witness=witness))
    ok, witness = topology.is_neighborhood_base(gyro, fam, topo)
    findings.append(make_finding("base_generates_topology", ok, witness=witness))
    if valid:
        props = topology.check_topology_properties(gyro, topo)
        findings.extend(props.to_findings())
    else:
        notes.append("property checks skipped: the generated open-set family "
                     "is not a topology")
    findings.append(make_finding(
        "open_set_count", True, witness={"count": len(topo.opens)}))
    config = {"file": args.file, "base": args.base, "mode": args.mode}
    return build_report("topology", config, findings), notes


def cmd_mobius_verify(args) -> tuple[dict, list[str]]:
    try:
        params = diskbase.WitnessParams(
            n=args.n,
            x=_parse_point(args.x) if args.x else None,
            v=_parse_point(args.v) if args.v else None,
            r=args.r,
            a=_parse_point(args.a) if args.a else None,
            m=args.m,
        )
        rep = diskbase.sample_verify(
            args.condition, params, args.samples, seed=args.seed,
            tol=args.tol, witness=args.witness, collect=args.csv is not None,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            diskbase.write_violations_csv(rep, fh)
    config = {
        "condition": args.condition, "n": args.n, "x": args.x, "v": args.v,
        "r": args.r, "a": args.a, "m": args.m, "samples": args.samples,
        "seed": args.seed, "tol": args.tol, "witness": args.witness,
    }
    return build_report("mobius-verify", config, [rep.to_finding()]), []


def cmd_urysohn(args) -> tuple[dict, list[str]]:
    if not 0.0 < args.radius < 1.0:
        raise InputError(f"--radius must lie in (0, 1), got {args.radius}")
    if args.depth < 1:
        raise InputError(f"--depth must be >= 1, got {args.depth}")
    sched = urysohn.build_schedule(diskbase.DiskBall(args.radius), args.depth)
    fam = urysohn.build_vsets(sched, args.depth)
    findings = [make_finding(
        "schedule_chain", True,
        witness={"first_radius": sched.level_radius(0), "depth": args.depth},
    )]
    findings.extend(verify_facts_findings(fam))

    grid = [i * 0.05 for i in range(20)]
    step = 2.0 ** -args.depth
    worst = max(
        abs(urysohn.urysohn_eval(fam, ay) - urysohn.urysohn_oracle(args.radius, ay))
        for ay in grid
    )
    findings.append(make_finding(
        "oracle_agreement", worst <= step,
        witness={"grid_points": len(grid), "bound": step}, margin=worst,
    ))
    at_zero = urysohn.urysohn_eval(fam, 0.0)
    findings.append(make_finding(
        "identity_value", at_zero == step,
        witness={"depth_value": at_zero, "limit": 0.0},
    ))
    closure_radius = sched.level_radius(0)
    outside = [closure_radius + (1.0 - closure_radius) * f for f in (0.25, 0.5, 0.9)]
    findings.append(make_finding(
        "outside_value_one",
        all(urysohn.urysohn_eval(fam, ay) == 1.0 for ay in outside),
        witness={"cl_V1_radius": closure_radius},
    ))
    if args.eval is not None:
        val = urysohn.urysohn_eval(fam, args.eval)
        findings.append(make_finding(
            "point_evaluation", True,
            witness={"abs_y": args.eval, "value": val,
                     "oracle": urysohn.urysohn_oracle(args.radius, args.eval)},
        ))
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            urysohn.export_profile_csv(fam, fh)
    config = {"radius": args.radius, "depth": args.depth,
              "eval": args.eval, "csv": args.csv}
    return build_report("urysohn", config, findings), []


def verify_facts_findings(fam) -> list[dict]:
    return urysohn.verify_vset_facts(fam).to_findings()


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gyrotop",
        description="Verification toolkit for gyrogroups and their topologies",
    )
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-table", help="validate a Cayley table against G1-G4")
    p.add_argument("file")
    p.add_argument("--subgyrogroups", action="store_true",
                   help="also enumerate subgyrogroups and their normality")

    p = sub.add_parser("identities", help="run the algebraic identity suite")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=core.DEFAULT_TOL)
    p.add_argument("--table", help="finite carrier (Cayley table file); default disk")

    p = sub.add_parser("topology", help="check a neighborhood family over a table")
    p.add_argument("file")
    p.add_argument("--base", required=True, help="family JSON file")
    p.add_argument("--mode", choices=("para", "topo"), default="para")

    mob = sub.add_parser("mobius", help="disk neighborhood-base certification")
    mobsub = mob.add_subparsers(dest="mobius_command", required=True)
    p = mobsub.add_parser("verify", help="falsification-test one condition")
    p.add_argument("--condition", required=True,
                   choices=diskbase.CONDITIONS)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--x", help="point RE,IM")
    p.add_argument("--v", help="point RE,IM")
    p.add_argument("--a", help="point RE,IM")
    p.add_argument("--r", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=diskbase.CONTAINMENT_TOL)
    p.add_argument("--witness", type=int,
                   help="override the computed witness index")
    p.add_argument("--csv", help="dump violating samples here")

    p = sub.add_parser("urysohn", help="dyadic schedule and separating function")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--eval", type=float, help="evaluate f at this modulus")
    p.add_argument("--csv", help="write the radial profile here")

    return parser


def dispatch(argv) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    handlers = {
        "check-table": cmd_check_table,
        "identities": cmd_identities,
        "topology": cmd_topology,
        "mobius": cmd_mobius_verify,
        "urysohn": cmd_urysohn,
    }
    try:
        report, notes = handlers[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report["notes"] = notes or report.get("notes", [])
    _write_output(render_report(report), args.out)
    return 0 if report["overall"] == "pass" else 1


def main(argv=None) -> int:
    return dispatch(argv if argv is not None else sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
