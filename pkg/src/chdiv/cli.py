"""Command-line front end.

Exit codes: 0 success, 2 mathematically negative result (no solution /
not satisfied), 1 bad input or parse error.
"""

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import core, dp, greedy, lp, oracle, tucker, fixp
from .core import (Instance, Valuation, Block, rat, rat_str,
                   instance_to_obj, instance_from_obj, solution_to_obj,
                   solution_from_obj, verify, disjoint_copies)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        sys.exit(1)


def _frac(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational: %r" % text)


def _load_json(path):
    with open(path) as fp:
        return json.load(fp)


def _write_json(obj, path):
    if path is None:
        return
    with open(path, "w") as fp:
        json.dump(obj, fp, indent=1, sort_keys=True)
        fp.write("\n")


def _emit(report, args):
    if getattr(args, "json", False):
        json.dump(report, sys.stdout, indent=1, sort_keys=True)
        print()
    else:
        for k in sorted(report):
            print("%s: %s" % (k, report[k]))


def _report_solution(inst, sol, eps, t0):
    rep = verify(inst, sol, eps)
    return {
        "cuts": [rat_str(c) for c in sol.cuts],
        "labels": list(sol.labels),
        "max_discrepancy": rat_str(rep.max_discrepancy),
        "satisfied": rep.satisfied,
        "runtime_s": round(time.time() - t0, 3),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args):
    t0 = time.time()
    inst = instance_from_obj(_load_json(args.infile))
    if args.algo == "greedy":
        sol = greedy.solve_half(inst)
        eps = args.eps if args.eps is not None else Fraction(1, 2)
    elif args.algo == "dp":
        if args.eps is None:
            print("solve --algo dp requires --eps", file=sys.stderr)
            return 1
        res = dp.dp_solve(inst, args.eps, m=args.grid)
        if not res.feasible:
            _emit({"feasible": False, "states_visited": res.states_visited,
                   "m": res.m}, args)
            return 2
        sol, eps = res.solution, args.eps
    elif args.algo == "lp":
        sol = lp.solve_with_budget(inst, args.ell)
        if sol is None:
            _emit({"feasible": False}, args)
            return 2
        eps = args.eps if args.eps is not None else Fraction(0)
    else:
        print("unknown algorithm %r" % args.algo, file=sys.stderr)
        return 1
    report = _report_solution(inst, sol, eps, t0)
    _write_json(solution_to_obj(sol), args.out)
    if args.csv:
        print("cuts,max_discrepancy,runtime_s")
        print("%d,%s,%s" % (len(sol.cuts), report["max_discrepancy"],
                            report["runtime_s"]))
    else:
        _emit(report, args)
    return 0


def cmd_verify(args):
    inst = instance_from_obj(_load_json(args.infile))
    sol = solution_from_obj(_load_json(args.solution))
    rep = verify(inst, sol, args.eps)
    if args.csv:
        print("agent,discrepancy")
        for i, d in enumerate(rep.per_agent_discrepancy):
            print("%d,%s" % (i, rat_str(d)))
    else:
        _emit({"satisfied": rep.satisfied,
               "max_discrepancy": rat_str(rep.max_discrepancy),
               "per_agent": [rat_str(d) for d in rep.per_agent_discrepancy]},
              args)
    return 0 if rep.satisfied else 2


def cmd_refine(args):
    inst = instance_from_obj(_load_json(args.infile))
    sol = solution_from_obj(_load_json(args.solution))
    refined, z = lp.refine_exact(inst, sol)
    _write_json(solution_to_obj(refined), args.out)
    _emit({"z_star": rat_str(z), "exact": z == 0,
           "cuts": [rat_str(c) for c in refined.cuts]}, args)
    return 0 if z == 0 else 2


def _load_labeling(args):
    if args.circuit is not None:
        with open(args.circuit) as fp:
            circ = tucker.BoolCircuit.parse(fp.read())
        return tucker.TuckerLabeling(args.n, circ)
    return tucker.demo_labeling(args.n)


def cmd_compile_tucker(args):
    lab = _load_labeling(args)
    compiled = tucker.compile_tucker(lab, args.eps)
    _write_json(instance_to_obj(compiled.instance), args.out)
    layout_obj = compiled.layout.to_json_obj()
    layout_obj["eps"] = rat_str(compiled.params.eps)
    _write_json(layout_obj, args.layout)
    _emit({"agents": compiled.instance.n,
           "domain_right": rat_str(compiled.instance.domain_right),
           "simulators": compiled.layout.p,
           "region_length": compiled.layout.q,
           "mul_chain_length": compiled.params.kmul}, args)
    return 0


def cmd_decode_tucker(args):
    lab = _load_labeling(args)
    compiled = tucker.compile_tucker(lab, args.eps)
    sol = solution_from_obj(_load_json(args.solution))
    try:
        u, w = tucker.decode_solution(compiled, sol)
    except tucker.DecodeFailure as e:
        _emit({"decoded": False, "reason": str(e)}, args)
        return 2
    _emit({"decoded": True, "u": list(u), "w": list(w),
           "label_u": lab.evaluate(u), "label_w": lab.evaluate(w)}, args)
    return 0


def cmd_compile_fixp(args):
    with open(args.circuit) as fp:
        circ = fixp.TruncCircuit.parse(fp.read())
    compiled = fixp.compile_fixp(circ)
    _write_json(instance_to_obj(compiled.instance), args.out)
    _emit({"agents": compiled.instance.n,
           "domain_right": rat_str(compiled.instance.domain_right)}, args)
    return 0


def cmd_decode_fixp(args):
    with open(args.circuit) as fp:
        circ = fixp.TruncCircuit.parse(fp.read())
    compiled = fixp.compile_fixp(circ)
    sol = solution_from_obj(_load_json(args.solution))
    try:
        x = fixp.decode_fixed_point(compiled, sol)
    except fixp.KDivDecodeFailure as e:
        _emit({"decoded": False, "reason": str(e)}, args)
        return 2
    fx = fixp.eval_trunc(circ, x)
    _emit({"decoded": True, "x": [rat_str(v) for v in x],
           "F_x": [rat_str(v) for v in fx],
           "fixed_point": fx == tuple(x)}, args)
    return 0


def cmd_oracle(args):
    inst = instance_from_obj(_load_json(args.infile))
    cfg = oracle.GridSearchConfig(args.grid, args.max_cuts)
    try:
        sol = oracle.brute_force(inst, args.eps, cfg, jobs=args.jobs)
    except oracle.WorkLimitExceeded as e:
        print("oracle: %s" % e, file=sys.stderr)
        return 1
    if sol is None:
        _emit({"feasible": False}, args)
        return 2
    _write_json(solution_to_obj(sol), args.out)
    _emit(_report_solution(inst, sol, args.eps, time.time()), args)
    return 0


def _gen_single_block(rng, n, M):
    agents = []
    for _ in range(n):
        a = rng.randrange(0, M)
        b = rng.randrange(a + 1, M + 1)
        left, right = Fraction(a, M), Fraction(b, M)
        agents.append(Valuation([Block(left, right, 1 / (right - left))]))
    return Instance(agents, k=2)


def _gen_dblock(rng, n, d, M):
    agents = []
    for _ in range(n):
        j = rng.randrange(1, d + 1)
        pts = sorted(rng.sample(range(M + 1), 2 * j))
        blocks = []
        total = Fraction(0)
        for t in range(j):
            l, r = Fraction(pts[2 * t], M), Fraction(pts[2 * t + 1], M)
            if r > l:
                blocks.append((l, r))
                total += r - l
        if not blocks:
            blocks, total = [(Fraction(0), Fraction(1))], Fraction(1)
        h = 1 / total
        agents.append(Valuation([Block(l, r, h) for l, r in blocks]))
    return Instance(agents, k=2)


def cmd_gen(args):
    rng = random.Random(args.seed)
    if args.kind == "random-single-block":
        inst = _gen_single_block(rng, args.n, args.grid)
    elif args.kind == "random-dblock":
        inst = _gen_dblock(rng, args.n, args.d, args.grid)
    elif args.kind == "copies":
        base = instance_from_obj(_load_json(args.infile))
        inst = disjoint_copies(base, args.c)
    elif args.kind == "tucker-demo":
        eps = args.eps
        if eps is None:
            eps = Fraction(1, (2 ** 14) * args.n * args.n)
        lab = tucker.demo_labeling(args.n)
        inst = tucker.compile_tucker(lab, eps).instance
    else:
        print("unknown kind %r" % args.kind, file=sys.stderr)
        return 1
    _write_json(instance_to_obj(inst), args.out)
    _emit({"agents": inst.n, "k": inst.k,
           "domain_right": rat_str(inst.domain_right)}, args)
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="chdiv",
                description="exact consensus division toolbox")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, eps=True, infile=True):
        sp.add_argument("--json", action="store_true",
                        help="machine-readable report on stdout")
        sp.add_argument("--csv", action="store_true",
                        help="plot-ready CSV on stdout")
        sp.add_argument("--out", help="output file (JSON)")
        sp.add_argument("--jobs", type=int,
                        default=int(os.environ.get("CONSENSUS_CUT_JOBS",
                                                   "1")))
        sp.add_argument("--seed", type=int, default=0)
        if eps:
            sp.add_argument("--eps", type=_frac, default=None)
        if infile:
            sp.add_argument("--in", dest="infile", required=True)

    sp = sub.add_parser("solve", help="run a solver on an instance")
    common(sp)
    sp.add_argument("--algo", choices=["greedy", "dp", "lp"],
                    default="greedy")
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--grid", type=int, default=None,
                    help="dp cut grid resolution override")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="check a solution")
    common(sp)
    sp.add_argument("--solution", required=True)
    sp.set_defaults(func=cmd_verify, eps_required=True)

    sp = sub.add_parser("refine", help="exact refinement of an "
                        "approximate solution")
    common(sp)
    sp.add_argument("--solution", required=True)
    sp.set_defaults(func=cmd_refine)

    sp = sub.add_parser("compile-tucker",
                        help="labeling circuit to halving instance")
    common(sp, infile=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--circuit", help="labeling circuit file "
                    "(defaults to the built-in demo labeling)")
    sp.add_argument("--layout", help="layout metadata output (JSON)")
    sp.set_defaults(func=cmd_compile_tucker)

    sp = sub.add_parser("decode-tucker",
                        help="solution back to a labeling solution pair")
    common(sp, infile=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--circuit")
    sp.add_argument("--solution", required=True)
    sp.set_defaults(func=cmd_decode_tucker)

    sp = sub.add_parser("compile-fixp",
                        help="fixed-point circuit to 1/3-division "
                        "instance")
    common(sp, eps=False, infile=False)
    sp.add_argument("--circuit", required=True)
    sp.set_defaults(func=cmd_compile_fixp)

    sp = sub.add_parser("decode-fixp",
                        help="exact solution back to a fixed point")
    common(sp, eps=False, infile=False)
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--solution", required=True)
    sp.set_defaults(func=cmd_decode_fixp)

    sp = sub.add_parser("oracle", help="brute-force grid search")
    common(sp)
    sp.add_argument("--grid", type=int, required=True)
    sp.add_argument("--max-cuts", type=int, required=True)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("gen", help="instance generators")
    common(sp, infile=False)
    sp.add_argument("--kind", required=True,
                    choices=["random-single-block", "random-dblock",
                             "copies", "tucker-demo"])
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--c", type=int, default=1)
    sp.add_argument("--grid", type=int, default=64,
                    help="endpoint grid denominator")
    sp.add_argument("--in", dest="infile", help="base instance for "
                    "kind=copies")
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.eps is None:
        print("verify requires --eps", file=sys.stderr)
        return 1
    if args.command == "solve" and args.algo == "dp" and args.eps is None:
        print("solve --algo dp requires --eps", file=sys.stderr)
        return 1
    if args.command == "oracle" and args.eps is None:
        print("oracle requires --eps", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as e:
        print("%s: %s" % (args.command, e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
