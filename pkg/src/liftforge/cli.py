"""Command-line entry point: ``liftforge <noun> <verb> [options]``.

Exit status: 0 success, 1 verification failure, 2 usage or parse error,
3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bitsets import elements_of, fmt
from .core import CapacityError, Matroid, MatroidError, check_rank_axioms, uniform
from .derived import derived_matroid, free_lift_from_derived, representable_rank_k_N
from .dual import duality_bridge, hyperplanes, on_hyperplanes, project, satisfies_dual_star
from .gain import (GainGraph, balanced_lift, class_membership, is_balanced, phi, projective_lift,
                   tilde_relation)
from .groups import AbelianGroup
from .lab import conjectured_family, conjectured_hyperplane_family, search_circuit_matroids
from .lift import (CircuitSpaceMatroid, graphic_on_pairs, is_linear_class, lift, linear_class_lift, rank3_N,
                   satisfies_star, uniform_N)
from .specfile import SpecError, parse_group, parse_matroid, show_dict, show_lines

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class Failure(Exception):
    """A check ran and did not pass."""


class Output:
    """Collects text lines and a JSON payload; exactly one is printed."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict = {}

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def put(self, **kw) -> None:
        self.data.update(kw)

    def emit(self, stream) -> None:
        if self.as_json:
            print(json.dumps(self.data, sort_keys=True, indent=2, default=str), file=stream)
        else:
            for line in self.lines:
                print(line, file=stream)


def _verdict(out: Output, key: str, v, label: str | None = None) -> bool:
    out.say(f"{label or key}: {v}")
    out.put(**{key: {"ok": bool(v), "message": v.message,
                     "witness": None if v.witness is None else repr(v.witness)}})
    return bool(v)


# ---------------------------------------------------------------------------
# Argument helpers


def _circuit_N(M: Matroid, text: str) -> CircuitSpaceMatroid:
    """``pairs`` (graphic on 2-element circuits), ``rank3``, ``uniform:<r>``, ``zero``, ``derived``
    (M must be linear), or a matroid description on the circuit indices."""
    key = text.strip()
    if key == "pairs":
        return graphic_on_pairs(M)
    if key == "rank3":
        return rank3_N(M)
    if key == "zero":
        return uniform_N(M, 0)
    if key.startswith("uniform:"):
        return uniform_N(M, int(key.split(":", 1)[1]))
    if key == "derived":
        if not hasattr(M, "matrix"):
            raise SpecError("derived N needs a linear matroid")
        return derived_matroid(M.matrix).space
    N = parse_matroid(text)
    return CircuitSpaceMatroid(M.circuits(), N)


def _hyperplane_N(K: Matroid, text: str):
    key = text.strip()
    if key.startswith("uniform:"):
        return on_hyperplanes(K, uniform(int(key.split(":", 1)[1]), len(hyperplanes(K))))
    if key == "zero":
        return on_hyperplanes(K, uniform(0, len(hyperplanes(K))))
    return on_hyperplanes(K, parse_matroid(text))


def _rep(text: str):
    M = parse_matroid(text)
    if not hasattr(M, "matrix"):
        raise SpecError("--rep needs a linear matroid description")
    return M.matrix


def _summary(out: Output, M: Matroid) -> None:
    for line in show_lines(M):
        out.say(line)
    out.put(matroid=show_dict(M))


# ---------------------------------------------------------------------------
# Commands


def cmd_show(args, out: Output) -> None:
    _summary(out, parse_matroid(args.spec))


def cmd_verify_axioms(args, out: Output) -> None:
    M = parse_matroid(args.m)
    if not _verdict(out, "axioms", check_rank_axioms(M), f"rank axioms for {M.name}"):
        raise Failure()


def cmd_lift_construct(args, out: Output) -> None:
    M = parse_matroid(args.m)
    N = _circuit_N(M, args.n)
    if not args.no_check:
        v = satisfies_star(M, N, max_circuits=args.max_circuits)
        _verdict(out, "star", v, "star condition")
        if not v:
            raise Failure()
    L = lift(M, N, check=False)
    out.say(f"r(M) = {M.full_rank}, r(N) = {N.N.full_rank}, r(M^N) = {L.full_rank}")
    out.put(rank_M=M.full_rank, rank_N=N.N.full_rank)
    _summary(out, L)


def cmd_lift_verify_star(args, out: Output) -> None:
    M = parse_matroid(args.m)
    if not _verdict(out, "star", satisfies_star(M, _circuit_N(M, args.n), max_circuits=args.max_circuits),
                    "star condition"):
        raise Failure()


def cmd_lift_linear_class(args, out: Output) -> None:
    M = parse_matroid(args.m)
    fam = M.circuits()
    if args.cls == "all":
        L = (1 << len(fam)) - 1
    elif args.cls == "none":
        L = 0
    else:
        L = 0
        for tok in filter(None, args.cls.split(",")):
            i = int(tok)
            if not 0 <= i < len(fam):
                raise SpecError(f"circuit index {i} out of range 0..{len(fam) - 1}")
            L |= 1 << i
    v = is_linear_class(M, L, fam)
    if not _verdict(out, "linear_class", v, "linear class"):
        raise Failure()
    _summary(out, linear_class_lift(M, L))


def _graph(args) -> GainGraph:
    return GainGraph(args.n, parse_group(args.group))


def cmd_gain_build(args, out: Output) -> None:
    G = _graph(args)
    out.say(f"K_{G.n}^{G.group.name}: {G.size} edges, group order {G.group.order}")
    for e, (i, j, a) in enumerate(G.edges):
        out.say(f"  {e}: {i + 1}->{j + 1} label {G.group.label(a)}")
    out.put(n=G.n, group=G.group.name, edges=[[i + 1, j + 1, G.group.label(a)] for i, j, a in G.edges])


def cmd_gain_cycles(args, out: Output) -> None:
    G = _graph(args)
    rows = []
    for C in G.cycles():
        vals = sorted(phi(C))
        bal = is_balanced(C)
        out.say(f"{fmt(C.edges)} {C.label()} phi={{{','.join(G.group.label(v) for v in vals)}}} "
                f"{'balanced' if bal else 'unbalanced'}")
        rows.append({"edges": elements_of(C.edges), "phi": [G.group.label(v) for v in vals], "balanced": bal})
    nb = sum(r["balanced"] for r in rows)
    out.say(f"{len(rows)} cycles, {nb} balanced")
    out.put(cycles=rows, balanced=nb)


def cmd_gain_lg(args, out: Output) -> None:
    LG = balanced_lift(args.n, parse_group(args.group))
    out.say("direct and linear-class constructions agree")
    _summary(out, LG)


def cmd_gain_pglift(args, out: Output) -> None:
    L = projective_lift(args.n, args.p, args.j, args.i)
    out.say(f"rank-{args.i} lift of M(K_{args.n}^Z{args.p}^{args.j}); cycle-circuits are the balanced cycles")
    _summary(out, L)


def cmd_gain_diagnose(args, out: Output) -> None:
    G = _graph(args)
    if args.m == "lg":
        M = balanced_lift(G.n, G.group)
    elif args.m.startswith("pglift:"):
        grp = G.group
        if not isinstance(grp, AbelianGroup) or len(set(grp.orders)) != 1:
            raise SpecError("pglift needs an elementary abelian group")
        M = projective_lift(G.n, grp.orders[0], len(grp.orders), int(args.m.split(":", 1)[1]))
    else:
        M = parse_matroid(args.m)
    v = class_membership(M, G)
    ok = _verdict(out, "membership", v, "class membership")
    if not ok:
        raise Failure()
    rep = tilde_relation(M, G)
    for line in rep.lines(G):
        out.say(line)
    out.put(classes=[[G.group.label(a) for a in sorted(c)] for c in rep.classes], ok=rep.ok)
    if not rep.ok:
        raise Failure()


def cmd_derived_compute(args, out: Output) -> None:
    D = derived_matroid(_rep(args.rep))
    M = D.representation.matroid
    out.say(f"{M.name}: {len(D.vectors)} circuits, derived rank {D.rank} = corank {M.corank}")
    for C, v in zip(D.space.family, D.vectors):
        out.say(f"  {fmt(C)} -> {list(v)}")
    out.put(rank=D.rank, corank=M.corank,
            vectors=[{"circuit": elements_of(C), "vector": list(v)} for C, v in zip(D.space.family, D.vectors)])


def cmd_derived_prop62(args, out: Output) -> None:
    L = free_lift_from_derived(_rep(args.rep))
    out.say(f"lift by the derived matroid is free on {L.size} elements")
    out.put(free=True, size=L.size)


def cmd_derived_trunc(args, out: Output) -> None:
    S = representable_rank_k_N(_rep(args.rep), args.k)
    out.say(f"rank-{S.N.full_rank} truncation of the derived matroid satisfies the star condition")
    L = lift(S.base, S, check=False)
    _summary(out, L)


def cmd_project_construct(args, out: Output) -> None:
    K = parse_matroid(args.k)
    N = _hyperplane_N(K, args.n)
    v = satisfies_dual_star(K, N)
    _verdict(out, "dual_star", v, "dual star condition")
    if not v:
        raise Failure()
    P = project(K, N, check=False)
    out.say(f"r(K) = {K.full_rank}, r(N) = {N.N.full_rank}, r(K_N) = {P.full_rank}")
    _summary(out, P)


def cmd_project_verify_star(args, out: Output) -> None:
    K = parse_matroid(args.k)
    if not _verdict(out, "dual_star", satisfies_dual_star(K, _hyperplane_N(K, args.n)), "dual star condition"):
        raise Failure()


def cmd_project_bridge(args, out: Output) -> None:
    K = parse_matroid(args.k)
    if not _verdict(out, "bridge", duality_bridge(K, _hyperplane_N(K, args.n)), "duality bridge"):
        raise Failure()


def _lab_emit(rep, args, out: Output) -> None:
    for line in rep.lines():
        out.say(line)
    out.put(report=rep.as_dict())
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(rep.as_dict(), fh, sort_keys=True, indent=2)
    if rep.flag:
        raise Failure()


def cmd_lab_c73(args, out: Output) -> None:
    _lab_emit(conjectured_family(parse_matroid(args.m), parse_matroid(args.k), max_size=args.max_size), args, out)


def cmd_lab_c72(args, out: Output) -> None:
    _lab_emit(search_circuit_matroids(parse_matroid(args.m), parse_matroid(args.k)), args, out)


def cmd_lab_c82(args, out: Output) -> None:
    _lab_emit(conjectured_hyperplane_family(parse_matroid(args.k), parse_matroid(args.m), max_size=args.max_size),
              args, out)


def cmd_acceptance(args, out: Output) -> None:
    from .acceptance import run_suite

    outcomes = run_suite(args.filter, verbose=args.verbose, stream=sys.stdout)
    if not all(o.ok for o in outcomes):
        raise Failure()


# ---------------------------------------------------------------------------
# Parser


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the flags with suppressed defaults so a flag given before the noun survives
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--json", action="store_true", default=d(False), help="emit JSON instead of text")
    g.add_argument("--workers", type=int, default=d(1), help="worker cap (enumeration runs in one worker)")
    g.add_argument("--max-ground", type=int, default=d(None), help="lower the ground-size capacity")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = argparse.ArgumentParser(prog="liftforge", description="Lifts and projections of small matroids.",
                                parents=[_global_flags(suppress=False)])
    sub = p.add_subparsers(dest="noun", required=True)

    def verb(group, name, func, helptext):
        sp = group.add_parser(name, help=helptext, parents=[common])
        sp.set_defaults(func=func)
        return sp

    s = verb(sub, "show", cmd_show, "print a matroid")
    s.add_argument("spec")

    v = sub.add_parser("verify", parents=[common]).add_subparsers(dest="verb", required=True)
    s = verb(v, "axioms", cmd_verify_axioms, "check the rank axioms")
    s.add_argument("--m", required=True)

    lift_p = sub.add_parser("lift", parents=[common]).add_subparsers(dest="verb", required=True)
    s = verb(lift_p, "construct", cmd_lift_construct, "build M^N")
    s.add_argument("--m", required=True)
    s.add_argument("--n", required=True, help="pairs | rank3 | uniform:<r> | zero | derived | matroid description")
    s.add_argument("--no-check", action="store_true")
    s.add_argument("--max-circuits", type=int, default=None)
    s = verb(lift_p, "verify-star", cmd_lift_verify_star, "check the star condition")
    s.add_argument("--m", required=True)
    s.add_argument("--n", required=True)
    s.add_argument("--max-circuits", type=int, default=None)
    s = verb(lift_p, "brylawski", cmd_lift_linear_class, "elementary lift from a linear class")
    s.add_argument("--m", required=True)
    s.add_argument("--class", dest="cls", required=True, help="comma-separated circuit indices, all, or none")

    gain_p = sub.add_parser("gain", parents=[common]).add_subparsers(dest="verb", required=True)
    for name, func in (("build", cmd_gain_build), ("cycles", cmd_gain_cycles), ("lg", cmd_gain_lg)):
        s = verb(gain_p, name, func, f"gain graph {name}")
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--group", required=True)
    s = verb(gain_p, "pglift", cmd_gain_pglift, "rank-i lift from a projective geometry")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--i", type=int, required=True)
    s = verb(gain_p, "diagnose", cmd_gain_diagnose, "class membership and the ~ relation")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--m", required=True, help="lg | pglift:<i> | matroid description on the edges")

    der = sub.add_parser("derived", parents=[common]).add_subparsers(dest="verb", required=True)
    s = verb(der, "compute", cmd_derived_compute, "derived matroid of a representation")
    s.add_argument("--rep", required=True)
    s = verb(der, "prop62", cmd_derived_prop62, "lift by the derived matroid and check it is free")
    s.add_argument("--rep", required=True)
    s = verb(der, "trunc-n", cmd_derived_trunc, "rank-k truncation of the derived matroid")
    s.add_argument("--rep", required=True)
    s.add_argument("--k", type=int, required=True)

    proj = sub.add_parser("project", parents=[common]).add_subparsers(dest="verb", required=True)
    for name, func in (("construct", cmd_project_construct), ("verify-star", cmd_project_verify_star),
                       ("bridge", cmd_project_bridge)):
        s = verb(proj, name, func, f"projection {name}")
        s.add_argument("--k", required=True)
        s.add_argument("--n", required=True, help="uniform:<r> | zero | matroid description on the hyperplanes")

    lab = sub.add_parser("lab", parents=[common]).add_subparsers(dest="verb", required=True)
    for name, func in (("c73", cmd_lab_c73), ("c72", cmd_lab_c72), ("dual-c82", cmd_lab_c82)):
        s = verb(lab, name, func, f"lab {name}")
        s.add_argument("--m", required=True)
        s.add_argument("--k", required=True)
        s.add_argument("--max-size", type=int, default=5)
        s.add_argument("--json-out", default=None)

    s = verb(sub, "acceptance", cmd_acceptance, "run the acceptance criteria")
    s.add_argument("--filter", default=None, help="criterion numbers, tags or names, comma-separated")
    s.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    previous = os.environ.get("LIFTFORGE_MAX_GROUND")
    if args.max_ground is not None:
        cap = args.max_ground if previous is None else min(args.max_ground, int(previous))
        os.environ["LIFTFORGE_MAX_GROUND"] = str(cap)
    try:
        return _dispatch(args)
    finally:
        if previous is None:
            os.environ.pop("LIFTFORGE_MAX_GROUND", None)
        else:
            os.environ["LIFTFORGE_MAX_GROUND"] = previous


def _dispatch(args) -> int:
    out = Output(args.json)
    code = EXIT_OK
    try:
        args.func(args, out)
    except Failure:
        code = EXIT_FAIL
    except CapacityError as exc:
        out.say(f"capacity exceeded: {exc}")
        out.put(error="capacity", message=str(exc))
        code = EXIT_CAPACITY
    except SpecError as exc:
        out.emit(sys.stdout)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatroidError as exc:
        out.say(f"verification failed: {exc}")
        out.put(error="verification", message=str(exc),
                witness=None if exc.witness is None else repr(exc.witness))
        code = EXIT_FAIL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.noun != "acceptance":
        out.emit(sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
