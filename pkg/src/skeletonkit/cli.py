"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (a JSON error object is
printed), 2 on malformed input or bad arguments.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .errors import DomainError, InputError, SkeletonKitError
from .exact import parse_extended, to_fraction


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _read(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError("unreadable_input", f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("bad_json", f"{path}: {exc}") from None


def _skeleton(data: dict):
    from .skeleton import skeleton_from_json
    if not isinstance(data, dict):
        raise InputError("bad_skeleton", "expected a JSON object")
    return skeleton_from_json(data)


def _gog(data: dict):
    from .gog import GraphOfGroups
    if not isinstance(data, dict):
        raise InputError("bad_gog", "expected a JSON object")
    return GraphOfGroups.from_json(data)


# -- handlers taking one parsed input ------------------------------------

def skeleton_analyze(args, data) -> str:
    from .skeleton import EmptySkeleton, generalized_valence, is_hyperbolic_node, is_node, node_set
    sk = _skeleton(data)
    if isinstance(sk, EmptySkeleton):
        return dumps({"empty": True, "vertices": {}, "nodes": []})
    out = {}
    for v in sorted(sk.graph.vertices):
        node = is_node(sk, v)
        out[v] = {"generalized_valence": generalized_valence(sk, v), "node": node,
                  "hyperbolic": is_hyperbolic_node(sk, v) if node else None}
    return dumps({"vertices": out, "nodes": sorted(node_set(sk))})


def skeleton_minimize(args, data) -> str:
    from .skeleton import EmptySkeleton, minimize_triangulation
    sk = _skeleton(data)
    if isinstance(sk, EmptySkeleton):
        return dumps({"triangulation": []})
    S = args.S.split(",") if args.S else None
    rng = random.Random(args.seed) if args.seed is not None else None
    return dumps({"triangulation": sorted(minimize_triangulation(sk, S, rng))})


def skeleton_classify(args, data) -> str:
    from .skeleton import classify_compact, classify_curve
    sk = _skeleton(data)
    out = classify_curve(sk).to_json()
    if args.compact:
        out["compact"] = classify_compact(sk).to_json()
    return dumps(out)


def skeleton_mark(args, data) -> str:
    from .skeleton import Cluster, Marking, mark_points
    sk = _skeleton(data)
    spec = _read(args.markings)
    try:
        markings = [Marking(m.get("vertex"), m.get("edge"),
                            to_fraction(m["offset"]) if "offset" in m else None, m.get("cluster"))
                    for m in spec.get("markings", [])]
        clusters = [Cluster(c["id"], c.get("anchor_vertex"), c.get("anchor_edge"),
                            to_fraction(c["anchor_offset"]) if "anchor_offset" in c else None,
                            to_fraction(c.get("length", "1")))
                    for c in spec.get("clusters", [])]
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError("bad_markings", f"malformed markings: {exc}") from None
    return dumps(mark_points(sk, markings, clusters).to_json())


def harm_basis_cmd(args, data) -> str:
    from .harmonic import harm_basis
    from .semigraph import SemiGraph
    return dumps(harm_basis(SemiGraph.from_json(data), args.ell).to_json())


def harm_construct(args, data) -> str:
    from .harmonic import prescribed_cochain
    from .semigraph import SemiGraph
    edges = args.edges.split(",")
    if len(edges) != 3:
        raise InputError("bad_arguments", "--edges needs three comma-separated open edges")
    c = prescribed_cochain(SemiGraph.from_json(data), *edges, args.a, args.a2, args.ell)
    return dumps(c.to_json())


def harm_h1rank(args, data) -> str:
    from .harmonic import h1_rank
    from .skeleton import EmptySkeleton
    sk = _skeleton(data)
    if isinstance(sk, EmptySkeleton):
        return dumps({"h1_rank": 0})
    return dumps({"h1_rank": h1_rank(sk, args.ell)})


def bt_recover(args, data) -> str:
    from .drinfeld import recover_invariants
    from .skeleton import EmptySkeleton
    sk = _skeleton(data)
    if isinstance(sk, EmptySkeleton):
        raise DomainError("no_interior", "empty skeleton")
    q, p, f = recover_invariants(sk)
    return dumps({"q": q, "p": p, "f": f})


def _action(path: str):
    from .gog import PermutationAction
    return PermutationAction.from_json(_read(path))


def gog_validate(args, data) -> str:
    from .gog import resolve_action
    gog = _gog(data)
    if args.action:
        resolve_action(gog, _action(args.action))
    return dumps({"ok": True})


def gog_screen(args, data) -> str:
    from .gog import screen_mochizuki
    from .semigraph import SemiGraph
    try:
        graph = SemiGraph.from_json(data["graph"])
        vd = {str(v): (int(d["g"]), int(d["n"])) for v, d in data["vertices"].items()}
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise InputError("bad_symbolic", f"malformed symbolic data: {exc}") from None
    return dumps(screen_mochizuki(graph, vd).to_json())


def gog_cover(args, data) -> str:
    from .gog import cover_from_action
    return dumps(cover_from_action(_gog(data), _action(args.action)).to_json())


def gog_ball(args, data) -> str:
    from .bass_serre import audit_ball, bass_serre_ball
    ball = bass_serre_ball(_gog(data), args.radius)
    report = audit_ball(ball)
    if not report:
        raise DomainError(report.code, report.detail)
    return dumps(ball.to_json())


def gog_reconstruct(args, data) -> str:
    from .bass_serre import bass_serre_ball, reconstruct_quotient
    from .gog import labeled_isomorphic
    gog = _gog(data)
    rec = reconstruct_quotient(bass_serre_ball(gog, args.radius))
    out = rec.to_json()
    out["isomorphic_to_input"] = labeled_isomorphic(rec.graph, rec.vertex_labels, rec.edge_labels,
                                                    gog.graph, gog.vertex_labels(), gog.edge_labels())
    return dumps(out)


def gog_tower(args, data) -> str:
    from .gog import tempered_tower
    levels = tempered_tower(_gog(data), [_action(a) for a in args.actions])
    return dumps({"levels": [lv.to_json(args.covers) for lv in levels]})


def export_dot(args, data) -> str:
    from .dot import labeled_dot, semigraph_dot, skeleton_dot
    from .semigraph import SemiGraph
    kind = args.kind
    if kind == "auto":
        if isinstance(data, dict) and "vertex_groups" in data:
            kind = "gog"
        elif isinstance(data, dict) and ("decor" in data or data.get("empty")):
            kind = "skeleton"
        else:
            kind = "semigraph"
    if kind == "gog":
        gog = _gog(data)
        return labeled_dot(gog.graph, gog.vertex_labels(), gog.edge_labels(closed_only=False)).rstrip("\n")
    if kind == "skeleton":
        return skeleton_dot(_skeleton(data)).rstrip("\n")
    return semigraph_dot(SemiGraph.from_json(data)).rstrip("\n")


# -- handlers without an input file ---------------------------------------

def wild_fiber_count(args) -> str:
    from .wild import fiber_count
    return dumps({"count": fiber_count(args.T, args.S, args.p, args.h)})


def wild_profile(args) -> str:
    from .wild import split_annulus_layout
    layout = split_annulus_layout(args.L, args.eps, args.p, args.h)
    if args.format == "ascii":
        return layout.ascii().rstrip("\n")
    if args.format == "dot":
        return layout.dot().rstrip("\n")
    out = layout.to_json()
    out["diagram"] = layout.ascii()
    return dumps(out)


def wild_kummer(args) -> str:
    from .wild import kummer_cover
    return dumps(kummer_cover(parse_extended(args.L), args.ell, args.cls).to_json())


def bt_generate(args) -> str:
    from .dot import skeleton_dot
    from .drinfeld import LocalFieldParams, bt_ball
    ball = bt_ball(LocalFieldParams(args.p, args.f, args.e), args.radius)
    if args.format == "dot":
        return skeleton_dot(ball).rstrip("\n")
    return dumps(ball.to_json())


def selftest(args) -> str:
    from .selftest import run_selftest
    seed = int(os.environ.get("SKELETONKIT_SEED", "0"))
    result = run_selftest(seed, args.n)
    if result["failures"]:
        raise DomainError("selftest_failed", dumps(result))
    return dumps(result)


FILE_HANDLERS = {
    "skeleton_analyze": skeleton_analyze, "skeleton_minimize": skeleton_minimize,
    "skeleton_classify": skeleton_classify, "skeleton_mark": skeleton_mark,
    "harm_basis": harm_basis_cmd, "harm_construct": harm_construct, "harm_h1rank": harm_h1rank,
    "bt_recover": bt_recover, "gog_validate": gog_validate, "gog_screen": gog_screen,
    "gog_cover": gog_cover, "gog_ball": gog_ball, "gog_reconstruct": gog_reconstruct,
    "gog_tower": gog_tower, "export_dot": export_dot,
}
PLAIN_HANDLERS = {
    "wild_fiber_count": wild_fiber_count, "wild_profile": wild_profile, "wild_kummer": wild_kummer,
    "bt_generate": bt_generate, "selftest": selftest,
}


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(exc.message) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skeletonkit", description=__doc__.splitlines()[0])
    parser.add_argument("-o", "--output", help="write the report here instead of stdout")
    top = parser.add_subparsers(dest="group", required=True)

    def with_inputs(p):
        p.add_argument("inputs", nargs="*", default=["-"], help="JSON input files ('-' for stdin)")
        p.add_argument("--jobs", type=int, default=1, help="process independent inputs in parallel")
        return p

    def sub(group, name, handler_key, **kw):
        p = group.add_parser(name, **kw)
        p.set_defaults(handler=handler_key)
        return p

    sk = top.add_parser("skeleton", help="decorated skeletons").add_subparsers(dest="cmd", required=True)
    with_inputs(sub(sk, "analyze", "skeleton_analyze", help="valences, nodes, hyperbolicity"))
    p = with_inputs(sub(sk, "minimize", "skeleton_minimize", help="minimal triangulation"))
    p.add_argument("--S", help="comma-separated starting vertex set (default: all vertices)")
    p.add_argument("--seed", type=int, help="scan candidates in a random order")
    p = with_inputs(sub(sk, "classify", "skeleton_classify", help="hyperbolicity and certificates"))
    p.add_argument("--compact", action="store_true", help="also run the compact trichotomy")
    p = with_inputs(sub(sk, "mark", "skeleton_mark", help="remove marked rigid points"))
    p.add_argument("--markings", required=True, help="JSON file with markings and clusters")

    hm = top.add_parser("harm", help="harmonic cochains").add_subparsers(dest="cmd", required=True)
    p = with_inputs(sub(hm, "basis", "harm_basis", help="basis of harmonic cochains mod ell"))
    p.add_argument("--ell", type=int, required=True)
    p = with_inputs(sub(hm, "construct", "harm_construct", help="cochain with prescribed values on three open edges"))
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--edges", required=True, help="three open edges e,e',e''")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--a2", type=int, required=True)
    p = with_inputs(sub(hm, "h1rank", "harm_h1rank", help="rank of H^1 with Z/ell coefficients"))
    p.add_argument("--ell", type=int, required=True)

    wd = top.add_parser("wild", help="covers of annuli").add_subparsers(dest="cmd", required=True)
    p = sub(wd, "fiber-count", "wild_fiber_count", help="points above a disc point under z -> z^(p^h)")
    for flag, typ in (("--p", int), ("--h", int), ("--T", _rational), ("--S", _rational)):
        p.add_argument(flag, type=typ, required=True)
    p = sub(wd, "profile", "wild_profile", help="fibre counts along an annulus")
    for flag, typ in (("--L", _rational), ("--eps", _rational), ("--p", int), ("--h", int)):
        p.add_argument(flag, type=typ, required=True)
    p.add_argument("--format", choices=("json", "ascii", "dot"), default="json")
    p = sub(wd, "kummer", "wild_kummer", help="components of a Kummer torsor of an annulus")
    p.add_argument("--L", required=True, help="length n/d or inf")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--class", dest="cls", type=int, required=True)

    bt = top.add_parser("bt", help="Bruhat-Tits trees").add_subparsers(dest="cmd", required=True)
    p = sub(bt, "generate", "bt_generate", help="ball in the Bruhat-Tits tree")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    with_inputs(sub(bt, "recover", "bt_recover", help="read (q, p, f) off a tree ball"))

    gg = top.add_parser("gog", help="graphs of finite groups").add_subparsers(dest="cmd", required=True)
    p = with_inputs(sub(gg, "validate", "gog_validate", help="check a graph of groups and optionally an action"))
    p.add_argument("--action", help="also validate this permutation action")
    with_inputs(sub(gg, "screen", "gog_screen", help="screen symbolic (g, n) vertex data"))
    p = with_inputs(sub(gg, "cover", "gog_cover", help="finite cover attached to an action"))
    p.add_argument("--action", required=True)
    p = with_inputs(sub(gg, "ball", "gog_ball", help="ball in the Bass-Serre tree"))
    p.add_argument("--radius", type=int, required=True)
    p = with_inputs(sub(gg, "reconstruct", "gog_reconstruct", help="recover the quotient graph from a ball"))
    p.add_argument("--radius", type=int, required=True)
    p = with_inputs(sub(gg, "tower", "gog_tower", help="degrees and free ranks of a tower of covers"))
    p.add_argument("--action", dest="actions", action="append", required=True,
                   help="action file for the next level (repeat, coarsest first)")
    p.add_argument("--covers", action="store_true", help="include each cover in the report")

    ex = top.add_parser("export", help="render to Graphviz").add_subparsers(dest="cmd", required=True)
    p = with_inputs(sub(ex, "dot", "export_dot", help="Graphviz DOT for a semigraph, skeleton or graph of groups"))
    p.add_argument("--kind", choices=("auto", "semigraph", "skeleton", "gog"), default="auto")

    p = top.add_parser("selftest", help="randomized property checks (seed: SKELETONKIT_SEED)")
    p.set_defaults(handler="selftest")
    p.add_argument("--n", type=int, default=25, help="random instances per check")
    return parser


def _run_file(handler_key: str, args, path: str) -> tuple[int, str]:
    try:
        return 0, FILE_HANDLERS[handler_key](args, _read(path))
    except SkeletonKitError as exc:
        return exc.exit_code, dumps(exc.as_dict())


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    key = args.handler
    if key in PLAIN_HANDLERS:
        try:
            results = [(0, PLAIN_HANDLERS[key](args))]
        except SkeletonKitError as exc:
            results = [(exc.exit_code, dumps(exc.as_dict()))]
    else:
        inputs = args.inputs or ["-"]
        if args.jobs > 1 and len(inputs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_run_file, [key] * len(inputs), [args] * len(inputs), inputs))
        else:
            results = [_run_file(key, args, path) for path in inputs]
    text = "\n".join(out for _, out in results) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return max(code for code, _ in results)


def main() -> None:
    sys.exit(run())
