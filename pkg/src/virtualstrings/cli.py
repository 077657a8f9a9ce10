"""Command-line front end: ``virtualstrings <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from functools import partial

from . import core, gauss, invariants, matrices, moves, skein
from .cobracket import cobracket, format_tensor

OK, DOMAIN_ERROR, LIMIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- input helpers


def _read(arg: str) -> str:
    text = sys.stdin.read() if arg == "-" else arg
    return text.strip()


def _load_string(arg: str) -> core.VirtualString:
    text = _read(arg)
    if text.startswith("{"):
        obj = core.from_json(text)
        return obj.string if isinstance(obj, core.ArrowDiagram) else obj
    return core.parse_string(text)


def _load_diagram(arg: str) -> core.ArrowDiagram:
    text = _read(arg)
    if text.startswith("{"):
        obj = core.from_json(text)
        return obj if isinstance(obj, core.ArrowDiagram) else core.with_signs(obj)
    return core.parse_diagram(text)


def _budget(args) -> moves.Budget:
    base = moves.DEFAULT_BUDGET
    return moves.Budget(
        max_states=args.max_states if args.max_states is not None else base.max_states,
        max_rank_increase=args.max_rank_increase if args.max_rank_increase is not None else base.max_rank_increase,
    )


def _key_fn(args):
    if args.max_states is None and args.max_rank_increase is None:
        return moves.class_key
    b = moves.KEY_BUDGET
    budget = moves.Budget(
        args.max_states if args.max_states is not None else b.max_states,
        args.max_rank_increase if args.max_rank_increase is not None else b.max_rank_increase,
    )
    return partial(moves.class_key, budget=budget)


def _limit(args, default):
    return args.max_size if args.max_size is not None else default


def _class_name(k) -> str:
    return "<" + core.render_string(core.string_from_code(k)) + ">"


def _frac(x: Fraction) -> str:
    return str(x)


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _matrix_json(T: matrices.BasedMatrix):
    return {"labels": list(T.labels), "b": [list(r) for r in T.b]}


# ---------------------------------------------------------------- subcommands


def cmd_parse(args):
    alpha = _load_string(args.string)
    canon = core.canonical_string(alpha)
    data = {
        "rank": alpha.rank,
        "arrows": [list(a) for a in alpha.arrows],
        "text": core.render_string(alpha),
        "canonical": core.render_string(canon),
        "code": list(core.canonical_code(alpha)),
    }
    text = "\n".join(
        [
            f"rank: {alpha.rank}",
            f"arrows: {list(alpha.arrows)}",
            f"canonical: {data['canonical']}",
        ]
    )
    _emit(args, text, data)
    return OK


def _slice_data(rep: invariants.SliceReport):
    return {
        "verdict": rep.verdict,
        "u_zero": rep.u_zero,
        "matrix_hyperbolic": rep.matrix_hyperbolic,
        "sigma": rep.sigma,
        "slice_genus_lower_bound": rep.slice_genus_lower_bound,
    }


def cmd_invariants(args):
    alpha = _load_string(args.string)
    u = invariants.u_polynomial(alpha)
    T = invariants.based_matrix(alpha)
    T0 = matrices.primitive_reduce(T)
    rep = invariants.slice_obstructions(alpha, limit=_limit(args, matrices.SIGMA_LIMIT))
    data = {
        "u": str(u),
        "u_coefficients": {str(k): v for k, v in u.as_dict().items()},
        "T": _matrix_json(T),
        "T0": _matrix_json(T0),
        "genus": invariants.genus(alpha),
        "sigma": rep.sigma,
        "rho": invariants.rho(alpha),
        "hr_lower_bound": invariants.hr_lower_bound(alpha),
        "hg_lower_bound": invariants.hg_lower_bound(alpha),
        "slice": _slice_data(rep),
    }
    lines = [
        f"u = {u}",
        "T =",
        str(T),
        "T0 =",
        str(T0),
        f"genus = {data['genus']}",
        f"sigma = {rep.sigma}",
        f"rho = {data['rho']}",
        f"hr >= {data['hr_lower_bound']}",
        f"hg >= {data['hg_lower_bound']}",
        f"slice: {rep.verdict}",
    ]
    _emit(args, "\n".join(lines), data)
    return OK


def cmd_slice(args):
    alpha = _load_string(args.string)
    rep = invariants.slice_obstructions(alpha, limit=_limit(args, matrices.SIGMA_LIMIT))
    data = _slice_data(rep)
    text = "\n".join(
        [
            f"verdict: {rep.verdict}",
            f"u = 0: {rep.u_zero}",
            f"T0 hyperbolic: {rep.matrix_hyperbolic}",
            f"sigma = {rep.sigma}",
            f"slice genus >= {rep.slice_genus_lower_bound}",
        ]
    )
    _emit(args, text, data)
    return OK


def cmd_reduce(args):
    alpha = _load_string(args.string)
    result = moves.normalize(alpha, _budget(args))
    data = {
        "status": result.status,
        "normal_form": core.render_string(result.normal_form),
        "rank": result.normal_form.rank,
        "proven_minimal": result.proven_minimal,
        "states_explored": result.states_explored,
        "moves": [{"kind": m.kind, "site": list(m.site)} for m in result.moves_applied],
    }
    lines = [
        f"status: {result.status}",
        f"normal form: {data['normal_form'] or '(trivial)'}",
        f"rank: {data['rank']}{' (minimal)' if result.proven_minimal else ''}",
        f"moves: {len(result.moves_applied)}",
    ]
    lines += [f"  {m}" for m in result.moves_applied]
    _emit(args, "\n".join(lines), data)
    return LIMIT_ERROR if result.status == moves.BUDGET_EXHAUSTED else OK


def cmd_enumerate(args):
    codes = sorted(moves.enumerate_strings(args.rank, limit=_limit(args, moves.ENUMERATION_LIMIT)))
    rendered = [core.render_string(core.string_from_code(c)) for c in codes]
    data = {"rank": args.rank, "count": len(codes), "strings": rendered}
    text = "\n".join([f"{len(codes)} strings of rank {args.rank}"] + rendered)
    _emit(args, text, data)
    return OK


def cmd_equivalent(args):
    alpha, beta = _load_string(args.first), _load_string(args.second)
    verdict, reason = moves.homotopic_heuristic(alpha, beta, _budget(args))
    _emit(args, f"{verdict} ({reason})", {"verdict": verdict, "reason": reason})
    return LIMIT_ERROR if verdict == moves.UNKNOWN_EQUIV else OK


def cmd_gauss(args):
    limit = _limit(args, gauss.BIPARTITION_LIMIT)
    if args.gauss_command == "check":
        word = gauss.parse_word(_read(args.word))
        c1, c2 = gauss.condition_i(word), gauss.condition_ii(word)
        data = {"condition_i": c1, "condition_ii": c2}
        if args.bipartition:
            bip = gauss.parse_bipartition(args.bipartition, word)
            ok = gauss.realizable_on_sphere(word, bip)
            data["compatible"] = gauss.compatible(word, bip)
        else:
            bips = gauss.compatible_bipartitions(word, limit=limit)
            data["bipartitions"] = len(bips)
            ok = c1 and c2 and bool(bips)
        data["realizable"] = ok
        lines = [
            "realizable" if ok else "not realizable",
            f"condition (i): {'holds' if c1 else 'fails'}",
            f"condition (ii): {'holds' if c2 else 'fails'}",
        ]
        if "bipartitions" in data:
            lines.append(f"compatible bipartitions: {data['bipartitions']}")
        else:
            lines.append(f"bipartition compatible: {data['compatible']}")
        _emit(args, "\n".join(lines), data)
        return OK
    if args.gauss_command == "bipartitions":
        word = gauss.parse_word(_read(args.word))
        bips = [str(b) for b in gauss.compatible_bipartitions(word, limit=limit)]
        data = {"count": len(bips), "bipartitions": bips, "irreducible_factors": gauss.irreducible_factor_count(word)}
        _emit(args, "\n".join([f"{len(bips)} compatible bipartitions"] + bips), data)
        return OK
    pairs = []
    for pair_text in (args.first, args.second):
        if ":" not in pair_text:
            raise UsageError("pairs are written WORD:X|Y")
        w, b = pair_text.split(":", 1)
        word = gauss.parse_word(w)
        pairs.append((word, gauss.parse_bipartition(b, word)))
    same = gauss.sphere_curves_homeomorphic(*pairs)
    _emit(args, "homeomorphic" if same else "not homeomorphic", {"homeomorphic": same})
    return OK


def cmd_cobracket(args):
    alpha = _load_string(args.string)
    t = cobracket(alpha, key=_key_fn(args))
    data = {
        "terms": [
            {"classes": [core.render_string(core.string_from_code(k)) for k in key], "coefficient": _frac(c)}
            for key, c in t.items()
        ]
    }
    _emit(args, format_tensor(t, _class_name), data)
    return OK


def cmd_nabla(args):
    D = _load_diagram(args.diagram)
    p = skein.nabla(D, key=_key_fn(args), limit=_limit(args, skein.NABLA_LIMIT))
    data = {
        "terms": [
            {
                "z_degree": deg,
                "classes": [core.render_string(core.string_from_code(k)) for k in classes],
                "coefficient": _frac(c),
            }
            for (deg, classes), c in p.items()
        ]
    }
    _emit(args, skein.format_polynomial(p, _class_name), data)
    return OK


def cmd_eta(args):
    F = skein.parse_forest(_read(args.forest))
    value = skein.eta(F)
    _emit(args, _frac(value), {"eta": _frac(value)})
    return OK


def cmd_families(args):
    if args.family == "lattice":
        alpha = core.lattice_string(args.p, args.q)
    elif args.family == "permutation":
        alpha = core.permutation_string(core.cycles_permutation(args.cycles))
    else:
        alpha = core.permutation_string(core.linked_family_permutation(args.p, args.q, args.p2, args.q2))
    if args.format == "json":
        print(core.to_json(alpha))
    else:
        print(core.render_string(alpha))
    return OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    def options(p, default):
        # subcommand copies must not overwrite values given before the subcommand
        d = (lambda v: v) if default else (lambda v: argparse.SUPPRESS)
        p.add_argument("--format", choices=("text", "json"), default=d("text"))
        p.add_argument("--max-states", type=int, default=d(None), help="state budget for move searches")
        p.add_argument("--max-rank-increase", type=int, default=d(None), help="rank headroom for move searches")
        p.add_argument("--max-size", type=int, default=d(None), help="size limit of the chosen operation")

    common = _Parser(add_help=False)
    options(common, False)
    parser = _Parser(prog="virtualstrings", description="Virtual strings: invariants, homotopy, Gauss words, skein.")
    options(parser, True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, "validate a string and print its canonical form").add_argument("string")
    add("invariants", cmd_invariants, "u-polynomial, based matrices, genus, bounds").add_argument("string")
    add("slice", cmd_slice, "slice obstructions").add_argument("string")
    add("reduce", cmd_reduce, "search for a homotopic string of least rank").add_argument("string")
    add("enumerate", cmd_enumerate, "all strings of a given rank up to homeomorphism").add_argument("rank", type=int)
    p = add("equivalent", cmd_equivalent, "decide homotopy where possible")
    p.add_argument("first")
    p.add_argument("second")

    g = add("gauss", cmd_gauss, "Gauss word realizability on the sphere")
    gsub = g.add_subparsers(dest="gauss_command", required=True, parser_class=_Parser)
    c = gsub.add_parser("check", parents=[common])
    c.add_argument("word")
    c.add_argument("--bipartition", default=None, help="X|Y")
    gsub.add_parser("bipartitions", parents=[common]).add_argument("word")
    h = gsub.add_parser("homeomorphic", parents=[common], help="pairs as WORD:X|Y")
    h.add_argument("first")
    h.add_argument("second")

    add("cobracket", cmd_cobracket, "cobracket of the homotopy class").add_argument("string")
    add("nabla", cmd_nabla, "skein polynomial of an arrow diagram").add_argument("diagram")
    add("eta", cmd_eta, 'eta of an oriented forest given as "a>b c>d ..."').add_argument("forest")

    f = add("families", cmd_families, "named string families")
    fsub = f.add_subparsers(dest="family", required=True, parser_class=_Parser)
    lat = fsub.add_parser("lattice", parents=[common])
    lat.add_argument("p", type=int)
    lat.add_argument("q", type=int)
    fsub.add_parser("permutation", parents=[common]).add_argument("cycles", help='e.g. "(134)(2)"')
    fam = fsub.add_parser("family", parents=[common])
    for name in ("p", "q", "p2", "q2"):
        fam.add_argument(name, type=int)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except core.SizeLimitError as exc:
        print(f"error: limit: {exc}", file=sys.stderr)
        return LIMIT_ERROR
    except (ValueError, UsageError) as exc:
        kind = "usage" if isinstance(exc, UsageError) else "domain"
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
