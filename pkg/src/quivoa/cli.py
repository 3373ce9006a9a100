"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import iso
from .errors import QuivoaError
from .free_algebra import Gauss
from .graph_core import double, shadow
from .io_formats import _normalise, dumps_report, format_expr, format_scalar, parse_expr, parse_scalar, read_graph
from .mispace import Character, blind, build_mispace, char_eval, invariants, recover_shadow
from .norm_bounds import BoundConfig, gcm_norm_bounds, oa_norm_bounds
from .reps import lemma_suite
from .word_semigroup import semigroup_of

SCHEMAS = {
    "reduce": '{"command", "seed", "input": str, "normal_form": str, "letters": [str], "length": int}',
    "semigroup": '{"command", "seed", "max_len": int, "count": int, "identity": str|null, "words": [str]}',
    "mispace": '{"command", "seed", "N_Q": int, "dims_sorted": [int], '
               '"components": [{"subset": [str], "dim": int, "degree": int}], "figure": str|null}',
    "invariants": '{"command", "seed", "N_Q", "vertex_count", "edge_count", "alpha", "beta", '
                  '"total_dim", "k0_rank": int}',
    "recover-shadow": '{"command", "seed", "blind_seed": int, "recovered": {"vertices": [str], '
                      '"multiplicity": [[str, str, int]]}, "isomorphic_to_true_shadow": bool, '
                      '"vertex_map": {str: str}|null}',
    "iso": '{"command", "seed", "model": "oa"|"gcm", "verdict": bool, "vertex_map": {}|null, '
           '"edge_map": {}|null, "refutation": str|null}',
    "eval": '{"command", "seed", "subset": [str], "lambda": {str: str}, "value": {"re", "im"}, '
            '"exact": str|null}',
    "norm-bounds": '{"command", "seed", "model": "oa"|"gcm", "expr": str, "lower": float, '
                   '"upper": float, "witnesses": {}, "config": {}, "figure": str|null}',
    "lemmas": '{"command", "seed", "trials": int, "all_passed": bool, "lemmas": {name: '
              '{"trials", "failures", "hypothesis_held", "passed", "first_failure"}}}',
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def _csv(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _lambda_pairs(text: str) -> dict[str, str]:
    out = {}
    for item in _csv(text):
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"expected edge=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in _csv(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="output mode")
    common.add_argument("--seed", type=int, default=0, help="base seed for every randomised step (default 0)")

    parser = _Parser(prog="quivoa", description="Universal operator algebras of finite directed graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text,
                              epilog="JSON output: " + SCHEMAS[name],
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    p = add("reduce", "normal form of a word")
    p.add_argument("word", help="letters separated by '.', e.g. v1.t")
    p.add_argument("--graph", required=True, help="graph file")

    p = add("semigroup", "enumerate reduced words")
    p.add_argument("--graph", required=True, help="graph file")
    p.add_argument("--max-len", type=int, required=True)

    p = add("mispace", "components of the maximal ideal space")
    p.add_argument("graph")
    p.add_argument("--figure", help="write a bar chart of component dimensions to this file")

    p = add("invariants", "vertex, edge, loop counts and K0 rank from the maximal ideal space")
    p.add_argument("graph")

    p = add("recover-shadow", "rebuild the undirected graph from a blinded descriptor")
    p.add_argument("graph")
    p.add_argument("--blind-seed", type=int, help="blinding seed (default: --seed)")

    p = add("iso", "decide isomorphism of universal algebras")
    p.add_argument("--model", choices=("oa", "gcm"), required=True)
    p.add_argument("--cross-check", action="store_true", help="gcm: also compare recovered shadows")
    p.add_argument("graph1")
    p.add_argument("graph2")

    p = add("eval", "evaluate a character")
    p.add_argument("--subset", type=_csv, required=True, help="comma-separated vertices")
    p.add_argument("--lambda", dest="lam", type=_lambda_pairs, default={}, help="edge=value,... (|value| <= 1)")
    p.add_argument("graph")
    p.add_argument("expr")

    p = add("norm-bounds", "lower/upper bounds on the universal norm")
    p.add_argument("--gcm", action="store_true", help="bound the C*-seminorm over the doubled graph")
    p.add_argument("--grid", type=int, default=16, help="character grid points per coordinate")
    p.add_argument("--refine", type=int, default=50, help="coordinate-ascent steps")
    p.add_argument("--trials", type=int, default=64, help="random representations")
    p.add_argument("--dims", type=_dims, default=(2, 3, 4), help="representation sizes, e.g. 2,3,4")
    p.add_argument("--figure", help="write the bound interval to this image file")
    p.add_argument("graph")
    p.add_argument("expr")

    p = add("lemmas", "check the positivity lemmas on random matrices")
    p.add_argument("--trials", type=int, default=500)
    return parser


# -- commands -----------------------------------------------------------------------


def cmd_reduce(args):
    q = read_graph(args.graph)
    sg = semigroup_of(q)
    names = _split_word(args.word)
    nf = sg.reduce(sg.word(names))
    return {"input": args.word, "normal_form": sg.format(nf), "letters": list(sg.names(nf)), "length": len(nf)}


def _split_word(text: str) -> list[str]:
    names = [t.strip() for t in text.split(".")]
    if not text.strip() or any(not t for t in names):
        raise QuivoaError(f"malformed word {text!r}")
    return names


def cmd_semigroup(args):
    q = read_graph(args.graph)
    sg = semigroup_of(q)
    words = sg.enumerate_reduced(args.max_len)
    ident = sg.identity()
    return {
        "max_len": args.max_len,
        "count": len(words),
        "identity": None if ident is None else sg.format(ident),
        "words": [sg.format(w) for w in words],
    }


def cmd_mispace(args):
    q = read_graph(args.graph)
    d = build_mispace(q)
    figure = None
    if args.figure:
        from .plotting import plot_mispace

        figure = plot_mispace(d, args.figure, title=f"{args.graph}: N_Q = {d.n_components}")
    return {
        "N_Q": d.n_components,
        "dims_sorted": sorted(d.dims()),
        "components": [{"subset": list(c.subset), "dim": c.dim, "degree": c.degree} for c in d.components],
        "figure": figure,
    }


def cmd_invariants(args):
    return invariants(build_mispace(read_graph(args.graph))).as_dict()


def cmd_recover_shadow(args):
    q = read_graph(args.graph)
    bseed = args.seed if args.blind_seed is None else args.blind_seed
    rec = recover_shadow(blind(build_mispace(q), bseed))
    w = iso.udgraph_isomorphic(rec, shadow(q))
    return {
        "blind_seed": bseed,
        "recovered": {
            "vertices": list(rec.vertices),
            "multiplicity": [[a, b, k] for (a, b), k in rec.multiplicity.items()],
        },
        "isomorphic_to_true_shadow": w.verdict,
        "vertex_map": w.vertex_map,
    }


def cmd_iso(args):
    q1, q2 = read_graph(args.graph1), read_graph(args.graph2)
    if args.model == "oa":
        w = iso.oa_isomorphic(q1, q2)
    else:
        w = iso.gcm_isomorphic(q1, q2, cross_check=args.cross_check)
    return {"model": args.model, **w.as_dict()}


def cmd_eval(args):
    q = read_graph(args.graph)
    lam = {e: parse_scalar(v) for e, v in args.lam.items()}
    c = Character(q, tuple(args.subset), lam)
    x = parse_expr(args.expr, q)
    value = char_eval(c, x)
    exact = char_eval(c, x, exact=True) if c.is_exact and x.is_exact else None
    return {
        "subset": list(c.subset),
        "lambda": {e: v for e, v in lam.items()},
        "value": value,
        "exact": exact,
    }


def cmd_norm_bounds(args):
    q = read_graph(args.graph)
    cfg = BoundConfig(args.grid, args.refine, args.trials, args.dims, args.seed)
    if args.gcm:
        d = double(q)
        x = parse_expr(args.expr, d)
        b = gcm_norm_bounds(d, x, cfg)
    else:
        x = parse_expr(args.expr, q)
        b = oa_norm_bounds(q, x, cfg)
    figure = None
    if args.figure:
        from .plotting import plot_bounds

        figure = plot_bounds(b, args.figure, title=f"{'gcm' if args.gcm else 'oa'}: {args.expr}")
    return {
        "model": "gcm" if args.gcm else "oa",
        "expr": format_expr(x),
        "lower": b.lower,
        "upper": b.upper,
        "witnesses": b.witnesses,
        "config": {"character_grid": cfg.character_grid, "refinement_steps": cfg.refinement_steps,
                   "rep_trials": cfg.rep_trials, "rep_dims": list(cfg.rep_dims)},
        "figure": figure,
    }


def cmd_lemmas(args):
    res = lemma_suite(args.seed, args.trials)
    return {
        "trials": args.trials,
        "all_passed": all(o.passed for o in res.values()),
        "lemmas": {k: o.as_dict() for k, o in res.items()},
    }


COMMANDS = {
    "reduce": cmd_reduce,
    "semigroup": cmd_semigroup,
    "mispace": cmd_mispace,
    "invariants": cmd_invariants,
    "recover-shadow": cmd_recover_shadow,
    "iso": cmd_iso,
    "eval": cmd_eval,
    "norm-bounds": cmd_norm_bounds,
    "lemmas": cmd_lemmas,
}


# -- text rendering -------------------------------------------------------------------


def _text_value(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}i"
    if isinstance(v, (Gauss, Fraction)):
        return format_scalar(v)
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(_normalise(v), sort_keys=True)
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def render_text(command: str, report: dict) -> str:
    lines = []
    if command == "mispace":
        lines.append(f"N_Q = {report['N_Q']}")
        lines.append(f"dims (sorted) = {report['dims_sorted']}")
        lines.append(f"{'subset':<30} {'dim':>4} {'degree':>6}")
        for c in report["components"]:
            lines.append(f"{'{' + ','.join(c['subset']) + '}':<30} {c['dim']:>4} {c['degree']:>6}")
        if report["figure"]:
            lines.append(f"figure = {report['figure']}")
        lines.append(f"seed = {report['seed']}")
        return "\n".join(lines)
    if command == "semigroup":
        lines.append(f"count = {report['count']}")
        lines.append(f"identity = {report['identity']}")
        lines.extend(report["words"])
        lines.append(f"seed = {report['seed']}")
        return "\n".join(lines)
    if command == "lemmas":
        for name, o in report["lemmas"].items():
            status = "PASS" if o["passed"] else "FAIL"
            lines.append(f"{status} {name}: {o['failures']}/{o['trials']} failures "
                         f"(hypothesis held {o['hypothesis_held']})")
        lines.append(f"all_passed = {report['all_passed']}")
        lines.append(f"seed = {report['seed']}")
        return "\n".join(lines)
    for k, v in report.items():
        if k == "command":
            continue
        if isinstance(v, dict) and k not in ("lambda", "recovered"):
            lines.append(f"{k}:")
            for kk, vv in v.items():
                lines.append(f"  {kk} = {_text_value(vv)}")
        else:
            lines.append(f"{k} = {_text_value(v)}")
    return "\n".join(lines)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = COMMANDS[args.command](args)
    except QuivoaError as exc:
        print(f"quivoa {args.command}: error: {exc}", file=err)
        return 1
    except OSError as exc:
        print(f"quivoa {args.command}: error: {exc}", file=err)
        return 1
    report = {"command": args.command, "seed": args.seed, **report}
    if args.format == "json":
        print(dumps_report(report), file=out)
    else:
        print(render_text(args.command, report), file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
