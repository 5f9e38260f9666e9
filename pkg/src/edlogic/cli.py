"""Command-line front-end.

Exit codes: ``check`` 0 consistent / 1 inconsistent, ``entail`` 0 entailed /
1 not entailed, ``eval`` 0 true / 1 false; every other command 0 on
success.  Any parse, file or budget error exits with 2.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .decision import (DEFAULT_ATOM_BUDGET, DEFAULT_MODEL_POINT_CAP, check_consistency,
                       countermodel, extension, satisfies)
from .errors import EDError
from .evidence import doubt_from_mass, mass_from_doubt
from .io import (DENSE_WRITE_LIMIT, mass_from_json, model_from_json, model_to_json, product_from_json,
                 read_json, setfunction_from_json, setfunction_to_json, space_from_json,
                 space_to_json, witness_to_json, write_json)
from .product import DEFAULT_PRODUCT_BOUND
from .rational import fmt
from .space import dual_measures
from .syntax import (DEFAULT_DNF_LITERAL_CAP, basics, conjoin, parse, parse_lines,
                     print_basic, print_formula, print_prop)


@dataclass(frozen=True)
class CliConfig:
    atom_budget: int = DEFAULT_ATOM_BUDGET
    model_point_cap: int = DEFAULT_MODEL_POINT_CAP
    dnf_literal_cap: int = DEFAULT_DNF_LITERAL_CAP
    output: str = "text"
    emit_model: bool = False
    model_out: str | None = None
    # where a large model goes when --model-out is not given
    sibling_path: str = "witness-model.json"

    def __post_init__(self):
        for name in ("atom_budget", "model_point_cap", "dnf_literal_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


class _Out:
    def __init__(self, stream):
        self.stream = stream

    def __call__(self, *parts):
        print(*parts, file=self.stream)


def _formula_from_args(args):
    if args.file:
        formulas = parse_lines(Path(args.file).read_text(encoding="utf-8"))
        if not formulas:
            raise EDError(f"{args.file} contains no formulas")
        return conjoin(formulas)
    if args.formula is None:
        raise EDError("give a formula or --file")
    return parse(args.formula)


def _config(args) -> CliConfig:
    source = getattr(args, "file", None) or getattr(args, "premises", None)
    sibling = str(Path(source).with_suffix(".model.json")) if source else "witness-model.json"
    return CliConfig(atom_budget=args.atom_budget, model_point_cap=args.model_cap,
                     dnf_literal_cap=args.dnf_cap, output=args.format,
                     emit_model=args.emit_model, model_out=args.model_out,
                     sibling_path=sibling)


def _model_path(res, cfg: CliConfig):
    """File the witness model is written to, or None to print it inline."""
    if not cfg.emit_model or res.model is None:
        return None
    if cfg.model_out:
        return cfg.model_out
    if len(res.model.space) > DENSE_WRITE_LIMIT:
        return cfg.sibling_path
    return None


def _witness_payload(res, cfg: CliConfig):
    path = _model_path(res, cfg)
    payload = witness_to_json(res, with_model=cfg.emit_model and path is None)
    if path:
        write_json(path, model_to_json(res.model))
        payload["model_path"] = path
    return payload


def _solve_kw(cfg: CliConfig):
    return dict(atom_budget=cfg.atom_budget, model_point_cap=cfg.model_point_cap,
                dnf_literal_cap=cfg.dnf_literal_cap, build=cfg.emit_model)


def _report_witness(res, cfg: CliConfig, out, heading):
    payload = _witness_payload(res, cfg)
    if cfg.output == "json":
        out(json.dumps(payload, indent=2))
        return
    out(heading)
    out("props: " + (", ".join(res.basis.props) or "(none)"))
    for a in range(res.basis.n):
        out(f"  atom {a + 1}: {print_prop(res.basis.atom_formula(a))}")
    out("mass:")
    for key, v in payload["mass"].items():
        out(f"  m_{key} = {v}")
    out("e:")
    for key, v in payload["e"].items():
        out(f"  e_{key} = {v}")
    if "model_path" in payload:
        out(f"model: {payload['model_path']} ({len(res.model.space)} points)")
    elif cfg.emit_model and res.model is not None:
        out(f"model: {len(res.model.space)} points")
        out(json.dumps(payload["model"]))
    elif cfg.emit_model:
        out(f"model: not built (needs more than {cfg.model_point_cap} points)")


def cmd_check(args, out):
    cfg = _config(args)
    f = _formula_from_args(args)
    res = check_consistency(f, **_solve_kw(cfg))
    if not res.consistent:
        if cfg.output == "json":
            out(json.dumps({"verdict": "inconsistent", "formula": print_formula(f)}))
        else:
            out("INCONSISTENT")
        return 1
    _report_witness(res, cfg, out, "CONSISTENT")
    return 0


def cmd_entail(args, out):
    cfg = _config(args)
    premises = []
    if args.premises:
        premises += parse_lines(Path(args.premises).read_text(encoding="utf-8"))
    premises += [parse(p) for p in args.premise or ()]
    goal = parse(args.goal)
    res = countermodel(premises, goal, **_solve_kw(cfg))
    if not res.consistent:
        if cfg.output == "json":
            out(json.dumps({"verdict": "entailed"}))
        else:
            out("ENTAILED")
        return 0
    if cfg.output == "json":
        payload = _witness_payload(res, cfg)
        payload["verdict"] = "not entailed"
        out(json.dumps(payload, indent=2))
    else:
        _report_witness(res, cfg, out, "NOT ENTAILED; countermodel:")
    return 1


def cmd_eval(args, out):
    obj = read_json(args.space)
    valuation = read_json(args.valuation) if args.valuation else None
    model = model_from_json(obj, valuation)
    f = parse(args.formula)
    truth = satisfies(model, f)
    rows = []
    for b in basics(f):
        terms = []
        for c, psi in b.term.summands:
            terms.append({"prop": print_prop(psi), "coef": fmt(c),
                          "ed": fmt(model.ed(extension(model, psi)))})
        rows.append({"basic": print_basic(b), "terms": terms})
    if args.format == "json":
        out(json.dumps({"formula": print_formula(f), "value": truth, "basics": rows}, indent=2))
    else:
        out(f"{'TRUE' if truth else 'FALSE'}: {print_formula(f)}")
        for row in rows:
            out(f"  {row['basic']}")
            for t in row["terms"]:
                out(f"    ED({t['prop']}) = {t['ed']}")
    return 0 if truth else 1


def cmd_measures(args, out):
    space = space_from_json(read_json(args.space))
    subset = list(space.points) if args.all else list(args.points)
    quad = dual_measures(space, subset)
    values = {k: fmt(v) for k, v in quad.as_dict().items()}
    if args.format == "json":
        out(json.dumps({"subset": subset, **values}))
    else:
        out("subset: {" + ", ".join(subset) + "}")
        for k, v in values.items():
            out(f"{k} = {v}")
    return 0


def cmd_mobius(args, out):
    obj = read_json(args.file)
    if args.direction == "to-mass":
        result = mass_from_doubt(setfunction_from_json(obj))
    else:
        result = doubt_from_mass(mass_from_json(obj))
    text = write_json(args.output, setfunction_to_json(result))
    if args.output in (None, "-"):
        out(text.rstrip())
    else:
        out(f"wrote {args.output}")
    return 0


def cmd_product(args, out):
    objs = [read_json(p) for p in args.spaces]
    if len(objs) == 1 and "components" in objs[0]:
        prod_obj = dict(objs[0])
    else:
        prod_obj = {"components": objs}
    if args.joint:
        prod_obj["joint"] = read_json(args.joint)
    ps = product_from_json(prod_obj, max_points=args.max_points)
    text = write_json(args.output, space_to_json(ps.space))
    if args.output in (None, "-"):
        out(text.rstrip())
    else:
        out(f"wrote {args.output} ({len(ps.space)} points)")
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--atom-budget", type=int, default=DEFAULT_ATOM_BUDGET)
    common.add_argument("--model-cap", type=int, default=DEFAULT_MODEL_POINT_CAP)
    common.add_argument("--dnf-cap", type=int, default=DEFAULT_DNF_LITERAL_CAP)
    common.add_argument("--emit-model", action="store_true",
                        help="build the witness model and print it (or write it to --model-out)")
    common.add_argument("--model-out", metavar="PATH",
                        help="model file; models over 512 points default to a sibling file")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for any randomised behaviour")

    parser = argparse.ArgumentParser(prog="edlogic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide consistency of a formula")
    p.add_argument("formula", nargs="?")
    p.add_argument("-f", "--file", help="formulas, one per line, conjoined")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("entail", parents=[common], help="decide premises |= goal")
    p.add_argument("goal")
    p.add_argument("--premises", metavar="FILE", help="premise formulas, one per line")
    p.add_argument("-p", "--premise", action="append", help="inline premise (repeatable)")
    p.set_defaults(func=cmd_entail)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula in a model")
    p.add_argument("space", help="space file (may carry its own 'valuation')")
    p.add_argument("formula")
    p.add_argument("--valuation", metavar="FILE")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("measures", parents=[common], help="ed, es, ea, er of a subset")
    p.add_argument("space")
    p.add_argument("points", nargs="*", help="subset members (none = empty set)")
    p.add_argument("--all", action="store_true", help="use the whole frame")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("mobius", parents=[common], help="convert doubt <-> mass tables")
    p.add_argument("file")
    p.add_argument("--direction", choices=("to-mass", "from-mass"), required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("product", parents=[common], help="expand a product space")
    p.add_argument("spaces", nargs="+", help="component space files, or one product file")
    p.add_argument("--joint", metavar="FILE", help='{"a|b": "1/8", ...}')
    p.add_argument("--max-points", type=int, default=DEFAULT_PRODUCT_BOUND)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_product)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.seed is not None:
        random.seed(args.seed)
    try:
        return args.func(args, _Out(stdout))
    except (EDError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
