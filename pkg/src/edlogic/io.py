"""JSON file formats.

Numbers are written as strings (``"1/5"``, ``"3"``) and read with
:func:`edlogic.rational.to_fraction`, so ints, decimal literals and
``"p/q"`` strings are all accepted on input.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .decision import Model, SatResult, index_set, parse_index_set
from .evidence import MassFunction, SetFunction
from .product import ProductSpace, build_product
from .rational import fmt, to_fraction
from .space import Frame, MetricProbSpace, PartitionMetric, validate_space

# spaces above this size with a partition metric are written as "blocks"
DENSE_WRITE_LIMIT = 512


def _load_json_numbers(text):
    # keep decimal literals exact instead of going through float
    return json.loads(text, parse_float=lambda s: to_fraction(s))


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return _load_json_numbers(fh.read())


def write_json(path, obj):
    text = json.dumps(obj, indent=2) + "\n"
    if path in (None, "-"):
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


# spaces

def space_from_json(obj) -> MetricProbSpace:
    for key in ("points", "prob"):
        if key not in obj:
            raise ValueError(f"space file is missing {key!r}")
    if "metric" in obj:
        return validate_space(obj["points"], obj["metric"], obj["prob"])
    if "blocks" in obj:
        return validate_space(obj["points"], PartitionMetric(obj["blocks"]), obj["prob"])
    raise ValueError("space file needs 'metric' (or 'blocks')")


def space_to_json(space: MetricProbSpace) -> dict:
    out = {"points": list(space.points)}
    if isinstance(space.metric, PartitionMetric) and len(space) > DENSE_WRITE_LIMIT:
        out["blocks"] = list(space.metric.blocks)
    else:
        out["metric"] = [[fmt(v) for v in row] for row in space.metric.to_rows()]
    out["prob"] = [fmt(p) for p in space.prob]
    return out


def model_from_json(obj, valuation=None) -> Model:
    space = space_from_json(obj)
    if valuation is None:
        valuation = obj.get("valuation")
    if valuation is None:
        raise ValueError("no valuation given (add a 'valuation' map or a valuation file)")
    if "valuation" in valuation and isinstance(valuation["valuation"], dict):
        vocab = valuation.get("vocabulary")
        valuation = valuation["valuation"]
    else:
        vocab = obj.get("vocabulary")
    return Model.from_mapping(space, valuation, vocab)


def model_to_json(model: Model) -> dict:
    out = space_to_json(model.space)
    out["valuation"] = {p: sorted(v) for p, v in zip(model.space.points, model.valuation)}
    out["vocabulary"] = sorted(model.vocabulary)
    return out


# set functions and mass functions

def subset_key(members) -> str:
    return ",".join(sorted(members))


def _parse_key(frame: Frame, key: str) -> int:
    names = [p.strip() for p in key.split(",") if p.strip()]
    return frame.mask(names)


def setfunction_to_json(sf) -> dict:
    values = sf.values if isinstance(sf, SetFunction) else sf.mass
    frame = sf.frame
    return {"points": list(frame.points),
            "values": {subset_key(frame.members(m)): fmt(v) for m, v in enumerate(values)}}


def setfunction_from_json(obj) -> SetFunction:
    frame = Frame(tuple(obj["points"]))
    values = [None] * (1 << len(frame))
    for key, v in obj["values"].items():
        values[_parse_key(frame, key)] = to_fraction(v)
    missing = [frame.members(m) for m, v in enumerate(values) if v is None]
    if missing:
        raise ValueError(f"set function has no value for {len(missing)} subsets, "
                         f"e.g. {subset_key(missing[0]) or '(empty)'}")
    return SetFunction(frame, tuple(values))


def mass_from_json(obj) -> MassFunction:
    """Mass files may be sparse; absent subsets carry zero mass."""
    frame = Frame(tuple(obj["points"]))
    mass = [Fraction(0)] * (1 << len(frame))
    for key, v in obj["values"].items():
        mass[_parse_key(frame, key)] += to_fraction(v)
    return MassFunction(frame, tuple(mass))


# products

def product_from_json(obj, **kw) -> ProductSpace:
    comps = [space_from_json(c) for c in obj["components"]]
    return build_product(comps, obj.get("joint"), **kw)


def product_to_json(ps: ProductSpace, joint=True) -> dict:
    out = {"components": [space_to_json(c) for c in ps.components]}
    if joint:
        out["joint"] = {name: fmt(p) for name, p in zip(ps.space.points, ps.space.prob) if p}
    return out


# witnesses

def witness_to_json(res: SatResult, with_model=False) -> dict:
    if not res.consistent:
        return {"verdict": "inconsistent"}
    basis = res.basis
    out = {
        "verdict": "consistent",
        "atoms": {str(a + 1): sorted(basis.true_props(a)) for a in range(basis.n)},
        "props": list(basis.props),
        "e": {index_set(I): fmt(v) for I, v in sorted(res.e.items())},
        "mass": {index_set(J): fmt(v) for J, v in sorted(res.mass.items()) if v},
    }
    if with_model and res.model is not None:
        out["model"] = model_to_json(res.model)
    return out


def witness_e_from_json(obj) -> dict[int, Fraction]:
    return {parse_index_set(k): to_fraction(v) for k, v in obj["e"].items()}


def witness_mass_from_json(obj) -> dict[int, Fraction]:
    return {parse_index_set(k): to_fraction(v) for k, v in obj["mass"].items()}

