"""Input document schema and parsing.

The on-disk format is UTF-8 JSON, schema version "1".  Rational numbers
travel as strings "p/q" (or plain integers) so nothing is rounded on the
wire; vectors are arrays of rationals.  Unknown fields are rejected.
"""

from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .geom import Cone, unit_vec, vec
from .quad import (
    AffinePowerWeight,
    ConstantWeight,
    DHDensity,
    DHFactor,
    Polynomial,
    PolynomialWeight,
    WeightFn,
)
from .geom import AffineForm
from .rootsys import RootSystem, dh_density
from .spherical import ColoredConeData, DivisorRecord, SphericalInput


class SchemaValidationError(Exception):
    """Input document malformed: schema violation or unparsable rational."""


_RAT = {
    "oneOf": [
        {"type": "string", "pattern": r"^-?\d+(/[1-9]\d*)?$"},
        {"type": "integer"},
    ]
}
_RATVEC = {"type": "array", "items": _RAT}
_RATMAT = {"type": "array", "items": _RATVEC}

_DIVISOR = {
    "type": "object",
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "rho": _RATVEC,
        "coeff": _RAT,
        "is_color": {"type": "boolean"},
    },
    "required": ["name", "rho", "coeff", "is_color"],
    "additionalProperties": False,
}

_CONE = {
    "type": "object",
    "properties": {
        "generators": _RATMAT,
        "divisors": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["generators", "divisors"],
    "additionalProperties": False,
}

INPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "kstab input document, schema version 1",
    "type": "object",
    "properties": {
        "schema_version": {"const": "1"},
        "variety": {
            "type": "object",
            "properties": {
                "rank": {"type": "integer", "minimum": 1},
                "dim_x": {"type": "integer", "minimum": 1},
                "divisors": {"type": "array", "items": _DIVISOR, "minItems": 1},
                "anticanonical_divisors": {"type": "array", "items": _DIVISOR,
                                           "minItems": 1},
                "fan": {"type": "array", "items": _CONE, "minItems": 1},
                "valuation_cone": {
                    "oneOf": [
                        {"const": "all"},
                        {
                            "type": "object",
                            "properties": {"generators": _RATMAT},
                            "required": ["generators"],
                            "additionalProperties": False,
                        },
                    ]
                },
                "projection": _RATMAT,
                "complete": {"type": "boolean"},
            },
            "required": ["rank", "dim_x", "divisors", "anticanonical_divisors",
                         "fan", "valuation_cone"],
            "additionalProperties": False,
        },
        "root_system": {
            "type": "object",
            "properties": {
                "type": {"enum": ["A", "B", "C", "D", "G"]},
                "rank": {"type": "integer", "minimum": 1, "maximum": 8},
                "active_roots": {
                    "oneOf": [
                        {"const": "all"},
                        {"type": "array",
                         "items": {"type": "integer", "minimum": 0}},
                    ]
                },
                "chi": _RATVEC,
                "embed": _RATMAT,
                "squared": {"type": "boolean"},
            },
            "required": ["type", "rank", "active_roots", "chi", "embed", "squared"],
            "additionalProperties": False,
        },
        "dh": {
            "type": "object",
            "properties": {
                "factors": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "normal": _RATVEC,
                            "offset": _RAT,
                            "multiplicity": {"type": "integer", "minimum": 1},
                            "rho_pair": {"oneOf": [_RAT, {"type": "null"}]},
                        },
                        "required": ["normal", "offset", "multiplicity"],
                        "additionalProperties": False,
                    },
                },
                "normalization": _RAT,
            },
            "required": ["factors"],
            "additionalProperties": False,
        },
        "weight_fn": {
            "oneOf": [
                {
                    "type": "object",
                    "properties": {"constant": _RAT},
                    "required": ["constant"],
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "properties": {
                        "polynomial": {
                            "type": "object",
                            "properties": {
                                "dim": {"type": "integer", "minimum": 0},
                                "terms": {
                                    "type": "array",
                                    "items": {
                                        "type": "object",
                                        "properties": {
                                            "exponent": {
                                                "type": "array",
                                                "items": {"type": "integer",
                                                          "minimum": 0},
                                            },
                                            "coeff": _RAT,
                                        },
                                        "required": ["exponent", "coeff"],
                                        "additionalProperties": False,
                                    },
                                },
                            },
                            "required": ["dim", "terms"],
                            "additionalProperties": False,
                        }
                    },
                    "required": ["polynomial"],
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "properties": {
                        "affine_power": {
                            "type": "object",
                            "properties": {
                                "xi": _RATVEC,
                                "a": _RAT,
                                "exponent": {"type": "number"},
                            },
                            "required": ["xi", "a", "exponent"],
                            "additionalProperties": False,
                        }
                    },
                    "required": ["affine_power"],
                    "additionalProperties": False,
                },
            ]
        },
    },
    "required": ["schema_version", "variety"],
    "additionalProperties": False,
}


def _fraction(x) -> Fraction:
    try:
        return Fraction(x) if isinstance(x, int) else Fraction(str(x))
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaValidationError(f"bad rational {x!r}: {e}") from e


def _ratvec(xs):
    return vec([_fraction(x) for x in xs])


def validate_document(doc: dict):
    try:
        jsonschema.validate(doc, INPUT_SCHEMA)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "(root)"
        raise SchemaValidationError(f"at {path}: {e.message}") from e
    if "root_system" in doc and "dh" in doc:
        raise SchemaValidationError(
            "give either root_system or dh, not both")


def parse_weight_fn(block: dict | None) -> WeightFn | None:
    if block is None:
        return None
    if "constant" in block:
        return ConstantWeight(_fraction(block["constant"]))
    if "polynomial" in block:
        p = block["polynomial"]
        terms = {tuple(t["exponent"]): _fraction(t["coeff"]) for t in p["terms"]}
        for e in terms:
            if len(e) != p["dim"]:
                raise SchemaValidationError("polynomial exponent length != dim")
        return PolynomialWeight(Polynomial(p["dim"], terms))
    if "affine_power" in block:
        ap = block["affine_power"]
        return AffinePowerWeight(_ratvec(ap["xi"]), _fraction(ap["a"]),
                                 ap["exponent"])
    raise SchemaValidationError("unrecognized weight_fn block")


def parse_input_document(doc: dict) -> tuple[SphericalInput, WeightFn | None]:
    validate_document(doc)
    var = doc["variety"]
    rank = var["rank"]

    def records(key):
        recs = []
        names = set()
        for d in var[key]:
            if len(d["rho"]) != rank:
                raise SchemaValidationError(f"{key}: rho length != rank")
            if d["name"] in names:
                raise SchemaValidationError(f"{key}: duplicate name {d['name']!r}")
            names.add(d["name"])
            recs.append(DivisorRecord(d["name"], _ratvec(d["rho"]),
                                      _fraction(d["coeff"]), d["is_color"]))
        return tuple(recs)

    divisors = records("divisors")
    anticanonical = records("anticanonical_divisors")

    fan = []
    for c in var["fan"]:
        gens = tuple(_ratvec(g) for g in c["generators"])
        for g in gens:
            if len(g) != rank:
                raise SchemaValidationError("fan generator length != rank")
        fan.append(ColoredConeData(gens, tuple(c["divisors"])))

    vcone = var["valuation_cone"]
    if vcone == "all":
        valuation_cone = Cone.full_space(rank)
    else:
        valuation_cone = Cone(rank, [_ratvec(g) for g in vcone["generators"]])

    if "projection" in var:
        projection = tuple(_ratvec(row) for row in var["projection"])
        for row in projection:
            if len(row) != rank:
                raise SchemaValidationError("projection row length != rank")
    else:
        projection = tuple(unit_vec(i, rank) for i in range(rank))

    if "root_system" in doc:
        rsb = doc["root_system"]
        rs = RootSystem(rsb["type"], rsb["rank"])
        active = None if rsb["active_roots"] == "all" else rsb["active_roots"]
        if active is not None:
            nroots = len(rs.positive_roots_euclidean)
            for i in active:
                if i >= nroots:
                    raise SchemaValidationError(
                        f"active root index {i} out of range for {rs.cartan_type}")
        embed = [_ratvec(r) for r in rsb["embed"]]
        if len(embed) != rs.rank or any(len(r) != rank for r in embed):
            raise SchemaValidationError("embed must be (root rank) x (variety rank)")
        chi = _ratvec(rsb["chi"])
        if len(chi) != rs.rank:
            raise SchemaValidationError("chi length != root system rank")
        density = dh_density(rs, active, chi, embed, rsb["squared"])
    elif "dh" in doc:
        factors = []
        for f in doc["dh"]["factors"]:
            normal = _ratvec(f["normal"])
            if len(normal) != rank:
                raise SchemaValidationError("dh factor normal length != rank")
            rho_pair = f.get("rho_pair")
            factors.append(DHFactor(
                AffineForm(normal, _fraction(f["offset"])),
                f["multiplicity"],
                _fraction(rho_pair) if rho_pair is not None else None))
        normalization = _fraction(doc["dh"].get("normalization", 1))
        density = DHDensity(rank, tuple(factors), normalization)
    else:
        density = DHDensity(rank, ())

    si = SphericalInput(
        rank=rank,
        dim_x=var["dim_x"],
        divisors=divisors,
        anticanonical_divisors=anticanonical,
        fan=tuple(fan),
        valuation_cone=valuation_cone,
        dh=density,
        projection=projection,
        complete=var.get("complete", True),
    )
    return si, parse_weight_fn(doc.get("weight_fn"))


def load_input(path: str) -> tuple[SphericalInput, WeightFn | None]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaValidationError(f"invalid JSON: {e}") from e
    return parse_input_document(doc)
