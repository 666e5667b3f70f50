"""Canonical JSON encoding of spaces, point sets, certificates and reports.

All encoders emit plain dicts of JSON types; ``dumps`` fixes key order so
identical values serialize to identical bytes.  Floats rely on Python's
shortest-round-trip repr, so every emitted document re-parses to an equal
value.
"""

from __future__ import annotations

import json

import numpy as np

from .certify import (
    BsaCertificate,
    Functional,
    MarginReport,
    PairCertificate,
    PointSet,
    Verdict,
)
from .errors import BsaError
from .families import AuerbachSystem, NamedFamily
from .search import SearchConfig
from .spaces import INF, LpSpace, PolytopeSpace, is_inf


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def space_to_dict(space) -> dict:
    if isinstance(space, LpSpace):
        return {
            "type": "lp",
            "p": "inf" if is_inf(space.p) else space.p,
            "dim": space.dim,
        }
    if isinstance(space, PolytopeSpace):
        return {"type": "polytope", "vertices": space.vertices.tolist()}
    raise BsaError(f"cannot encode space {space!r}")


def space_from_dict(data: dict):
    try:
        kind = data["type"]
        if kind == "lp":
            p = data["p"]
            return LpSpace(INF if p == "inf" else float(p), int(data["dim"]))
        if kind == "polytope":
            return PolytopeSpace(np.asarray(data["vertices"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise BsaError(f"bad space document: {exc}") from exc
    raise BsaError(f"unknown space type {kind!r}")


def point_set_to_dict(ps: PointSet) -> dict:
    return {"space": space_to_dict(ps.space), "points": ps.points.tolist()}


def point_set_from_dict(data: dict) -> PointSet:
    try:
        space = space_from_dict(data["space"])
        points = np.asarray(data["points"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise BsaError(f"bad point set document: {exc}") from exc
    return PointSet(space, points)


def certificate_to_dict(cert: BsaCertificate) -> dict:
    pairs = [
        {
            "upper": pc.upper_index,
            "lower": pc.lower_index,
            "f": pc.functional.coeffs.tolist(),
            "margin": pc.margin,
        }
        for _, pc in sorted(cert.pairs.items())
    ]
    return {
        "space": space_to_dict(cert.set.space),
        "points": cert.set.points.tolist(),
        "pairs": pairs,
        "c1": cert.c1,
        "c2": cert.c2,
        "d": cert.d,
    }


def certificate_from_dict(data: dict) -> BsaCertificate:
    ps = point_set_from_dict(data)
    pairs = {}
    try:
        for rec in data["pairs"]:
            up, lo = int(rec["upper"]), int(rec["lower"])
            func = Functional.on(ps.space, np.asarray(rec["f"], dtype=float))
            key = (up, lo) if up < lo else (lo, up)
            pairs[key] = PairCertificate(up, lo, func, float(rec["margin"]))
        return BsaCertificate(
            ps, pairs, float(data["c1"]), float(data["c2"]), float(data["d"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BsaError(f"bad certificate document: {exc}") from exc


def report_to_dict(report: MarginReport) -> dict:
    return {
        "margins": [
            {"i": i, "j": j, "margin": m}
            for (i, j), m in sorted(report.margins.items())
        ],
        "d": report.d,
        "separation": report.separation,
        "c1": report.c1,
        "ka_lower": report.ka_lower,
        "k_lower": report.k_lower,
    }


def verdict_to_dict(verdict: Verdict) -> dict:
    return {
        "valid": verdict.valid,
        "violations": [
            {"pair": list(v["pair"]), "inequality": v["inequality"], "slack": v["slack"]}
            for v in verdict.violations
        ],
    }


def family_to_dict(family: NamedFamily) -> dict:
    doc = certificate_to_dict(family.certificate)
    doc["provenance"] = family.provenance
    extras = {}
    for key, value in family.extras.items():
        if isinstance(value, dict) and all(
            isinstance(k, tuple) for k in value
        ):
            extras[key] = [
                {"i": i, "j": j, "value": float(v)}
                for (i, j), v in sorted(value.items())
            ]
        elif isinstance(value, (int, float)):
            extras[key] = value
    if extras:
        doc["extras"] = extras
    return doc


def system_to_dict(system: AuerbachSystem) -> dict:
    return {
        "space": space_to_dict(system.space),
        "vectors": system.vectors.tolist(),
        "functionals": system.functionals.tolist(),
    }


def config_from_dict(data: dict) -> SearchConfig:
    allowed = {
        "seed", "restarts", "iterations",
        "initial_temperature", "decay", "tolerance",
    }
    unknown = set(data) - allowed
    if unknown:
        raise BsaError(f"unknown search config keys: {sorted(unknown)}")
    return SearchConfig(**data)


def config_to_dict(config: SearchConfig) -> dict:
    return {
        "seed": config.seed,
        "restarts": config.restarts,
        "iterations": config.iterations,
        "initial_temperature": config.initial_temperature,
        "decay": config.decay,
        "tolerance": config.tolerance,
    }
