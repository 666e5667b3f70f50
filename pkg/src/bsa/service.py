"""FastAPI service exposing certification, construction, search and oracles.

The service is stateless: every request carries its full problem description
as JSON and responses embed complete certificates, so results can be re-fed
and re-verified.  The CLI drives these endpoints as a thin HTTP client.
"""

from __future__ import annotations

import time
from typing import Literal, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import families, jsonio, search as search_mod
from .certify import certify_set, check_certificate
from .errors import BsaError, NumericalBreakdown
from .spaces import INF, PolytopeSpace, norm_eval, validate_space

app = FastAPI(title="bsa", description="bounded separated antipodal certificates")


class ValidateRequest(BaseModel):
    space: dict


class CertifyRequest(BaseModel):
    set: dict
    tol: float = 1e-9


class ConstructRequest(BaseModel):
    family: Literal[
        "lp-basis", "summing", "auerbach", "strict-convex",
        "plus-minus", "renorm-equilateral", "biorthogonal",
    ]
    p: Optional[float | str] = None
    n: Optional[int] = None
    seed: int = 0
    space: Optional[dict] = None
    vectors: Optional[list] = None
    functionals: Optional[list] = None


class SearchRequest(BaseModel):
    space: dict
    mode: Literal["ka", "antipodal", "separated"]
    config: dict = Field(default_factory=dict)
    count: int = 4
    pool: int = 200


class OracleRequest(BaseModel):
    set: dict
    pair: tuple[int, int]
    grid: int = 360


@app.exception_handler(BsaError)
async def _bsa_error(request: Request, exc: BsaError):
    status = 500 if isinstance(exc, NumericalBreakdown) else 422
    return JSONResponse(
        status_code=status,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.post("/validate")
def validate(req: ValidateRequest):
    space = validate_space(jsonio.space_from_dict(req.space))
    return {"space": jsonio.space_to_dict(space)}


@app.post("/certify")
def certify(req: CertifyRequest):
    doc = req.set
    # accept construct output piped straight in
    if "family" in doc and "points" not in doc:
        doc = doc["family"]
    ps = jsonio.point_set_from_dict(doc)
    report, cert = certify_set(ps)
    verdict = check_certificate(cert, req.tol)
    table = []
    for key in sorted(cert.pairs):
        pc = cert.pairs[key]
        diff = ps.points[pc.upper_index] - ps.points[pc.lower_index]
        table.append({
            "upper": pc.upper_index,
            "lower": pc.lower_index,
            "margin": pc.margin,
            "distance": norm_eval(ps.space, diff),
        })
    return {
        "report": jsonio.report_to_dict(report),
        "certificate": jsonio.certificate_to_dict(cert),
        "verdict": jsonio.verdict_to_dict(verdict),
        "table": table,
    }


def _require(value, name):
    if value is None:
        raise BsaError(f"construct requires --{name} for this family")
    return value


@app.post("/construct")
def construct(req: ConstructRequest):
    name = req.family
    if name == "lp-basis":
        p = _require(req.p, "p")
        p = INF if p == "inf" else float(p)
        fam = families.lp_basis_family(p, _require(req.n, "n"))
        return {"family": jsonio.family_to_dict(fam)}
    if name == "summing":
        fam = families.summing_family(_require(req.n, "n"))
        return {"family": jsonio.family_to_dict(fam)}

    space = jsonio.space_from_dict(_require(req.space, "space"))
    if name == "auerbach":
        system = families.auerbach_ascent(space, req.seed)
        return {"system": jsonio.system_to_dict(system)}
    if name == "strict-convex":
        system = families.auerbach_ascent(space, req.seed)
        fam = families.strict_convex_family(system)
        return {"family": jsonio.family_to_dict(fam)}
    if name == "plus-minus":
        system = families.auerbach_ascent(space, req.seed)
        fam = families.plus_minus_family(system)
        return {"family": jsonio.family_to_dict(fam)}
    if name == "renorm-equilateral":
        if not isinstance(space, PolytopeSpace):
            raise BsaError("renorm-equilateral requires a polytope base space")
        base = validate_space(space)
        system = families.auerbach_ascent(base, req.seed)
        new_space, fam = families.renorm_equilateral_family(base, system)
        return {
            "space": jsonio.space_to_dict(new_space),
            "family": jsonio.family_to_dict(fam),
        }
    # biorthogonal
    fam = families.normalize_biorthogonal(
        _require(req.vectors, "vectors"),
        _require(req.functionals, "functionals"),
        space,
    )
    return {"family": jsonio.family_to_dict(fam)}


@app.post("/search")
def run_search(req: SearchRequest):
    space = jsonio.space_from_dict(req.space)
    config = jsonio.config_from_dict(req.config)
    started = time.monotonic()
    if req.mode == "ka":
        best_d, cert, report = search_mod.ka_lower_bound(space, req.count, config)
        result = {
            "best_d": best_d,
            "certificate": jsonio.certificate_to_dict(cert),
            "report": jsonio.report_to_dict(report),
        }
        certified = True
    elif req.mode == "antipodal":
        found, witness = search_mod.max_antipodal_search(space, req.count, config)
        result = {
            "found": found,
            "set": jsonio.point_set_to_dict(witness) if found else None,
        }
        certified = found
    else:
        ps = search_mod.greedy_separated(space, req.count, req.pool, config.seed)
        from .certify import separation

        result = {
            "set": jsonio.point_set_to_dict(ps),
            "separation": separation(ps),
        }
        certified = True
    result["config"] = jsonio.config_to_dict(config)
    result["wall_time"] = time.monotonic() - started
    result["certified"] = certified
    return result


@app.post("/oracle")
def oracle(req: OracleRequest):
    ps = jsonio.point_set_from_dict(req.set)
    i, j = req.pair
    margin = max(
        search_mod.brute_force_margin(ps, j, i, req.grid),
        search_mod.brute_force_margin(ps, i, j, req.grid),
    )
    return {"margin": margin, "pair": [i, j], "grid": req.grid}
