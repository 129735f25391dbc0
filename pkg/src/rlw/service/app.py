"""FastAPI service exposing the lattice workbench.

Every computational route wraps the core package and returns either a
verifiable result document (see :mod:`rlw.documents`) or a plain JSON
payload for formula-style queries.  Domain errors map to HTTP 400.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import documents as docs
from .. import structures
from ..extremal import (
    ClaimId,
    color_cap_b2,
    color_cap_c3,
    e_poset,
    g_poset,
    gst,
    gst_verify,
    is_uilb,
    lu_max,
    lubell,
    rational_str,
    theorem_value,
)
from ..lattice import FamilyMask, LatticeError, format_subset, parse_subset
from ..patterns import PatternError, make_pattern
from ..search import (
    compute_gr,
    compute_ramsey,
    compute_rr,
    decode_model,
    exists_coloring,
    export_dimacs,
    parse_model,
)
from .models import (
    BlobRequest,
    CapsRequest,
    ClaimRequest,
    ClassifyRequest,
    ConstructRequest,
    DimacsDecodeRequest,
    DimacsExportRequest,
    EPosetRequest,
    GPosetRequest,
    GenerateRequest,
    GstRequest,
    LuMaxRequest,
    LubellRequest,
    NumberRequest,
    SearchRequest,
    SpecModel,
    TheoremRequest,
    UilbRequest,
    VerifyRequest,
)


def _spec(model: SpecModel):
    return docs.spec_from_json(model.model_dump())


def _claim(name):
    try:
        return ClaimId(name)
    except ValueError as exc:
        raise LatticeError(f"unknown claim {name!r}") from exc


def create_app():
    app = FastAPI(title="rlw", version=docs.TOOL_VERSION)

    @app.exception_handler(LatticeError)
    async def _domain_error(_request: Request, exc: LatticeError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(PatternError)
    async def _pattern_error(_request: Request, exc: PatternError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": docs.TOOL_VERSION}

    @app.post("/search")
    def search(req: SearchRequest):
        spec = _spec(req.spec)
        result = exists_coloring(spec, budget=req.budget)
        return docs.document_for_search(spec, result)

    @app.post("/number")
    def number(req: NumberRequest):
        kind = req.kind.lower()
        p = make_pattern(req.p)
        if kind == "r":
            if req.k is None:
                raise LatticeError("number r needs k")
            res = compute_ramsey(
                p, req.k, mode=req.mode, n_max=req.n_max or 6, budget=req.budget
            )
            template = {
                "rainbow": None,
                "mono": req.p,
                "palette": "at_most",
                "k": req.k,
                "mode": req.mode,
            }
        elif kind == "rr":
            if req.q is None:
                raise LatticeError("number rr needs q")
            res = compute_rr(
                make_pattern(req.q), p, n_max=req.n_max or 5, budget=req.budget
            )
            template = {
                "rainbow": req.q,
                "mono": req.p,
                "palette": "unbounded",
                "k": None,
                "mode": "induced",
            }
        elif kind == "gr":
            if req.q is None or req.k is None or req.window is None:
                raise LatticeError("number gr needs q, k, and window")
            res = compute_gr(
                make_pattern(req.q), p, req.k, tuple(req.window), budget=req.budget
            )
            template = {
                "rainbow": req.q,
                "mono": req.p,
                "palette": "exact",
                "k": req.k,
                "mode": "induced",
            }
        else:
            raise LatticeError(f"unknown number kind {req.kind!r}")
        return docs.document_for_number(template, res)

    @app.post("/classify")
    def classify(req: ClassifyRequest):
        c = docs.coloring_from_json(req.coloring.model_dump())
        which = req.which.lower()
        if which == "c3":
            inst = structures.C3Shape() if structures.check_c3_shape(c) else None
        elif which == "v2":
            inst = structures.classify_v2(c)
        elif which == "b2":
            inst = structures.classify_b2(c)
        else:
            raise LatticeError(f"unknown classifier {req.which!r}")
        return docs.document_for_classification(c, which, inst)

    @app.post("/generate")
    def generate(req: GenerateRequest):
        inst, n = structures.instance_from_json(req.instance)
        c = structures.generate_structure(
            n, inst, palette=req.palette, free=req.free, top=req.top
        )
        return docs.document_for_generation(n, inst, c)

    @app.post("/construct")
    def construct(req: ConstructRequest):
        if req.which == "gr-c3":
            c = structures.lower_bound_gr_c3(req.s, req.k)
        elif req.which == "gr-v2":
            c = structures.lower_bound_gr_v2(req.s, req.k)
        else:
            raise LatticeError(f"unknown construction {req.which!r}")
        return {"n": c.n, "coloring": docs.coloring_to_json(c)}

    @app.post("/blob")
    def blob(req: BlobRequest):
        blocks = structures.blob_partition(req.m, req.n0)
        return {
            "n": req.m * req.n0 + req.m,
            "blocks": [
                {
                    "label": format_subset(label),
                    "lo": format_subset(lo),
                    "hi": format_subset(hi),
                }
                for label, lo, hi in blocks
            ],
        }

    @app.post("/extremal/lubell")
    def extremal_lubell(req: LubellRequest):
        fam = FamilyMask.from_members(
            req.n, [parse_subset(t, req.n) for t in req.family]
        )
        return {"n": req.n, "lubell": rational_str(lubell(req.n, fam))}

    @app.post("/extremal/lu")
    def extremal_lu(req: LuMaxRequest):
        value, witness = lu_max(req.n, make_pattern(req.p))
        return {
            "n": req.n,
            "lu_max": rational_str(value),
            "witness": [format_subset(s) for s in witness.canonical_members()],
        }

    @app.post("/extremal/e")
    def extremal_e(req: EPosetRequest):
        res = e_poset(make_pattern(req.p), req.n_probe)
        cert = None
        if res.certificate is not None:
            cert = {
                "n": res.certificate.n,
                "lo_level": res.certificate.lo_level,
                "hi_level": res.certificate.hi_level,
                "image": [format_subset(s) for s in res.certificate.image],
            }
        return {
            "value": res.value,
            "qualifier": res.qualifier,
            "failing_window": cert,
        }

    @app.post("/extremal/g")
    def extremal_g(req: GPosetRequest):
        return {"value": g_poset(make_pattern(req.q))}

    @app.post("/extremal/uilb")
    def extremal_uilb(req: UilbRequest):
        return {
            "value": is_uilb(make_pattern(req.p), req.n_max),
            "qualifier": f"verified up to n={req.n_max}",
        }

    @app.post("/extremal/gst")
    def extremal_gst(req: GstRequest):
        out = {"value": gst(req.v, req.n)}
        if req.verify:
            out["verified"] = gst_verify(req.v, req.n)
        return out

    @app.post("/extremal/caps")
    def extremal_caps(req: CapsRequest):
        out = {"n": req.n}
        if req.n >= 2:
            out["c3"] = color_cap_c3(req.n)
        if req.n > 2:
            out["b2"] = color_cap_b2(req.n)
        return out

    @app.post("/extremal/theorem")
    def extremal_theorem(req: TheoremRequest):
        return theorem_value(_claim(req.claim), req.params)

    @app.post("/claim")
    def claim(req: ClaimRequest):
        report = docs.verify_claim(_claim(req.claim), req.params, budget=req.budget)
        return docs.document_for_claim(report)

    @app.post("/dimacs/export", response_class=PlainTextResponse)
    def dimacs_export(req: DimacsExportRequest):
        return export_dimacs(_spec(req.spec)).text

    @app.post("/dimacs/decode")
    def dimacs_decode(req: DimacsDecodeRequest):
        spec = _spec(req.spec)
        c = decode_model(spec, parse_model(req.model_text))
        return {
            "coloring": docs.coloring_to_json(c),
            "accepted": spec.accepts(c),
        }

    @app.post("/verify")
    def verify(req: VerifyRequest):
        return docs.verify_document(req.document)

    return app
