"""FastAPI application exposing every operation, plus the in-process
handlers the CLI dispatches to.

Each handler takes a validated request model and returns a response model
whose `result` payload is already JSON-shaped; the HTTP layer adds
nothing beyond validation and error mapping (precondition and precision
failures are 422, certification failures 500).
"""

from __future__ import annotations

import re
from fractions import Fraction

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..bounds import (
    BoundReport,
    avg_rholog_bound,
    curve_image_bound,
    density_bounds,
    exact_delta_sum,
)
from ..chabauty import (
    GoodReductionCurve,
    disk_report,
    rholog_report,
    rholog_single_disk_curve,
)
from ..errors import CertificationError, InvalidCurve, PadicChabautyError
from ..expectation import (
    SampleConfig,
    case_frequencies,
    exact_truncated_average,
    mc_average_smooth,
    x0_statistics,
)
from ..model import CurveInput, height, make_decent_model
from ..projred import image_of_poly_map, image_of_series_on_pzp
from ..series import SeriesVector, TruncatedSeries, newton_polygon, weierstrass_prepare
from . import serialize as ser
from .schemas import (
    BoundsRequest,
    CurveSpec,
    DisksRequest,
    ExpectCasesRequest,
    ExpectExactRequest,
    ExpectMcRequest,
    ExpectResponse,
    ExpectX0Request,
    GenericResponse,
    HeightRequest,
    ModelRequest,
    ModelResponse,
    NewtonRequest,
    P1ImageRequest,
    RhologRequest,
    SeriesImageRequest,
    WprepRequest,
)


def _fraction(text) -> Fraction:
    return Fraction(str(text).strip())


def _fractions(items):
    return [_fraction(x) for x in items]


def _ints(items):
    out = []
    for x in items:
        f = _fraction(x)
        if f.denominator != 1:
            raise InvalidCurve(f"expected an integer, got {x}")
        out.append(f.numerator)
    return out


_TERM = re.compile(r"^(\d+)?(x(\d+)?)?(y(2)?)?$")


def parse_curve_shorthand(text):
    """Parse forms like "y2+y=x7+x+1" into ascending (q, r) lists.

    The left side must be y2 plus optional q(x)*y terms; the right side is
    a polynomial in x.  Exponents are written directly after the variable.
    """
    compact = text.replace(" ", "").replace("^", "").lower()
    if "=" not in compact:
        raise InvalidCurve("curve shorthand needs '='")
    lhs, rhs = compact.split("=", 1)

    def terms(side):
        side = side.replace("-", "+-")
        return [t for t in side.split("+") if t]

    q = {}
    saw_y2 = False
    for term in terms(lhs):
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("-")
        m = _TERM.match(body)
        if not m:
            raise InvalidCurve(f"cannot parse term {term!r}")
        coeff = sign * int(m.group(1) or 1)
        xpow = (int(m.group(3) or 1)) if m.group(2) else 0
        if m.group(5):  # y2
            if xpow or coeff != 1:
                raise InvalidCurve("the y^2 term must be bare")
            saw_y2 = True
        elif m.group(4):  # q(x) * y
            q[xpow] = q.get(xpow, 0) + coeff
        else:
            raise InvalidCurve(f"x-only term {term!r} belongs on the right side")
    if not saw_y2:
        raise InvalidCurve("left side needs a y2 term")
    r = {}
    for term in terms(rhs):
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("-")
        m = _TERM.match(body)
        if not m or m.group(4):
            raise InvalidCurve(f"cannot parse term {term!r}")
        coeff = sign * int(m.group(1) or 1)
        xpow = (int(m.group(3) or 1)) if m.group(2) else 0
        r[xpow] = r.get(xpow, 0) + coeff
    qd = max(q) if q else 0
    rd = max(r) if r else 0
    q_list = [q.get(i, 0) for i in range(qd + 1)]
    r_list = [r.get(i, 0) for i in range(rd + 1)]
    return q_list, r_list


def _resolve_curve(spec: CurveSpec, prime, genus) -> GoodReductionCurve:
    if spec.curve:
        q, r = parse_curve_shorthand(spec.curve)
    elif spec.r is not None:
        q = _ints(spec.q) if spec.q else [0]
        r = _ints(spec.r)
    elif spec.f is not None:
        q = [0]
        r = _ints(spec.f)
    else:
        raise InvalidCurve("no curve given: use curve / (q, r) / f")
    deg = len(r) - 1
    if deg % 2 == 0 or deg < 3:
        raise InvalidCurve(f"right side must have odd degree >= 3, got {deg}")
    g = (deg - 1) // 2
    if genus is not None and genus != g:
        raise InvalidCurve(f"genus {genus} does not match degree {deg}")
    return GoodReductionCurve.from_qr(g, q, r, prime=prime)


# ----------------------------------------------------------------- handlers


def handle_model(req: ModelRequest) -> ModelResponse:
    coeffs = _ints(req.f)
    if len(coeffs) != 2 * req.genus + 2 or coeffs[0] != 1:
        raise InvalidCurve(
            "f must list 2g+2 coefficients, highest degree first, leading 1"
        )
    curve = CurveInput(req.prime, req.genus, tuple(coeffs[1:]))
    model = make_decent_model(curve, depth_guard=req.depth_guard)
    return ModelResponse(result=ser.model_view(model))


def handle_expect_mc(req: ExpectMcRequest) -> ExpectResponse:
    cfg = SampleConfig(
        prime=req.prime,
        genus=req.genus,
        trials=req.trials,
        seed=req.seed,
        depth_guard=req.depth_guard,
        digit_budget=req.digit_budget,
    )
    res = mc_average_smooth(cfg, keep_trials=req.keep_trials, threads=req.threads)
    view = ser.mc_view(res)
    if req.keep_trials:
        view["per_trial"] = [list(row) for row in res.per_trial]
    return ExpectResponse(command="expect mc", result=view)


def handle_expect_exact(req: ExpectExactRequest) -> ExpectResponse:
    res = exact_truncated_average(req.prime, req.genus, req.k)
    return ExpectResponse(command="expect exact", result=ser.enum_view(res))


def handle_expect_cases(req: ExpectCasesRequest) -> ExpectResponse:
    res = case_frequencies(req.prime, req.genus, req.trials, req.seed)
    return ExpectResponse(command="expect cases", result=ser.case_frequencies_view(res))


def handle_expect_x0(req: ExpectX0Request) -> ExpectResponse:
    res = x0_statistics(req.prime, req.genus, req.trials, req.seed, req.depth_guard)
    return ExpectResponse(command="expect x0", result=ser.column_stats_view(res))


def handle_rholog(req: RhologRequest) -> GenericResponse:
    curve = _resolve_curve(req, req.prime, req.genus)
    if curve.prime == 2:
        res = rholog_single_disk_curve(curve, T=req.truncation, M=req.precision)
    else:
        res = rholog_report(curve, T=req.truncation, M=req.precision)
    return GenericResponse(
        command="rholog", result=ser.rholog_view(res, req.include_certificates)
    )


def handle_disks(req: DisksRequest) -> GenericResponse:
    curve = _resolve_curve(req, req.prime, req.genus)
    rep = disk_report(curve, T=req.truncation)
    return GenericResponse(command="disks", result=ser.disk_report_view(rep))


def handle_p1image(req: P1ImageRequest) -> GenericResponse:
    polys = [_fractions(c) for c in req.components]
    img = image_of_poly_map(req.prime, polys, req.domain, max_depth=req.max_depth)
    return GenericResponse(command="p1image", result=ser.image_view(img))


def _series_vector(prime, components, truncation, precision):
    T = truncation or max(len(c) for c in components) + 2
    entries = tuple(
        TruncatedSeries.from_fractions(prime, _fractions(c), T, precision)
        for c in components
    )
    return SeriesVector(entries), T


def handle_seriesimage(req: SeriesImageRequest) -> GenericResponse:
    prec = req.precision + 8
    vec, T = _series_vector(req.prime, req.components, req.truncation, prec)
    img = image_of_series_on_pzp(vec, M=req.precision, T=T)
    return GenericResponse(command="seriesimage", result=ser.image_view(img))


def handle_newton(req: NewtonRequest) -> GenericResponse:
    vec, _ = _series_vector(req.prime, req.components, req.truncation, 24)
    np_obj = newton_polygon(vec, require_certified_min=False)
    return GenericResponse(command="newton", result=ser.polygon_view(np_obj))


def handle_wprep(req: WprepRequest) -> GenericResponse:
    T = req.truncation or len(req.coefficients) + 2
    series = TruncatedSeries.from_fractions(
        req.prime, _fractions(req.coefficients), T, req.precision + 8
    )
    fac = weierstrass_prepare(series, M=req.precision, T=T)
    return GenericResponse(command="wprep", result=ser.factorization_view(fac))


def handle_bounds(req: BoundsRequest) -> GenericResponse:
    reports = []
    if req.prime and req.prime > 2 and req.disks is not None and req.zero_budget is not None:
        reports.append(
            BoundReport(
                "delta-partition-max",
                {"p": req.prime, "d": req.disks, "N": req.zero_budget},
                Fraction(exact_delta_sum(req.prime, req.disks, req.zero_budget)),
            )
        )
    if req.prime and req.disks is not None:
        reports.append(
            BoundReport(
                "curve-image-bound",
                {"p": req.prime, "d": req.disks, "g": req.genus},
                curve_image_bound(req.prime, req.disks, req.genus),
            )
        )
    if req.prime:
        reports.append(
            BoundReport(
                "avg-rholog-bound",
                {"p": req.prime, "g": req.genus, "refined": req.refined},
                avg_rholog_bound(req.prime, req.genus, req.refined),
            )
        )
    reports.extend(density_bounds(req.genus, req.prime, req.image_size))
    return GenericResponse(
        command="bounds",
        result={
            "reports": [
                {
                    "formula": r.formula,
                    "inputs": r.inputs,
                    "value": ser.fraction_view(r.value),
                    "value_float": float(r.value),
                }
                for r in reports
            ]
        },
    )


def handle_height(req: HeightRequest) -> GenericResponse:
    coeffs = _ints(req.coeffs)
    return GenericResponse(command="height", result={"height": height(coeffs)})


# ---------------------------------------------------------------- FastAPI


app = FastAPI(
    title="padic-chabauty",
    version=__version__,
    description="p-adic power-series analysis, decent models of odd-degree "
    "hyperelliptic curves, and certified reduction images of the Jacobian "
    "logarithm",
)


@app.exception_handler(PadicChabautyError)
async def _library_error(request, exc):
    status = 500 if isinstance(exc, CertificationError) else 422
    return JSONResponse(
        status_code=status,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.get("/healthz")
def healthz():
    return {"status": "ok", "version": __version__}


app.post("/model", response_model=ModelResponse)(handle_model)
app.post("/expect/mc", response_model=ExpectResponse)(handle_expect_mc)
app.post("/expect/exact", response_model=ExpectResponse)(handle_expect_exact)
app.post("/expect/cases", response_model=ExpectResponse)(handle_expect_cases)
app.post("/expect/x0", response_model=ExpectResponse)(handle_expect_x0)
app.post("/rholog", response_model=GenericResponse)(handle_rholog)
app.post("/disks", response_model=GenericResponse)(handle_disks)
app.post("/p1image", response_model=GenericResponse)(handle_p1image)
app.post("/seriesimage", response_model=GenericResponse)(handle_seriesimage)
app.post("/newton", response_model=GenericResponse)(handle_newton)
app.post("/wprep", response_model=GenericResponse)(handle_wprep)
app.post("/bounds", response_model=GenericResponse)(handle_bounds)
app.post("/height", response_model=GenericResponse)(handle_height)
