"""JSON-friendly views of the library's result objects.

Exact rationals serialize as "num/den" strings, p-adic scalars as
valuation/unit/precision records with decimal-string units (word-size
safe), and patch trees as nested dicts.
"""

from __future__ import annotations

from fractions import Fraction

from ..chabauty import DiskExpansion, DiskReport, HypothesesReport, RhoLogResult
from ..expectation import CaseFrequencies, ColumnStats, EnumResult, MCResult
from ..model import ColumnRecord, DecentModel, PatchNode
from ..padic import INF, PadicNumber
from ..projred import DiskCert, ProjPointFp, ReductionImage
from ..series import UNBOUNDED, NewtonPolygon, TruncatedSeries, WeierstrassFactorization

SCHEMA = "padic-chabauty/1"


def fraction_view(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def padic_view(x: PadicNumber) -> dict:
    return {
        "prime": x.prime,
        "valuation": x.valuation,
        "unit": str(x.unit) if x.unit is not None else None,
        "abs_precision": x.abs_precision,
        "exact_zero": x.is_exact_zero,
    }


def series_view(s: TruncatedSeries) -> dict:
    tail = s.tail_bound
    return {
        "prime": s.prime,
        "truncation": s.truncation,
        "tail_bound": "inf" if tail == INF else tail,
        "coefficients": [padic_view(c) for c in s.coeffs],
    }


def polygon_view(np_obj: NewtonPolygon) -> dict:
    n, N = None, None
    if np_obj.min_certified and np_obj.n_certified:
        n = np_obj.n_value
        N = np_obj.N_value if np_obj.N_certified else UNBOUNDED
    return {
        "vertices": [
            {"x": x, "y": y, "stable": stable} for x, y, stable in np_obj.vertices
        ],
        "min_height": np_obj.min_height,
        "min_certified": np_obj.min_certified,
        "n": n,
        "N": N,
        "truncation": np_obj.truncation_order,
    }


def point_view(pt: ProjPointFp) -> list:
    return list(pt.coords)


def cert_view(c: DiskCert) -> dict:
    return {
        "chart": c.chart,
        "center": str(c.center),
        "depth": c.depth,
        "value": point_view(c.value),
    }


def image_view(img: ReductionImage) -> dict:
    return {
        "prime": img.prime,
        "points": [point_view(pt) for pt in img.points],
        "size": img.size,
        "certificate": [cert_view(c) for c in img.certificate],
        "max_depth_used": img.max_depth_used,
        "codomain_transform": [list(r) for r in img.codomain_transform]
        if img.codomain_transform
        else None,
    }


def factorization_view(fac: WeierstrassFactorization) -> dict:
    return {
        "degree": fac.degree,
        "p_content": fac.p_content,
        "modulus": {"p_power": fac.modulus[0], "t_power": fac.modulus[1]},
        "poly_part": [padic_view(c) for c in fac.poly_part],
        "unit_part": series_view(fac.unit_part),
    }


def column_view(rec: ColumnRecord) -> dict:
    out = {"case": rec.case, "smooth_count": rec.smooth_count}
    if rec.blowup_rhs is not None:
        out["blowup_rhs"] = list(rec.blowup_rhs)
    if rec.child is not None:
        out["child"] = patch_view(rec.child)
    return out


def patch_view(node: PatchNode) -> dict:
    return {
        "depth": node.depth,
        "h": [str(c) for c in node.h],
        "precision": node.precision,
        "parent_column": node.parent_column,
        "columns": [column_view(r) for r in node.columns],
    }


def model_view(model: DecentModel) -> dict:
    return {
        "prime": model.prime,
        "total_smooth": model.total_smooth,
        "infinity_count": model.infinity_count,
        "max_depth_reached": model.max_depth_reached,
        "guard_hit": model.guard_hit,
        "tree": patch_view(model.root),
    }


def mc_view(res: MCResult) -> dict:
    return {
        "prime": res.prime,
        "genus": res.genus,
        "trials": res.trials,
        "seed": res.seed,
        "mean": fraction_view(res.mean),
        "mean_float": float(res.mean),
        "stderr": res.stderr,
        "histogram": {str(k): v for k, v in res.histogram.items()},
        "depth_histogram": {str(k): v for k, v in res.depth_histogram.items()},
        "guard_hits": res.guard_hits,
    }


def enum_view(res: EnumResult) -> dict:
    return {
        "prime": res.prime,
        "depth": res.depth,
        "per_column": fraction_view(res.per_column),
        "exact_value": fraction_view(res.exact_value),
    }


def column_stats_view(res: ColumnStats) -> dict:
    return {
        "prime": res.prime,
        "trials": res.trials,
        "seed": res.seed,
        "mean": fraction_view(res.mean),
        "stderr": res.stderr,
        "histogram": {str(k): v for k, v in res.histogram.items()},
        "tails": [
            {"B": B, "frequency": fraction_view(f), "bound": fraction_view(b)}
            for B, f, b in res.tail_rows
        ],
    }


def case_frequencies_view(res: CaseFrequencies) -> dict:
    return {
        "prime": res.prime,
        "trials": res.trials,
        "seed": res.seed,
        "cases": {
            label: {
                "count": res.counts[label],
                "empirical": fraction_view(res.empirical(label)),
                "expected": fraction_view(res.expected[label]),
            }
            for label in res.counts
        },
    }


def expansion_view(e: DiskExpansion) -> dict:
    return {
        "chart": e.disk.chart,
        "center": list(e.disk.center),
        "uniformizer": e.disk.uniformizer,
        "n_D": e.n_D,
        "bound": e.bound,
        "forms": [series_view(s) for s in e.w.entries],
        "coordinate_series": {k: series_view(v) for k, v in e.coordinate_series.items()},
    }


def hypotheses_view(rep: HypothesesReport) -> dict:
    return {
        "smooth_fiber": rep.smooth_fiber,
        "single_disk": rep.single_disk,
        "involution_fixes_only_infinity": rep.involution_fixes_only_infinity,
        "two_torsion": rep.two_torsion,
        "details": {
            "affine_fiber_points": [list(pt) for pt in rep.details["affine_fiber_points"]],
            "completed_square_hull": [list(v) for v in rep.details["completed_square_hull"]],
        },
    }


def disk_report_view(rep: DiskReport) -> dict:
    return {
        "prime": rep.curve.prime,
        "genus": rep.curve.genus,
        "disk_count": rep.disk_count,
        "sum_n_D": rep.sum_n_D,
        "disks": [expansion_view(e) for e in rep.expansions],
    }


def rholog_view(res: RhoLogResult, include_certificates=False) -> dict:
    images = []
    for e, img in zip(res.expansions, res.images):
        entry = {
            "chart": e.disk.chart,
            "center": list(e.disk.center),
            "n_D": e.n_D,
            "bound": e.bound,
            "points": [point_view(pt) for pt in img.points],
            "size": img.size,
        }
        if include_certificates:
            entry["certificate"] = [cert_view(c) for c in img.certificate]
        images.append(entry)
    return {
        "prime": res.curve.prime,
        "genus": res.curve.genus,
        "hypotheses": hypotheses_view(res.hypotheses) if res.hypotheses else None,
        "disks": images,
        "sum_n_D": res.sum_n_D,
        "image": [point_view(pt) for pt in res.union] if res.union is not None else None,
        "image_size": len(res.union) if res.union is not None else None,
        "constants_assumed_zero": res.constants_assumed_zero,
    }
