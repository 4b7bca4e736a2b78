"""Command-line client.

Thin by design: arguments are packed into the service request models and
dispatched to the same handlers the HTTP endpoints use, in process; the
only logic here is argument parsing and output formatting.  A remote
deployment runs `uvicorn padic_chabauty.service:app` and receives the
identical payloads.

Exit codes: 0 success, 1 precondition or usage violation, 2 internal
certification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import CertificationError, PadicChabautyError
from .service import schemas
from .service import api


def _split_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _split_components(text):
    return [_split_list(part) for part in text.split(";")]


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("PADIC_CHABAUTY_THREADS", "1")),
        help="worker threads (default: PADIC_CHABAUTY_THREADS or 1)",
    )
    parser = argparse.ArgumentParser(
        prog="padic-chabauty",
        description="p-adic analysis of odd-degree hyperelliptic curves: "
        "decent models, reduction images, and bound formulas",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("model", parents=[common], help="decent model and smooth-point count")
    m.add_argument("--p", type=int, required=True)
    m.add_argument("--g", type=int, required=True)
    m.add_argument("--f", required=True, help="monic f, highest degree first: '1,0,-1,0'")
    m.add_argument("--depth-guard", type=int)

    e = sub.add_parser("expect", help="smooth-point count statistics")
    esub = e.add_subparsers(dest="mode", required=True)
    mc = esub.add_parser("mc", parents=[common])
    mc.add_argument("--p", type=int, required=True)
    mc.add_argument("--g", type=int, default=2)
    mc.add_argument("--trials", type=int, required=True)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--depth-guard", type=int, default=12)
    mc.add_argument("--digit-budget", type=int)
    ex = esub.add_parser("exact", parents=[common])
    ex.add_argument("--p", type=int, required=True)
    ex.add_argument("--g", type=int, default=1)
    ex.add_argument("--k", type=int, required=True)
    ca = esub.add_parser("cases", parents=[common])
    ca.add_argument("--p", type=int, required=True)
    ca.add_argument("--g", type=int, default=1)
    ca.add_argument("--trials", type=int, required=True)
    ca.add_argument("--seed", type=int, default=0)
    x0 = esub.add_parser("x0", parents=[common])
    x0.add_argument("--p", type=int, required=True)
    x0.add_argument("--g", type=int, default=1)
    x0.add_argument("--trials", type=int, required=True)
    x0.add_argument("--seed", type=int, default=0)
    x0.add_argument("--depth-guard", type=int, default=12)

    for name, help_text in (
        ("rholog", "reduction image of the logarithm"),
        ("disks", "residue disks, expansions and per-disk bounds"),
    ):
        c = sub.add_parser(name, parents=[common], help=help_text)
        c.add_argument("--p", type=int, default=2)
        c.add_argument("--g", type=int)
        c.add_argument("--curve", help="shorthand like 'y2+y=x7+x+1'")
        c.add_argument("--q", help="ascending coefficients of q")
        c.add_argument("--r", help="ascending coefficients of r")
        c.add_argument("--f", help="ascending coefficients of f (odd p)")
        c.add_argument("--truncation", type=int)
        if name == "rholog":
            c.add_argument("--precision", type=int)
            c.add_argument("--certificates", action="store_true")

    pi = sub.add_parser("p1image", parents=[common], help="reduction image of a polynomial map")
    pi.add_argument("--p", type=int, required=True)
    pi.add_argument(
        "--components",
        required=True,
        help="ascending lists separated by ';': '1;0,1' is (1 : t)",
    )
    pi.add_argument("--domain", choices=("P1", "Zp", "pZp"), default="P1")
    pi.add_argument("--max-depth", type=int)

    si = sub.add_parser("seriesimage", parents=[common], help="image of an integrated series on pZp")
    si.add_argument("--p", type=int, required=True)
    si.add_argument("--components", required=True)
    si.add_argument("--precision", type=int, default=12)
    si.add_argument("--truncation", type=int)

    nw = sub.add_parser("newton", parents=[common], help="certified Newton polygon")
    nw.add_argument("--p", type=int, required=True)
    nw.add_argument("--components", required=True)
    nw.add_argument("--truncation", type=int)

    wp = sub.add_parser("wprep", parents=[common], help="Weierstrass preparation")
    wp.add_argument("--p", type=int, required=True)
    wp.add_argument("--coeffs", required=True)
    wp.add_argument("--precision", type=int, default=8)
    wp.add_argument("--truncation", type=int)

    b = sub.add_parser("bounds", parents=[common], help="closed-form bounds and densities")
    b.add_argument("--g", type=int, required=True)
    b.add_argument("--p", type=int)
    b.add_argument("--d", type=int, help="number of residue disks")
    b.add_argument("--N", type=int, help="zero budget of the partition maximum")
    b.add_argument("--image-size", type=int)
    b.add_argument("--refined", action="store_true")

    h = sub.add_parser("height", parents=[common], help="height of an integral curve")
    h.add_argument("--coeffs", required=True, help="a_1,...,a_{2g+1}")

    return parser


def _dispatch(args):
    if args.command == "model":
        return api.handle_model(
            schemas.ModelRequest(
                prime=args.p, genus=args.g, f=_split_list(args.f),
                depth_guard=args.depth_guard,
            )
        )
    if args.command == "expect":
        if args.mode == "mc":
            return api.handle_expect_mc(
                schemas.ExpectMcRequest(
                    prime=args.p, genus=args.g, trials=args.trials, seed=args.seed,
                    depth_guard=args.depth_guard, digit_budget=args.digit_budget,
                    threads=args.threads, keep_trials=(args.format == "csv"),
                )
            )
        if args.mode == "exact":
            return api.handle_expect_exact(
                schemas.ExpectExactRequest(prime=args.p, genus=args.g, k=args.k)
            )
        if args.mode == "cases":
            return api.handle_expect_cases(
                schemas.ExpectCasesRequest(
                    prime=args.p, genus=args.g, trials=args.trials, seed=args.seed
                )
            )
        return api.handle_expect_x0(
            schemas.ExpectX0Request(
                prime=args.p, genus=args.g, trials=args.trials, seed=args.seed,
                depth_guard=args.depth_guard,
            )
        )
    if args.command == "rholog":
        return api.handle_rholog(
            schemas.RhologRequest(
                prime=args.p, genus=args.g, curve=args.curve,
                q=_split_list(args.q) if args.q else None,
                r=_split_list(args.r) if args.r else None,
                f=_split_list(args.f) if args.f else None,
                truncation=args.truncation, precision=args.precision,
                include_certificates=args.certificates,
            )
        )
    if args.command == "disks":
        return api.handle_disks(
            schemas.DisksRequest(
                prime=args.p, genus=args.g, curve=args.curve,
                q=_split_list(args.q) if args.q else None,
                r=_split_list(args.r) if args.r else None,
                f=_split_list(args.f) if args.f else None,
                truncation=args.truncation,
            )
        )
    if args.command == "p1image":
        return api.handle_p1image(
            schemas.P1ImageRequest(
                prime=args.p, components=_split_components(args.components),
                domain=args.domain, max_depth=args.max_depth,
            )
        )
    if args.command == "seriesimage":
        return api.handle_seriesimage(
            schemas.SeriesImageRequest(
                prime=args.p, components=_split_components(args.components),
                precision=args.precision, truncation=args.truncation,
            )
        )
    if args.command == "newton":
        return api.handle_newton(
            schemas.NewtonRequest(
                prime=args.p, components=_split_components(args.components),
                truncation=args.truncation,
            )
        )
    if args.command == "wprep":
        return api.handle_wprep(
            schemas.WprepRequest(
                prime=args.p, coefficients=_split_list(args.coeffs),
                precision=args.precision, truncation=args.truncation,
            )
        )
    if args.command == "bounds":
        return api.handle_bounds(
            schemas.BoundsRequest(
                genus=args.g, prime=args.p, disks=args.d, zero_budget=args.N,
                image_size=args.image_size, refined=args.refined,
            )
        )
    if args.command == "height":
        return api.handle_height(schemas.HeightRequest(coeffs=_split_list(args.coeffs)))
    raise ValueError(f"unknown command {args.command}")


def _render(response, args) -> str:
    payload = response.model_dump(by_alias=True)
    if args.format == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.format == "csv":
        return _render_csv(payload, args)
    return _render_text(payload, args)


def _render_csv(payload, args) -> str:
    if args.command == "expect" and getattr(args, "mode", None) == "mc":
        rows = payload["result"].get("per_trial", [])
        lines = ["trial,total_smooth,max_depth"]
        lines += [f"{t},{c},{d}" for t, c, d in rows]
        return "\n".join(lines) + "\n"
    if args.command == "bounds":
        lines = ["formula,value"]
        lines += [
            f"{r['formula']},{r['value']}" for r in payload["result"]["reports"]
        ]
        return "\n".join(lines) + "\n"
    raise PadicChabautyError(f"csv output is not defined for {args.command}")


def _render_text(payload, args) -> str:
    result = payload["result"]
    cmd = payload.get("command", args.command)
    lines = [f"# {cmd}"]
    if cmd == "model":
        lines.append(f"total_smooth = {result['total_smooth']}")
        lines.append(f"max_depth = {result['max_depth_reached']}")
    elif cmd == "rholog":
        pts = result.get("image")
        lines.append(f"image = {['(' + ':'.join(map(str, p)) + ')' for p in pts]}")
        lines.append(f"sum n_D = {result['sum_n_D']}")
        if result.get("hypotheses"):
            lines.append(f"hypotheses = {result['hypotheses']}")
    elif "reports" in result:
        for r in result["reports"]:
            lines.append(f"{r['formula']} = {r['value']}")
    else:
        for key, value in result.items():
            if not isinstance(value, (dict, list)):
                lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        response = _dispatch(args)
        text = _render(response, args)
    except CertificationError as exc:
        print(f"certification failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (PadicChabautyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
