"""knotforge command line: a thin client over the HTTP service.

Every subcommand builds a request model, posts it to the service (an
in-process ASGI transport by default, or a remote instance via --server) and
writes the response verbatim.  Outputs carry no timestamps or environment
data, so identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx


class _InProcessTransport(httpx.BaseTransport):
    """Serve requests against the ASGI app without a network socket."""

    def __init__(self, app):
        self._asgi = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        async def roundtrip():
            response = await self._asgi.handle_async_request(request)
            body = await response.aread()
            return response.status_code, response.headers, body

        status, headers, body = asyncio.run(roundtrip())
        return httpx.Response(status_code=status, headers=headers, content=body)

    def close(self) -> None:
        asyncio.run(self._asgi.aclose())


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
    from .service.app import app

    return httpx.Client(
        transport=_InProcessTransport(app), base_url="http://knotforge.local", timeout=600.0
    )


def _knot_ref(spec: str):
    """A catalog name, or a path to a knot-spec JSON file."""
    if spec.endswith(".json"):
        with open(spec, "r", encoding="utf-8") as fh:
            return json.load(fh)
    return spec


def _samples(text: str) -> tuple[int, int]:
    try:
        nt, ns = text.lower().split("x")
        return int(nt), int(ns)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected NxM like 64x64, got {text!r}") from exc


def _out_path(path: str) -> str:
    _fmt_from_out(path)
    return path


def _fmt_from_out(path: str) -> str:
    for ext in ("obj", "stl", "csv"):
        if path.endswith("." + ext):
            return ext
    raise argparse.ArgumentTypeError(f"output must end in .obj, .stl or .csv: {path!r}")


def _post(client: httpx.Client, url: str, payload: dict) -> httpx.Response:
    resp = client.post(url, json=payload)
    if resp.status_code >= 400:
        try:
            body = resp.json()
            msg = f"{body.get('error', 'error')}: {body.get('message', body.get('detail', ''))}"
        except ValueError:
            msg = resp.text
        print(msg, file=sys.stderr)
        raise SystemExit(1)
    return resp


def _write_mesh(client, url, payload, out):
    resp = _post(client, url, payload)
    with open(out, "wb") as fh:
        fh.write(resp.content)
    print(f"wrote {out} ({len(resp.content)} bytes)")


def _mesh_payload(args) -> dict:
    return {
        "samples": list(args.samples),
        "project": args.project,
        "fmt": _fmt_from_out(args.out),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="knotforge",
        description="Construct, polynomialize, verify and export knotted surfaces in R^4.",
    )
    p.add_argument("--server", default=None, help="base URL of a running service; default runs in-process")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list the built-in knot curves")

    c = sub.add_parser("crossings", help="print the crossing table of a curve's (x, y) projection")
    c.add_argument("--knot", required=True, help="catalog name or knot-spec JSON file")

    def mesh_flags(sp, default_project="xyz"):
        sp.add_argument("--knot", required=True, help="catalog name or knot-spec JSON file")
        sp.add_argument("--samples", type=_samples, default=(64, 64), metavar="NxM")
        sp.add_argument("--project", choices=["xyz", "xyw", "xzw", "yzw"], default=default_project,
                        help="axes kept when projecting to 3-D (ignored for CSV)")
        sp.add_argument("--out", required=True, type=_out_path,
                        help="output mesh path (.obj, .stl or .csv)")

    s = sub.add_parser("spin", help="spun 2-knot surface of a knotted arc")
    mesh_flags(s)
    s.add_argument("--polynomialize", default="off",
                   help="Chebyshev substitution degree, or 'off'")

    t = sub.add_parser("twist-spin", help="d-twist spun 2-knot surface")
    mesh_flags(t)
    t.add_argument("--d", type=int, required=True, help="number of twists per spin")
    t.add_argument("--t1", type=float, default=None, help="chord start parameter")
    t.add_argument("--t2", type=float, default=None, help="chord end parameter")
    t.add_argument("--d1", type=float, default=None, help="bump outer threshold (on t^2)")
    t.add_argument("--d2", type=float, default=None, help="bump plateau threshold (on t^2)")
    t.add_argument("--eq-verbatim", action="store_true",
                   help="use the printed closed forms instead of the sandwich matrix")
    t.add_argument("--polynomialize", default="off")
    t.add_argument("--verify-reduction", action="store_true",
                   help="report the sup difference of the 0-twist surface vs plain spinning")

    tu = sub.add_parser("tube", help="ribbon torus surface of a welded diagram")
    mesh_flags(tu)
    tu.add_argument("--weld", default="", help="comma-separated crossing numbers to weld (1-based)")
    tu.add_argument("--L", type=float, default=None, help="crossing interval length")
    tu.add_argument("--r", type=float, default=0.7, help="tube radius")
    tu.add_argument("--dc", type=float, default=1.0, help="shrinking factor")
    tu.add_argument("--dw", type=float, default=5.0, help="displacement factor")
    tu.add_argument("--true-radius", action="store_true",
                    help="scale the section circle by r instead of unit amplitude")

    di = sub.add_parser("disc", help="knotted disc bounded by the arc and its mirror")
    mesh_flags(di)

    pl = sub.add_parser("plane", help="knotted plane (1: glued trivializing tails, 2: spun to infinity)")
    mesh_flags(pl)
    pl.add_argument("--construction", type=int, choices=[1, 2], default=1)
    pl.add_argument("--R", type=float, default=None, help="tail length (construction 1)")
    pl.add_argument("--reorder", action="store_true", help="swap y and z before building")

    sg = sub.add_parser("singular", help="singular parameter table of a long knot")
    sg.add_argument("--knot", required=True)
    sg.add_argument("--reorder", action="store_true", help="swap y and z before analysing")

    ap = sub.add_parser("approx", help="Chebyshev approximation of cos or sin")
    ap.add_argument("--target", choices=["cos", "sin"], required=True)
    ap.add_argument("--domain", default="0:6.283185307179586", help="lo:hi")
    ap.add_argument("--degree", type=int, default=8)

    ve = sub.add_parser("verify", help="sampled injectivity and seam checks for a construction")
    ve.add_argument("--surface", choices=["spin", "twist-spin", "tube", "disc", "plane"], required=True)
    ve.add_argument("--knot", required=True)
    ve.add_argument("--samples", type=_samples, default=(200, 200), metavar="NxM")
    ve.add_argument("--param-gap", type=int, default=None)
    ve.add_argument("--min-dist", type=float, default=None)
    ve.add_argument("--d", type=int, default=1)
    ve.add_argument("--construction", type=int, choices=[1, 2], default=1)
    ve.add_argument("--R", type=float, default=None)
    ve.add_argument("--reorder", action="store_true")
    ve.add_argument("--weld", default="")
    return p


def _parse_weld(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    with _client(args.server) as client:
        if args.command == "catalog":
            resp = client.get("/catalog")
            resp.raise_for_status()
            for entry in resp.json()["knots"]:
                dom = entry["domain"]
                dom_s = f"[{dom[0]:g}, {dom[1]:g}]" if dom else "R"
                print(f"{entry['name']:20s} {dom_s:18s} {entry['description']}")
            return 0

        if args.command == "crossings":
            resp = _post(client, "/knots/crossings", {"knot": _knot_ref(args.knot)})
            body = resp.json()
            print(f"{'#':>3} {'t_over':>18} {'t_under':>18} {'x':>18} {'y':>18}")
            for k, c in enumerate(body["crossings"], start=1):
                print(
                    f"{k:>3} {c['t_over']:>18.12g} {c['t_under']:>18.12g} "
                    f"{c['x']:>18.12g} {c['y']:>18.12g}"
                )
            if body.get("span"):
                lo, hi = body["span"]
                print(f"span: [{lo:.12g}, {hi:.12g}]")
            return 0

        if args.command == "spin":
            payload = {"knot": _knot_ref(args.knot), **_mesh_payload(args)}
            if args.polynomialize != "off":
                payload["polynomialize"] = int(args.polynomialize)
            _write_mesh(client, "/surfaces/spin", payload, args.out)
            return 0

        if args.command == "twist-spin":
            base = {
                "knot": _knot_ref(args.knot),
                "t1": args.t1,
                "t2": args.t2,
                "d1": args.d1,
                "d2": args.d2,
            }
            if args.verify_reduction:
                resp = _post(client, "/surfaces/twist-spin/reduction",
                             {**base, "samples": [128, 128]})
                sup = resp.json()["sup_difference"]
                print(f"sup |twist0 - spun| on 128x128 grid: {sup:.6e}")
            payload = {**base, "d": args.d, "eq_verbatim": args.eq_verbatim, **_mesh_payload(args)}
            if args.polynomialize != "off":
                payload["polynomialize"] = int(args.polynomialize)
            _write_mesh(client, "/surfaces/twist-spin", payload, args.out)
            return 0

        if args.command == "tube":
            knot_ref = _knot_ref(args.knot)
            payload = {**_mesh_payload(args), "r": args.r, "dc": args.dc, "dw": args.dw,
                       "true_radius": args.true_radius}
            if isinstance(knot_ref, dict) and "L" in knot_ref:
                payload["knot"] = knot_ref.get("name", "")
                payload["diagram"] = knot_ref
            else:
                payload["knot"] = knot_ref
                payload["weld"] = _parse_weld(args.weld)
                if args.L is not None:
                    payload["L"] = args.L
            _write_mesh(client, "/surfaces/tube", payload, args.out)
            return 0

        if args.command == "disc":
            _write_mesh(client, "/surfaces/disc",
                        {"knot": _knot_ref(args.knot), **_mesh_payload(args)}, args.out)
            return 0

        if args.command == "plane":
            payload = {
                "knot": _knot_ref(args.knot),
                "construction": args.construction,
                "R": args.R,
                "reorder": args.reorder,
                **_mesh_payload(args),
            }
            _write_mesh(client, "/surfaces/plane", payload, args.out)
            return 0

        if args.command == "singular":
            resp = _post(client, "/singular",
                         {"knot": _knot_ref(args.knot), "reorder": args.reorder})
            body = resp.json()
            print(f"{'u':>18} {'t_a':>18} {'t_b':>18}")
            for row in body["values"]:
                print(f"{row['u']:>18.12g} {row['t_a']:>18.12g} {row['t_b']:>18.12g}")
            print(f"crossings: {body['crossing_count']}, "
                  f"singularity index upper bound: {body['index_upper_bound']}")
            return 0

        if args.command == "approx":
            lo, hi = (float(v) for v in args.domain.split(":"))
            resp = _post(client, "/approx",
                         {"target": args.target, "domain": [lo, hi], "degree": args.degree})
            body = resp.json()
            print(json.dumps(body, indent=2, sort_keys=True))
            return 0

        if args.command == "verify":
            payload = {
                "surface": args.surface,
                "knot": _knot_ref(args.knot),
                "samples": list(args.samples),
                "param_gap": args.param_gap,
                "min_dist": args.min_dist,
                "d": args.d,
                "construction": args.construction,
                "R": args.R,
                "reorder": args.reorder,
                "weld": _parse_weld(args.weld),
            }
            resp = _post(client, "/verify", payload)
            print(json.dumps(resp.json(), indent=2, sort_keys=True))
            return 0

    raise SystemExit(2)


if __name__ == "__main__":
    sys.exit(main())
