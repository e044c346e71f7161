"""``tropmech`` command line: JSON request in, JSON verdict (or SVG) out.

Outcomes, cycle nodes and SCC members are 1-based in every JSON document.
Exit codes: 0 success (negative verdicts included), 2 malformed input,
3 semantic precondition failure, 4 enumeration budget exceeded,
5 internal cross-check violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import arrangement, mechanism
from .exceptions import (
    BudgetExceeded,
    CrossCheckError,
    DimensionUnsupported,
    NotIC,
    NotRealizable,
    PerturbationFailed,
)
from .polytrope import Polytrope
from .svg import build_scene, render_svg
from .tropical import min_cycle_mean
from .validation import (
    TypeSpace,
    as_fraction,
    check_matrix,
    check_outcomes,
    check_point,
    check_type_space,
    fraction_str,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_SEMANTIC, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4, 5

COMMANDS = ("ic-check", "payments", "enumerate", "re-check", "realize", "perturb", "render")


class RequestError(ValueError):
    pass


class Request:
    """Parsed and validated view of an analysis request."""

    def __init__(self, data):
        if not isinstance(data, dict):
            raise RequestError("request must be a JSON object")
        self.data = data
        m = data.get("m")
        raw = data.get("type_space")
        if raw is None:
            raise RequestError("missing field 'type_space'")
        if not isinstance(raw, list):
            raise RequestError("'type_space' must be a list of coordinate vectors")
        if m is not None and (isinstance(m, bool) or not isinstance(m, int)):
            raise RequestError("'m' must be an integer")
        if not raw:
            if m is None:
                raise RequestError("empty 'type_space' needs an explicit 'm'")
            self.T = TypeSpace(m, ())
        else:
            lengths = {len(row) if isinstance(row, list) else None for row in raw}
            if None in lengths:
                raise RequestError("every type must be a list of coordinates")
            if m is not None and lengths != {m}:
                raise RequestError(f"all coordinate vectors must have length m = {m}")
            self.T = check_type_space(raw, m)
        self.m = self.T.m

    def field(self, name):
        if name not in self.data:
            raise RequestError(f"missing field '{name}'")
        return self.data[name]

    def mechanism(self):
        g = self.field("mechanism")
        if not isinstance(g, list):
            raise RequestError("'mechanism' must be a list of outcomes")
        if any(isinstance(v, bool) or not isinstance(v, int) for v in g):
            raise RequestError("'mechanism' entries must be integers 1..m")
        return check_outcomes([v - 1 for v in g], self.T.r, self.m)

    def matrix(self):
        L = check_matrix(self.field("matrix"), zero_diagonal=True)
        if len(L) != self.m:
            raise RequestError(f"'matrix' must be {self.m}x{self.m}")
        return L

    def payment(self):
        if self.data.get("payment") is None:
            return None
        return check_point(self.data["payment"], self.m)


def _q(x: Fraction) -> str:
    return fraction_str(x)


def _vec(v):
    return [_q(x) for x in v]


def _mat(A):
    return [_vec(row) for row in A]


def _polytrope_json(P: Polytrope) -> dict:
    return {
        "closure": _mat(P.closure),
        "dimension": P.dimension(),
        "interior_point": _vec(P.interior_point()),
        "tropical_vertices": [_vec(v) for v in P.tropical_vertices()],
    }


def _one_based(g):
    return [j + 1 for j in g]


class CommandFailed(Exception):
    def __init__(self, code, payload):
        self.code = code
        self.payload = payload


def cmd_ic_check(req: Request, args) -> dict:
    g = req.mechanism()
    L = mechanism.allocation_matrix(req.T, g)
    lam = min_cycle_mean(L)
    out = {
        "ic": lam == 0,
        "eigenvalue": _q(lam),
        "weakly_monotone": mechanism.is_weakly_monotone(req.T, g),
        "allocation_matrix": _mat(L),
    }
    if lam != 0:
        try:
            mechanism.ic_payments(req.T, g)
        except NotIC as exc:
            out["negative_cycle"] = _one_based(exc.cycle)
    return out


def cmd_payments(req: Request, args) -> dict:
    g = req.mechanism()
    try:
        P = mechanism.ic_payments(req.T, g)
    except NotIC as exc:
        raise CommandFailed(
            EXIT_SEMANTIC,
            {"ic": False, "error": "outcome function is not IC",
             "negative_cycle": _one_based(exc.cycle)},
        ) from None
    out = _polytrope_json(P)
    out["revenue_equivalent"] = out["dimension"] == 0
    return out


def cmd_enumerate(req: Request, args) -> dict:
    cells = arrangement.enumerate_ic_outcomes(req.T, args.budget)
    return {
        "m": req.m,
        "r": req.T.r,
        "d": cells.count,
        "bound": cells.bound,
        "generic": arrangement.is_generic(req.T),
        "cells": [
            dict(_polytrope_json(c.polytrope),
                 outcome_functions=[_one_based(g) for g in c.outcome_functions])
            for c in cells.cells
        ],
    }


def cmd_re_check(req: Request, args) -> dict:
    verdict = arrangement.is_re_type_space(req.T, args.budget)
    cert = None
    if not verdict.is_re:
        cert = {
            "closure": _mat(verdict.cell.closure),
            "dimension": verdict.cell.dimension(),
            "point": _vec(verdict.point),
            "components": [_one_based(c) for c in verdict.components],
        }
    return {"re": verdict.is_re, "certificate": cert}


def cmd_realize(req: Request, args) -> dict:
    L = req.matrix()
    sep = mechanism.separates(L, req.T)
    try:
        g = mechanism.realize(L, req.T)
    except NotRealizable as exc:
        raise CommandFailed(
            EXIT_SEMANTIC,
            {"realizable": False, "separates": sep, "mechanism": None, "reason": str(exc)},
        ) from None
    return {"realizable": True, "separates": sep, "mechanism": _one_based(g)}


def cmd_perturb(req: Request, args) -> dict:
    eps = args.epsilon if args.epsilon is not None else req.data.get("epsilon", "1/100")
    eps = as_fraction(eps)
    Tp = arrangement.generic_perturbation(req.T, eps)
    disp = max(
        (abs(a - b) for s, t in zip(req.T, Tp) for a, b in zip(s, t)),
        default=Fraction(0),
    )
    return {
        "epsilon": _q(eps),
        "type_space": [_vec(t) for t in Tp],
        "generic": arrangement.is_generic(Tp),
        "max_displacement": _q(disp),
    }


def cmd_render(req: Request, args):
    if req.m != 3:
        raise DimensionUnsupported(f"rendering needs m = 3, got {req.m}")
    cells = ()
    if req.T.r >= req.m:
        cells = arrangement.enumerate_ic_outcomes(req.T, args.budget).polytropes()
    viewport = req.data.get("viewport")
    if viewport is not None:
        if not isinstance(viewport, list) or len(viewport) != 4:
            raise RequestError("'viewport' must be [xmin, ymin, xmax, ymax]")
        viewport = tuple(as_fraction(v) for v in viewport)
        if viewport[0] >= viewport[2] or viewport[1] >= viewport[3]:
            raise RequestError("'viewport' must have positive width and height")
    scene = build_scene(req.T.points, req.payment(), cells, viewport, m=req.m)
    if args.format == "json":
        return {
            "viewport": _vec(scene.viewport),
            "layers": [kind for kind, _ in scene.layers],
        }
    return render_svg(scene)


HANDLERS = {
    "ic-check": cmd_ic_check,
    "payments": cmd_payments,
    "enumerate": cmd_enumerate,
    "re-check": cmd_re_check,
    "realize": cmd_realize,
    "perturb": cmd_perturb,
    "render": cmd_render,
}


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("budget must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropmech",
        description="Incentive compatibility of finite mechanisms via tropical geometry.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", "-i", required=True, help="request JSON file ('-' for stdin)")
    parser.add_argument("--out", "-o", help="write output here instead of stdout")
    parser.add_argument("--budget", type=_positive_int, help="max assignments m**r to enumerate")
    parser.add_argument("--epsilon", help="perturbation size, exact (e.g. 1/100)")
    parser.add_argument("--format", choices=("svg", "json"), help="output format")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _load(path):
    try:
        if path == "-":
            return json.load(sys.stdin, parse_float=Fraction)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh, parse_float=Fraction)
    except OSError as exc:
        raise RequestError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RequestError(f"invalid JSON: {exc}") from exc


def _emit(result, out_path):
    text = result if isinstance(result, str) else json.dumps(result, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(code, message, payload=None):
    print(f"tropmech: error: {message}", file=sys.stderr)
    if payload is not None:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.format is None:
        args.format = "svg" if args.command == "render" else "json"
    if args.budget is None:
        args.budget = arrangement.default_budget()
    try:
        req = Request(_load(args.input))
        result = HANDLERS[args.command](req, args)
    except CommandFailed as exc:
        return _fail(exc.code, exc.payload.get("error") or exc.payload.get("reason"), exc.payload)
    except BudgetExceeded as exc:
        return _fail(EXIT_BUDGET, str(exc), {"error": "budget exceeded", "required": exc.required})
    except (CrossCheckError, PerturbationFailed) as exc:
        return _fail(EXIT_INTERNAL, str(exc))
    except (RequestError, DimensionUnsupported, ValueError, TypeError) as exc:
        return _fail(EXIT_USAGE, str(exc))
    _emit(result, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
