"""Deterministic SVG pictures of arrangements in TP^2.

Points are drawn in the plane ``(x, y) = (p_2 - p_1, p_3 - p_1)``.  The scene
is built with exact rationals and every coordinate is rounded to three
decimals by integer arithmetic, so equal requests give byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from xml.sax.saxutils import escape

from .exceptions import DimensionUnsupported
from .polytrope import Polytrope
from .validation import check_point, check_type_space

CANVAS = 600
MARGIN = 20

MIN_PLUS_RAYS = ((-1, -1), (0, 1), (1, 0))
MAX_PLUS_RAYS = ((1, 1), (0, -1), (-1, 0))

# min-plus sector k sits up-right (1), left (2), below (3) of its apex
SECTOR_LABEL_DIRECTIONS = {1: (1, 1), 2: (-2, 1), 3: (1, -2)}

CELL_FILL = "#cccccc"


@dataclass
class SvgScene:
    viewport: tuple[Fraction, Fraction, Fraction, Fraction]  # xmin, ymin, xmax, ymax
    layers: list = field(default_factory=list)

    def add(self, kind: str, **attrs) -> None:
        self.layers.append((kind, attrs))


def default_viewport(points, extra=()):
    pts = [(Fraction(p[1]), Fraction(p[2])) for p in (*points, *extra)]
    if not pts:
        return (Fraction(-1), Fraction(-1), Fraction(1), Fraction(1))
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    w = max(x1 - x0, Fraction(1))
    h = max(y1 - y0, Fraction(1))
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    return (cx - w * 3 / 4, cy - h * 3 / 4, cx + w * 3 / 4, cy + h * 3 / 4)


def clip_ray(apex, direction, box):
    """Exact Liang-Barsky clip of ``apex + s * direction, s >= 0`` to ``box``."""
    x0, y0, x1, y1 = box
    lo, hi = Fraction(0), None
    for a, d, bmin, bmax in ((apex[0], direction[0], x0, x1), (apex[1], direction[1], y0, y1)):
        if d == 0:
            if a < bmin or a > bmax:
                return None
            continue
        s1, s2 = (bmin - a) / d, (bmax - a) / d
        if s1 > s2:
            s1, s2 = s2, s1
        lo = max(lo, s1)
        hi = s2 if hi is None else min(hi, s2)
    if hi is None or hi < lo:
        return None
    return (
        (apex[0] + lo * direction[0], apex[1] + lo * direction[1]),
        (apex[0] + hi * direction[0], apex[1] + hi * direction[1]),
    )


def build_scene(T, payment=None, cells=(), viewport=None, m=3) -> SvgScene:
    if len(T) == 0:
        pts = ()
    else:
        T = check_type_space(T)
        if T.m != 3:
            raise DimensionUnsupported(f"rendering needs m = 3, got {T.m}")
        pts = T.points
    if m != 3:
        raise DimensionUnsupported(f"rendering needs m = 3, got {m}")
    extra = () if payment is None else (check_point(payment, 3),)
    box = viewport if viewport is not None else default_viewport(pts, extra)
    box = tuple(Fraction(v) for v in box)
    scene = SvgScene(box)

    origin = (Fraction(0), Fraction(0))
    for direction in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        seg = clip_ray(origin, direction, box)
        if seg:
            scene.add("axis", a=seg[0], b=seg[1])

    for P in cells:
        poly = P.polygon() if isinstance(P, Polytrope) else P
        if len(poly) >= 3:
            scene.add("cell", points=tuple(poly))
        elif len(poly) == 2:
            scene.add("cell-segment", a=poly[0], b=poly[1])
        elif poly:
            scene.add("cell-point", at=poly[0])

    for idx, t in enumerate(pts):
        apex = (t[1], t[2])
        segs = [clip_ray(apex, d, box) for d in MIN_PLUS_RAYS]
        scene.add("min-plus", apex=apex, segments=tuple(s for s in segs if s), label=idx + 1)

    if payment is not None:
        p = extra[0]
        apex = (p[1], p[2])
        segs = [clip_ray(apex, d, box) for d in MAX_PLUS_RAYS]
        scene.add("max-plus", apex=apex, segments=tuple(s for s in segs if s))

    for idx, t in enumerate(pts):
        scene.add("apex", at=(t[1], t[2]), text=f"t{idx + 1}")
    if payment is not None:
        scene.add("payment", at=(extra[0][1], extra[0][2]), text="p")
    return scene


def _fmt(x: Fraction) -> str:
    n = round(x * 1000)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 1000)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:03d}".rstrip("0")


class _Frame:
    def __init__(self, box):
        x0, y0, x1, y1 = box
        self.x0, self.y1 = x0, y1
        span = max(x1 - x0, y1 - y0)
        self.scale = Fraction(CANVAS - 2 * MARGIN) / span
        self.width = 2 * MARGIN + (x1 - x0) * self.scale
        self.height = 2 * MARGIN + (y1 - y0) * self.scale

    def __call__(self, pt):
        return (
            _fmt(MARGIN + (pt[0] - self.x0) * self.scale),
            _fmt(MARGIN + (self.y1 - pt[1]) * self.scale),
        )


def render_svg(scene: SvgScene) -> str:
    f = _Frame(scene.viewport)
    w, h = _fmt(f.width), _fmt(f.height)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect class="background" x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]

    def line(cls, a, b, extra=""):
        (ax, ay), (bx, by) = f(a), f(b)
        return f'<line class="{cls}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"{extra}/>'

    for kind, a in scene.layers:
        if kind == "axis":
            out.append(line("axis", a["a"], a["b"], ' stroke="#999999" stroke-width="0.5"'))
        elif kind == "cell":
            pts = " ".join(",".join(f(p)) for p in a["points"])
            out.append(
                f'<polygon class="basic-cell" points="{pts}" fill="{CELL_FILL}" stroke="none"/>'
            )
        elif kind == "cell-segment":
            out.append(
                line(
                    "basic-cell-segment", a["a"], a["b"],
                    f' stroke="{CELL_FILL}" stroke-width="6" stroke-linecap="round"',
                )
            )
        elif kind == "cell-point":
            x, y = f(a["at"])
            out.append(f'<circle class="basic-cell-point" cx="{x}" cy="{y}" r="5" fill="{CELL_FILL}"/>')
        elif kind in ("min-plus", "max-plus"):
            style = (
                ' stroke="black" stroke-width="1"'
                if kind == "min-plus"
                else ' stroke="black" stroke-width="1.5" stroke-dasharray="2,3"'
            )
            d = " ".join(
                "M{} {} L{} {}".format(*f(s[0]), *f(s[1])) for s in a["segments"]
            )
            out.append(f'<path class="{kind}-hyperplane" d="{d}" fill="none"{style}/>')
            if kind == "min-plus":
                out.extend(_sector_labels(f, a["apex"]))
        elif kind in ("apex", "payment"):
            x, y = f(a["at"])
            r = "3" if kind == "apex" else "2.5"
            fill = "black" if kind == "apex" else "#555555"
            out.append(f'<circle class="{kind}" cx="{x}" cy="{y}" r="{r}" fill="{fill}"/>')
            out.append(
                f'<text class="{kind}-label" x="{x}" y="{y}" dx="5" dy="-5" '
                f'font-family="sans-serif" font-size="12">{escape(a["text"])}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _sector_labels(f, apex):
    step = Fraction(14) / f.scale
    for k, (dx, dy) in SECTOR_LABEL_DIRECTIONS.items():
        x, y = f((apex[0] + dx * step, apex[1] + dy * step))
        yield (
            f'<text class="sector-label" x="{x}" y="{y}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="8" fill="#777777">{k}</text>'
        )
