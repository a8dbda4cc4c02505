"""Data and renderings for the two reference figures.

Figure 1: the solution curve of the monic product with zeros 1/2 and (1+i)/2,
plus the lifted argument Phi on [0, 2 pi]. Figure 2: five electrons at the
B = 1 level of a degree-5 product with its critical points, and their images
under the Cayley map that sends the first electron to infinity.

SVG files are written by hand (fixed 600x600 canvas, coordinates rounded to two
decimals) so that they are byte-for-byte reproducible. The PNG companions come
from matplotlib with the Agg backend and no timestamp metadata.
"""

from dataclasses import dataclass
import math
import os

import numpy as np

from .blaschke import TWO_PI, BlaschkeProduct, critical_points, lifted_argument
from .cayley import CayleyMap
from .energy import restricted_energy, tangential_gradient
from .io import write_csv
from .level import solve_level, trace_curve, wrap_angle

FIGURE1_ZEROS = (0.5, 0.5 + 0.5j)
FIGURE2_ZEROS = (0.5, 0.5 + 0.5j, 2j / 3, -0.75j, -0.7 + 0.6j)
CANVAS = 600
MARGIN = 50


def figure1_product():
    return BlaschkeProduct(FIGURE1_ZEROS)


def figure2_product():
    return BlaschkeProduct(FIGURE2_ZEROS)


def curve_table(curve, protons):
    """Rows (delta, tau_1..tau_n, energy, grad_norm) for a traced curve."""
    taus = curve.taus
    if len(protons):
        energy = np.atleast_1d(restricted_energy(taus, protons))
        grads = np.array([np.linalg.norm(tangential_gradient(row, protons)) for row in taus])
    else:
        energy = np.zeros(len(taus))
        grads = np.zeros(len(taus))
    return np.column_stack([curve.deltas, taus, energy, grads])


def curve_header(n):
    return ["delta"] + [f"tau_{k}" for k in range(1, n + 1)] + ["energy", "grad_norm"]


def argument_table(B, samples=512):
    """Rows (t, Phi(t)) on a uniform grid over [0, 2 pi]."""
    phi = lifted_argument(B)
    t = np.linspace(0.0, TWO_PI, samples + 1)
    return np.column_stack([t, phi(t)])


@dataclass
class Figure2Data:
    blaschke: BlaschkeProduct
    electrons: np.ndarray      # arguments in (-pi, pi], increasing
    inside: np.ndarray
    outside: np.ndarray
    theta: float
    line_electrons: np.ndarray  # Cayley images, inf for the first electron
    line_protons: np.ndarray    # images of the inside critical points (upper half plane)


def figure2_data():
    B = figure2_product()
    electrons = np.sort(wrap_angle(solve_level(B, 0.0).angles))
    crit = critical_points(B)
    theta = float(electrons[0])
    cmap = CayleyMap(theta)
    line = np.array([cmap.forward_boundary(t) for t in electrons], dtype=float)
    line[0] = math.inf
    xi = np.array([cmap.forward(z) for z in crit.inside], dtype=complex)
    return Figure2Data(B, electrons, crit.inside, crit.outside, theta, line, xi)


# ---------------------------------------------------------------- SVG emission

def _f(x):
    return f"{x:.2f}"


class _Svg:
    def __init__(self, title):
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" '
            f'viewBox="0 0 {CANVAS} {CANVAS}">',
            f"<title>{title}</title>",
            f'<rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="white"/>',
        ]

    def circle(self, cx, cy, r, fill="none", stroke="black", width=1.0):
        self.parts.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="{fill}" '
                          f'stroke="{stroke}" stroke-width="{_f(width)}"/>')

    def dot(self, x, y, r=5.0, fill="black"):
        self.parts.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{fill}"/>')

    def cross(self, x, y, s=5.0, stroke="black"):
        self.parts.append(f'<path d="M{_f(x - s)},{_f(y - s)} L{_f(x + s)},{_f(y + s)} '
                          f'M{_f(x - s)},{_f(y + s)} L{_f(x + s)},{_f(y - s)}" '
                          f'stroke="{stroke}" stroke-width="1.50" fill="none"/>')

    def line(self, x0, y0, x1, y1, stroke="gray", width=1.0):
        self.parts.append(f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" '
                          f'stroke="{stroke}" stroke-width="{_f(width)}"/>')

    def polyline(self, xs, ys, stroke="black", width=1.0):
        if len(xs) < 2:
            return
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in zip(xs, ys))
        self.parts.append(f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
                          f'stroke-width="{_f(width)}"/>')

    def text(self, x, y, s, size=14):
        self.parts.append(f'<text x="{_f(x)}" y="{_f(y)}" font-family="sans-serif" font-size="{size}">{s}</text>')

    def render(self):
        return "\n".join(self.parts + ["</svg>"]) + "\n"


class _Frame:
    """Affine map from a data box onto the canvas with equal aspect ratio."""

    def __init__(self, xmin, xmax, ymin, ymax):
        span = max(xmax - xmin, ymax - ymin)
        self.scale = (CANVAS - 2 * MARGIN) / span
        self.cx = 0.5 * (xmin + xmax)
        self.cy = 0.5 * (ymin + ymax)
        self.half = 0.5 * span

    def __call__(self, x, y):
        return (CANVAS / 2 + (np.asarray(x) - self.cx) * self.scale,
                CANVAS / 2 - (np.asarray(y) - self.cy) * self.scale)

    def visible(self, x, y):
        return abs(x - self.cx) <= self.half and abs(y - self.cy) <= self.half


def _split_wraps(x, y, jump=math.pi):
    """Break a torus-reduced path wherever a coordinate jumps by more than ``jump``."""
    cut = np.flatnonzero((np.abs(np.diff(x)) > jump) | (np.abs(np.diff(y)) > jump)) + 1
    return zip(np.split(x, cut), np.split(y, cut))


def svg_curve(curve):
    """Figure 1 left panel: the branches (tau_1, tau_2) reduced to [0, 2 pi)^2."""
    svg = _Svg("solution curve")
    frame = _Frame(0.0, TWO_PI, 0.0, TWO_PI)
    x0, y0 = frame(0.0, 0.0)
    x1, y1 = frame(TWO_PI, TWO_PI)
    svg.parts.append(f'<rect x="{_f(x0)}" y="{_f(y1)}" width="{_f(x1 - x0)}" height="{_f(y0 - y1)}" '
                     f'fill="none" stroke="gray"/>')
    taus = np.mod(np.vstack([curve.taus, curve.end_taus]), TWO_PI)
    n = curve.degree
    per = (len(taus) - 1) // n
    for b in range(n):
        seg = taus[b * per:(b + 1) * per + 1]
        for xs, ys in _split_wraps(seg[:, 0], seg[:, 1]):
            px, py = frame(xs, ys)
            svg.polyline(px, py, width=3.0 if b == 0 else 1.0)
    return svg.render()


def svg_argument(table):
    svg = _Svg("lifted argument")
    t, p = table[:, 0], table[:, 1]
    frame = _Frame(0.0, TWO_PI, float(p.min()), float(p.max()))
    px, py = frame(t, p)
    ax0, ay0 = frame(0.0, 0.0)
    ax1, _ = frame(TWO_PI, 0.0)
    svg.line(ax0, ay0, ax1, ay0)
    svg.polyline(px, py, width=2.0)
    return svg.render()


def svg_circle(data):
    """Figure 2 left panel: unit circle, electrons, critical points in view."""
    svg = _Svg("electrons and protons")
    frame = _Frame(-1.5, 1.5, -1.5, 1.5)
    cx, cy = frame(0.0, 0.0)
    svg.circle(cx, cy, frame.scale)
    for z in np.concatenate([data.inside, data.outside]):
        if frame.visible(z.real, z.imag):
            svg.cross(*frame(z.real, z.imag))
    for a in data.electrons:
        svg.dot(*frame(math.cos(a), math.sin(a)))
    return svg.render()


def svg_line(data):
    """Figure 2 right panel: the Cayley images on the real line and the proton images."""
    svg = _Svg("transformed configuration")
    finite = data.line_electrons[np.isfinite(data.line_electrons)]
    xi = data.line_protons
    xs = np.concatenate([finite, xi.real])
    ys = np.concatenate([xi.imag, -xi.imag, [0.0]])
    pad = 0.1 * max(xs.max() - xs.min(), ys.max() - ys.min())
    frame = _Frame(xs.min() - pad, xs.max() + pad, ys.min() - pad, ys.max() + pad)
    lx0, ly = frame(frame.cx - frame.half, 0.0)
    lx1, _ = frame(frame.cx + frame.half, 0.0)
    svg.line(lx0, ly, lx1, ly)
    for z in np.concatenate([xi, np.conj(xi)]):
        svg.cross(*frame(z.real, z.imag))
    for t in finite:
        svg.dot(*frame(t, 0.0))
    return svg.render()


# ----------------------------------------------------------------- matplotlib

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _save_png(fig, path):
    fig.savefig(path, dpi=100, metadata={"Software": None})


def png_figure1(curve, table, path):
    plt = _pyplot()
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 5))
    taus = np.mod(np.vstack([curve.taus, curve.end_taus]), TWO_PI)
    n = curve.degree
    per = (len(taus) - 1) // n
    for b in range(n):
        seg = taus[b * per:(b + 1) * per + 1]
        for xs, ys in _split_wraps(seg[:, 0], seg[:, 1]):
            left.plot(xs, ys, color="black", lw=2.5 if b == 0 else 1.0)
    left.set(xlim=(0, TWO_PI), ylim=(0, TWO_PI), aspect="equal", xlabel="tau_1", ylabel="tau_2")
    right.plot(table[:, 0], table[:, 1], color="black")
    right.set(xlim=(0, TWO_PI), xlabel="t", ylabel="Phi(t)")
    fig.tight_layout()
    _save_png(fig, path)
    plt.close(fig)


def png_figure2(data, path):
    plt = _pyplot()
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 5))
    s = np.linspace(0, TWO_PI, 400)
    left.plot(np.cos(s), np.sin(s), color="black", lw=1)
    crit = np.concatenate([data.inside, data.outside])
    left.plot(crit.real, crit.imag, "x", color="black")
    left.plot(np.cos(data.electrons), np.sin(data.electrons), "o", color="black")
    left.set(xlim=(-1.5, 1.5), ylim=(-1.5, 1.5), aspect="equal")
    finite = data.line_electrons[np.isfinite(data.line_electrons)]
    xi = data.line_protons
    right.axhline(0.0, color="gray", lw=1)
    right.plot(np.concatenate([xi.real, xi.real]), np.concatenate([xi.imag, -xi.imag]), "x", color="black")
    right.plot(finite, np.zeros_like(finite), "o", color="black")
    right.set(aspect="equal")
    fig.tight_layout()
    _save_png(fig, path)
    plt.close(fig)


# --------------------------------------------------------------------- writers

def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_figure1(out_dir, samples_per_branch=256, png=True):
    os.makedirs(out_dir, exist_ok=True)
    B = figure1_product()
    curve = trace_curve(B, samples_per_branch)
    protons = critical_points(B).inside
    rows = curve_table(curve, protons)
    table = argument_table(B)
    paths = {
        "curve_csv": os.path.join(out_dir, "figure1_curve.csv"),
        "arg_csv": os.path.join(out_dir, "figure1_arg.csv"),
        "curve_svg": os.path.join(out_dir, "figure1_curve.svg"),
        "arg_svg": os.path.join(out_dir, "figure1_arg.svg"),
    }
    write_csv(paths["curve_csv"], curve_header(B.degree), rows)
    write_csv(paths["arg_csv"], ["t", "Phi"], table)
    _write_text(paths["curve_svg"], svg_curve(curve))
    _write_text(paths["arg_svg"], svg_argument(table))
    if png:
        paths["png"] = os.path.join(out_dir, "figure1.png")
        png_figure1(curve, table, paths["png"])
    return paths


def write_figure2(out_dir, png=True):
    os.makedirs(out_dir, exist_ok=True)
    data = figure2_data()
    paths = {
        "electrons_csv": os.path.join(out_dir, "figure2_electrons.csv"),
        "protons_csv": os.path.join(out_dir, "figure2_protons.csv"),
        "circle_svg": os.path.join(out_dir, "figure2_circle.svg"),
        "line_svg": os.path.join(out_dir, "figure2_line.svg"),
    }
    e = data.electrons
    write_csv(paths["electrons_csv"], ["index", "angle", "re", "im", "t"],
              [(k + 1, a, math.cos(a), math.sin(a), t) for k, (a, t) in enumerate(zip(e, data.line_electrons))])
    rows = []
    for k, (z, xi) in enumerate(zip(data.inside, data.line_protons)):
        rows.append((k + 1, 0, z.real, z.imag, xi.real, xi.imag))
    for k, (z, xi) in enumerate(zip(data.outside, data.line_protons)):
        rows.append((k + 1, 1, z.real, z.imag, xi.real, -xi.imag))
    write_csv(paths["protons_csv"], ["index", "outside", "re", "im", "xi_re", "xi_im"], rows)
    _write_text(paths["circle_svg"], svg_circle(data))
    _write_text(paths["line_svg"], svg_line(data))
    if png:
        paths["png"] = os.path.join(out_dir, "figure2.png")
        png_figure2(data, paths["png"])
    return paths
