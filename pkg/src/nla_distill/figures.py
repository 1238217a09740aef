"""Sweep-data generation for every figure, plus CSV/SVG emission.

Each generator returns a list of (panel_suffix, header, rows); the CSV schema
(header names and row order) is part of the package's external contract and
covered by golden tests.  Heavy sweeps fan out over a process pool; rows are
assembled in axis order regardless of completion order, so output bytes do
not depend on scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

from . import analytic, optimize
from .analytic import (RECORD_SQUEEZING_DB, ChannelParams, db_from_lambda,
                       eps_infinity, eps_no_nla, lambda_from_db,
                       purity_no_nla, purity_tradeoff, r_from_squeeze_db)

__all__ = ["figure_rows", "format_number", "write_csv", "write_svg",
           "DEFAULT_PIS", "DEFAULT_LAMBDA_DB", "FIG4_EPS_TARGETS", "panel_plot_spec"]

DEFAULT_PIS = (1e-1, 1e-2, 1e-3, 1e-4)
DEFAULT_LAMBDA_DB = (0.5, 40.0, 0.5)          # min, max, step
FIG3_LAMBDAS = tuple(i / 100.0 for i in range(100))
FIG3_SQUEEZE_DB = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0, RECORD_SQUEEZING_DB)
FIG4_EPS_TARGETS = tuple(round(1.0 - 0.11 * k, 2) for k in range(10))
FIG10_PIS = (1e-1, 1e-4)


def _db_range(spec: tuple[float, float, float]) -> list[float]:
    lo, hi, step = spec
    if step <= 0 or hi < lo:
        raise ValueError(f"bad loss-dB range {spec}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(n)]


def _pmap(fn, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=1))


# module-level workers so they pickle under multiprocessing

def _opt_point(args):
    lam_db, pi, n_stages = args
    lam = lambda_from_db(lam_db)
    try:
        res = optimize.optimize_entanglement(lam, pi, n_stages)
    except analytic.InfeasibleParameterError:
        return None
    return (lam_db, lam, pi, res)


def _target_point(args):
    lam_db, pi, n_stages, eps_target = args
    lam = lambda_from_db(lam_db)
    try:
        res = optimize.purity_for_target_entanglement(eps_target, lam, pi, n_stages)
    except analytic.InfeasibleParameterError:
        return None
    return (lam_db, lam, pi, res)


def _floor_point(n):
    return optimize.best_entanglement_vs_stages(n)[-1]


# ---------------------------------------------------------------------------
# figure generators


def _fig3(lambdas: Iterable[float]):
    head = ("lambda_db", "lambda", "squeeze_db", "r", "eps_b_given_a")
    head_b = ("lambda_db", "lambda", "squeeze_db", "r", "purity")
    rows_a, rows_b = [], []
    for sdb in FIG3_SQUEEZE_DB:
        r = r_from_squeeze_db(sdb)
        for lam in lambdas:
            ch = ChannelParams(r, lam)
            rows_a.append((db_from_lambda(lam), lam, sdb, r, eps_no_nla(ch)[0]))
            rows_b.append((db_from_lambda(lam), lam, sdb, r, purity_no_nla(ch)))
    for lam in lambdas:  # infinite-squeezing benchmark
        rows_a.append((db_from_lambda(lam), lam, math.inf, math.inf,
                       eps_infinity(lam)))
        rows_b.append((db_from_lambda(lam), lam, math.inf, math.inf,
                       1.0 if lam == 0.0 else 0.0))
    return [("a", head, rows_a), ("b", head_b, rows_b)]


def _fig4(lambdas: Iterable[float]):
    head = ("lambda_db", "lambda", "eps_target", "purity")
    rows = []
    for eps in FIG4_EPS_TARGETS:
        for lam in lambdas:
            if lam * lam > eps:
                continue  # beyond the infinite-squeezing floor
            rows.append((db_from_lambda(lam), lam, eps, purity_tradeoff(eps, lam)))
    return [("", head, rows)]


def _fig_opt(db_spec, pis, n_stages: int, workers: int):
    dbs = _db_range(db_spec)
    pts = [(db, pi, n_stages) for pi in pis for db in dbs]
    got = _pmap(_opt_point, pts, workers)
    head_a = ("lambda_db", "lambda", "pi", "eps_opt", "r_opt", "eta_opt")
    head_b = ("lambda_db", "lambda", "pi", "purity", "r_opt", "eta_opt")
    rows_a, rows_b = [], []
    for item in got:
        if item is None:
            continue
        lam_db, lam, pi, res = item
        rows_a.append((lam_db, lam, pi, res.eps_b_given_a, res.r_opt, res.eta_opt))
        rows_b.append((lam_db, lam, pi, res.purity, res.r_opt, res.eta_opt))
    return [("a", head_a, rows_a), ("b", head_b, rows_b)]


def _fig_target(db_spec, pis, eps_target: float, n_stages: int, workers: int):
    dbs = _db_range(db_spec)
    pts = [(db, pi, n_stages, eps_target) for pi in pis for db in dbs]
    got = _pmap(_target_point, pts, workers)
    head = ("lambda_db", "lambda", "pi", "eps_target", "purity",
            "purity_no_nla", "r_opt", "eta_opt")
    rows = []
    for item in got:
        if item is None:
            continue
        lam_db, lam, pi, res = item
        bench = purity_tradeoff(eps_target, lam) if lam * lam <= eps_target else 0.0
        rows.append((lam_db, lam, pi, eps_target, res.purity, bench,
                     res.r_opt, res.eta_opt))
    return [("", head, rows)]


def _fig10(db_spec, pis, eps_target: float, workers: int):
    dbs = _db_range(db_spec)
    pts = [(db, pi, n) for n in (1, 2) for pi in pis for db in dbs]
    got = _pmap(_opt_point, pts, workers)
    head_a = ("lambda_db", "lambda", "pi", "n_stages", "eps_opt", "r_opt", "eta_opt")
    rows_a = []
    for (db, pi, n), item in zip(pts, got):
        if item is None:
            continue
        lam_db, lam, pi, res = item
        rows_a.append((lam_db, lam, pi, n, res.eps_b_given_a, res.r_opt, res.eta_opt))
    pts_b = [(db, pi, n, eps_target) for n in (1, 2) for pi in pis for db in dbs]
    got_b = _pmap(_target_point, pts_b, workers)
    head_b = ("lambda_db", "lambda", "pi", "n_stages", "eps_target", "purity",
              "purity_no_nla", "r_opt", "eta_opt")
    rows_b = []
    for (db, pi, n, eps), item in zip(pts_b, got_b):
        if item is None:
            continue
        lam_db, lam, pi, res = item
        bench = purity_tradeoff(eps, lam) if lam * lam <= eps else 0.0
        rows_b.append((lam_db, lam, pi, n, eps, res.purity, bench,
                       res.r_opt, res.eta_opt))
    return [("a", head_a, rows_a), ("b", head_b, rows_b)]


def _fig11(n_max: int):
    head = ("n_stages", "eps_best", "kappa_best")
    rows = [(n, e, k) for n, e, k in optimize.best_entanglement_vs_stages(n_max)]
    return [("", head, rows)]


def figure_rows(name: str, *, lambda_db=DEFAULT_LAMBDA_DB, pis=DEFAULT_PIS,
                eps_target: float | None = None, n_max: int = 20,
                workers: int | None = None):
    """Rows for one figure; see the module docstring for the return shape."""
    workers = os.cpu_count() or 1 if workers is None else workers
    if name == "fig3":
        return _fig3(FIG3_LAMBDAS)
    if name == "fig4":
        return _fig4(FIG3_LAMBDAS)
    if name == "fig6":
        return _fig_opt(lambda_db, pis, 1, workers)
    if name == "fig7":
        return _fig_target(lambda_db, pis, eps_target or 0.85, 1, workers)
    if name == "fig8":
        return _fig_opt(lambda_db, pis, 2, workers)
    if name == "fig9":
        return _fig_target(lambda_db, pis, eps_target or 0.6, 2, workers)
    if name == "fig10":
        return _fig10(lambda_db, FIG10_PIS if pis is DEFAULT_PIS else pis,
                      eps_target or 0.85, workers)
    if name == "fig11":
        return _fig11(n_max)
    raise ValueError(f"unknown figure {name!r}")


# ---------------------------------------------------------------------------
# serialization


def format_number(x) -> str:
    """12 significant digits, scientific below 1e-4; stable across platforms."""
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x == 0.0:
        return "0"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if abs(x) < 1e-4:
        return f"{x:.11e}"
    return f"{x:.12g}"


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence],
              comments: Sequence[str] = ()) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_number(x) for x in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# minimal SVG emission (convenience only; CSV is the authoritative output)

_PALETTE = ("#e08214", "#41ab5d", "#4292c6", "#d4b106", "#807dba", "#d6616b",
            "#636363", "#8c6d31")

# per-panel plotting layout: (x column, y column, group-by column)
_PLOT_SPEC = {
    "fig3a": ("lambda", "eps_b_given_a", "squeeze_db"),
    "fig3b": ("lambda", "purity", "squeeze_db"),
    "fig4": ("lambda", "purity", "eps_target"),
    "fig6a": ("lambda_db", "eps_opt", "pi"),
    "fig6b": ("lambda_db", "purity", "pi"),
    "fig7": ("lambda_db", "purity", "pi"),
    "fig8a": ("lambda_db", "eps_opt", "pi"),
    "fig8b": ("lambda_db", "purity", "pi"),
    "fig9": ("lambda_db", "purity", "pi"),
    "fig10a": ("lambda_db", "eps_opt", "pi"),
    "fig10b": ("lambda_db", "purity", "pi"),
    "fig11": ("n_stages", "eps_best", None),
}


def panel_plot_spec(panel: str):
    return _PLOT_SPEC.get(panel)


def write_svg(path: str, title: str, header: Sequence[str],
              rows: Sequence[Sequence], panel: str) -> None:
    spec = panel_plot_spec(panel)
    if spec is None or not rows:
        return
    xcol, ycol, gcol = spec
    xi, yi = header.index(xcol), header.index(ycol)
    gi = header.index(gcol) if gcol else None
    groups: dict = {}
    for row in rows:
        key = row[gi] if gi is not None else ""
        x, y = float(row[xi]), float(row[yi])
        if math.isfinite(x) and math.isfinite(y):
            groups.setdefault(key, []).append((x, y))
    pts = [p for g in groups.values() for p in g]
    if not pts:
        return
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    xs = (x1 - x0) or 1.0
    ys = (y1 - y0) or 1.0
    w, h, m = 640, 420, 56

    def sx(x):
        return m + (x - x0) / xs * (w - 2 * m)

    def sy(y):
        return h - m - (y - y0) / ys * (h - 2 * m)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
             f'viewBox="0 0 {w} {h}">',
             f'<rect width="{w}" height="{h}" fill="white"/>',
             f'<text x="{w/2:.0f}" y="20" text-anchor="middle" '
             f'font-family="sans-serif" font-size="14">{title}</text>',
             f'<line x1="{m}" y1="{h-m}" x2="{w-m}" y2="{h-m}" stroke="black"/>',
             f'<line x1="{m}" y1="{m}" x2="{m}" y2="{h-m}" stroke="black"/>',
             f'<text x="{w/2:.0f}" y="{h-14}" text-anchor="middle" '
             f'font-family="sans-serif" font-size="12">{xcol}</text>',
             f'<text x="16" y="{h/2:.0f}" text-anchor="middle" '
             f'font-family="sans-serif" font-size="12" '
             f'transform="rotate(-90 16 {h/2:.0f})">{ycol}</text>']
    for k, (key, pts_k) in enumerate(sorted(groups.items(), key=lambda t: str(t[0]))):
        color = _PALETTE[k % len(_PALETTE)]
        path_d = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts_k)
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{path_d}"/>')
        if key != "":
            parts.append(f'<text x="{w-m+4}" y="{m+14*k}" font-family="sans-serif" '
                         f'font-size="10" fill="{color}">{gcol}={key}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
