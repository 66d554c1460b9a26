"""CSV tables and SVG line charts for sweep rows."""
import csv
import io
from pathlib import Path

from ..exceptions import EmptyInput, IoError

CSV_HEADER = (
    "state_family", "state_param", "gamma", "lambda", "theta", "tau",
    "fidelity", "x_of_tau", "tau_qsl", "negativity", "region", "n_measure",
)

SVG_WIDTH, SVG_HEIGHT = 800, 600
_MARGIN = dict(left=90, right=170, top=50, bottom=70)
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def fmt(x):
    """12 significant digits, '.' decimal separator."""
    return format(float(x), ".12g")


def csv_text(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.state_family, fmt(r.state_param), fmt(r.gamma), fmt(r.lam), fmt(r.theta), fmt(r.tau),
            fmt(r.fidelity), fmt(r.x_of_tau), fmt(r.tau_qsl), fmt(r.negativity), r.region,
            "" if r.n_measure is None else fmt(r.n_measure),
        ])
    return buf.getvalue()


def _write(path, text):
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_csv(rows, path):
    _write(path, csv_text(rows))


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def svg_text(rows, title=None):
    """One polyline of tau_qsl against gamma per state parameter."""
    rows = list(rows)
    if not rows:
        raise EmptyInput("no rows to plot")
    series = {}
    for r in rows:
        series.setdefault(r.state_param, []).append((r.gamma, r.tau_qsl))
    xs = [r.gamma for r in rows]
    ys = [r.tau_qsl for r in rows]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(0.0, min(ys)), max(ys)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    left, top = _MARGIN["left"], _MARGIN["top"]
    plot_w = SVG_WIDTH - _MARGIN["left"] - _MARGIN["right"]
    plot_h = SVG_HEIGHT - _MARGIN["top"] - _MARGIN["bottom"]

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    family = rows[0].state_family
    symbol = "alpha" if family == "horodecki" else "p"
    if title is None:
        title = f"QSL time vs gamma ({family}, lambda={fmt(rows[0].lam)}, theta={fmt(rows[0].theta)})"

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH / 2:.2f}" y="28" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{_escape(title)}</text>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
    ]
    for x in _ticks(x_lo, x_hi):
        out.append(
            f'<text x="{px(x):.2f}" y="{top + plot_h + 20}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12">{x:.3g}</text>'
        )
    for y in _ticks(y_lo, y_hi):
        out.append(
            f'<text x="{left - 8}" y="{py(y) + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="12">{y:.3g}</text>'
        )
    out.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{SVG_HEIGHT - 20}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">gamma</text>'
    )
    out.append(
        f'<text x="24" y="{top + plot_h / 2:.2f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14" transform="rotate(-90 24 {top + plot_h / 2:.2f})">tau_QSL</text>'
    )
    for i, (param, pts) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        ly = top + 10 + 22 * i
        lx = left + plot_w + 20
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{lx + 38}" y="{ly + 4}" font-family="sans-serif" font-size="12">'
            f'{symbol} = {fmt(param)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(rows, path, title=None):
    _write(path, svg_text(rows, title))
