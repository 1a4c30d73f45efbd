"""CSV snapshots, monitor files and a small SVG line plotter."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .driver import RunReport, Snapshot


def _fmt(v) -> str:
    return repr(float(v))


def snapshot_header(model) -> list[str]:
    return ["x", model.u1_name, "q", "v", "Fr", model.ref_name]


def write_snapshot(snap: Snapshot, model, outdir, index: int) -> list[Path]:
    """One CSV per canal: ``snap_<index>_canal_<id>.csv``."""
    outdir = Path(outdir)
    paths = []
    for cid, data in snap.canals.items():
        path = outdir / f"snap_{index:03d}_canal_{cid}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(snapshot_header(model))
            for row in zip(data["x"], data["u1"], data["u2"], data["v"], data["Fr"], data["ref"]):
                w.writerow([_fmt(v) for v in row])
        paths.append(path)
    return paths


def read_snapshot(path) -> dict:
    """Columns of a snapshot CSV as float arrays keyed by header name."""
    with Path(path).open() as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    return {name: body[:, k] for k, name in enumerate(header)}


def write_canal_table(network, outdir) -> Path:
    path = Path(outdir) / "canals.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "length", "n_cells", "dx", "width", "x_offset"])
        for c in network.canals:
            w.writerow([c.id, _fmt(c.length), c.n_cells, _fmt(c.dx), _fmt(c.width), _fmt(c.x_offset)])
    return path


def write_monitor(report: RunReport, outdir) -> Path:
    path = Path(outdir) / "monitor.csv"
    keys = []
    for row in report.monitor:
        keys.extend(k for k in row if k not in keys)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(keys)
        for row in report.monitor:
            w.writerow(["" if k not in row else (row[k] if isinstance(row[k], int) else _fmt(row[k]))
                        for k in keys])
    return path


def write_snapshot_index(report: RunReport, outdir) -> Path:
    path = Path(outdir) / "snapshots.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "t"])
        for k, s in enumerate(report.snapshots):
            w.writerow([k, _fmt(s.t)])
    return path


def write_convergence(report: RunReport, outdir) -> Path:
    path = Path(outdir) / "convergence.csv"
    keys = list(report.convergence[0].errors)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        head = ["dx", "steps"]
        for cid, name in keys:
            head += [f"err_{name}_canal{cid}", f"order_{name}_canal{cid}"]
        w.writerow(head)
        for row in report.convergence:
            line = [_fmt(row.dx), row.steps]
            for k in keys:
                o = row.orders[k]
                line += [_fmt(row.errors[k]), "" if o is None else _fmt(o)]
            w.writerow(line)
    return path


def write_run(report: RunReport, network, outdir) -> list[Path]:
    """All CSV outputs of a run."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [write_canal_table(network, outdir), write_monitor(report, outdir),
             write_snapshot_index(report, outdir)]
    for k, snap in enumerate(report.snapshots):
        paths += write_snapshot(snap, network.model, outdir, k)
    return paths


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def svg_lines(series, title="", width=640, height=360, xlabel="x", ylabel="") -> str:
    """Minimal SVG line chart; ``series`` is a list of ``(label, x, y)``."""
    pad = 48
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 - y0 < 1e-12 * max(1.0, abs(y0)):
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
           'fill="none" stroke="#888"/>',
           f'<text x="{width / 2}" y="{pad / 2}" text-anchor="middle" font-size="14">{title}</text>',
           f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle" font-size="12">{xlabel}</text>',
           f'<text x="12" y="{height / 2}" font-size="12" transform="rotate(-90 12 {height / 2})">{ylabel}</text>',
           f'<text x="{pad}" y="{height - pad + 16}" font-size="10">{x0:.4g}</text>',
           f'<text x="{width - pad}" y="{height - pad + 16}" font-size="10" text-anchor="end">{x1:.4g}</text>',
           f'<text x="{pad - 4}" y="{height - pad}" font-size="10" text-anchor="end">{y0:.4g}</text>',
           f'<text x="{pad - 4}" y="{pad + 10}" font-size="10" text-anchor="end">{y1:.4g}</text>']
    for k, (label, x, y) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{width - pad - 4}" y="{pad + 14 + 14 * k}" font-size="11" text-anchor="end" '
                   f'fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out)


def plot_snapshot(snap: Snapshot, model, outdir, index: int) -> list[Path]:
    """Two SVG files (first component and discharge) for one snapshot."""
    paths = []
    for key, label in (("u1", model.u1_name), ("u2", "q")):
        series = [(f"canal {cid}", d["x"], d[key]) for cid, d in snap.canals.items()]
        path = Path(outdir) / f"snap_{index:03d}_{label}.svg"
        path.write_text(svg_lines(series, title=f"{label} at t = {snap.t:.4g}", ylabel=label))
        paths.append(path)
    return paths
