"""Figure rendering for analysis reports.

Renders the branch decay diagram (|f - f(center)| against the radius, log-log,
with the scanned circle minima overlaid) and the probe diagram (per-rung
infima of each inequality ratio).  Files are written with stripped metadata so
repeated runs produce identical images.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_SAVE_KW = dict(dpi=150, metadata={"Software": None})


def _nonzero(values):
    return [abs(v) if abs(v) > 0 else float("nan") for v in values]


def render_branch_decay(data: dict, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 5))
    for b in data.get("branches", []):
        label = f"branch {b['id']}"
        if b["constant"]:
            label += " (constant)"
        elif b["alpha"] is not None:
            label += f" ~ {b['a']:.3g} t^{b['alpha']}"
        ax.loglog(b["t"], _nonzero(b["delta"]), marker="o", ms=3, lw=1,
                  label=label)
    oracle = data.get("oracle")
    if oracle and oracle.get("samples"):
        ts = [row[0] for row in oracle["samples"]]
        ds = _nonzero(row[3] for row in oracle["samples"])
        ax.loglog(ts, ds, "k--", lw=1.2, label="circle minimum (scan)")
    ax.set_xlabel("radius t")
    ax.set_ylabel("|f - f(center)| on branch")
    ax.set_title(f"branch decay: {data['config']['function']}"
                 f" ({data['classification']['verdict']})")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_probes(data: dict, path: str) -> None:
    probes = list(data.get("probes", []))
    ce = data.get("counterexample")
    if ce:
        probes.append(ce["ratio"])
    fig, ax = plt.subplots(figsize=(7, 5))
    if not probes:
        ax.text(0.5, 0.5, "no probes run", ha="center", va="center")
    for p in probes:
        rows = [(t, v) for t, v in p["per_rung"] if v > 0]
        if not rows:
            continue
        label = p["name"]
        if p["alpha"] is not None:
            label += f" (alpha={p['alpha']:g})"
        if p["trend_slope"] is not None:
            label += f", slope {p['trend_slope']:+.3f}"
        ax.loglog([t for t, _ in rows], [v for _, v in rows], marker="s",
                  ms=3, lw=1, label=label)
    ax.set_xlabel("radius t")
    ax.set_ylabel("per-rung infimum of ratio")
    ax.set_title("inequality probes")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_figures(data: dict, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    decay = os.path.join(outdir, "branch_decay.png")
    probes = os.path.join(outdir, "probe_ratios.png")
    render_branch_decay(data, decay)
    render_probes(data, probes)
    return [decay, probes]
