"""Report files: structured JSON, a delimited per-world table, and figures.

``write_report`` renders an EvalReport to a directory:

    report.json      full structured report with provenance
    per_world.tsv    one row per sampled world (tab-delimited)
    figures/success_histogram.png
    figures/success_convergence.png

The JSON and TSV bytes are a pure function of the report, so runs with the
same master seed produce identical files.  Figures are rendered with the
matplotlib Agg backend and are skipped when ``figures=False``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .harness import EvalReport

_PAYOFF = {"V": 1.0, "L": 0.0, "D": 0.5}


def report_to_json_text(report: EvalReport) -> str:
    data = {
        "provenance": report.provenance,
        "aggregate": {
            "mean": None if report.mean is None else str(report.mean),
            "mean_float": None if report.mean is None else float(report.mean),
            "stderr": report.stderr,
            "ci95": list(report.ci95) if report.ci95 else None,
            "threshold": str(report.threshold),
            "passed": report.passed,
            "worlds_evaluated": len(report.entries),
            "worlds_failed": len(report.failures),
        },
        "notes": list(report.notes),
        "per_world": [
            {
                "index": e.index,
                "world_hash": e.world_hash,
                "size": e.size,
                "deterministic": e.deterministic,
                "mean": str(e.mean),
                "mean_float": float(e.mean),
                "lives": [
                    {"seed": life.seed, "outcomes": life.outcomes,
                     "success": str(life.value)}
                    for life in e.lives
                ],
            }
            for e in report.entries
        ],
        "failures": [{"index": i, "error": msg} for i, msg in report.failures],
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def report_to_tsv_text(report: EvalReport) -> str:
    lines = ["index\tworld_hash\tsize\tdeterministic\tlives\tmean_success\tmean_float"]
    for e in report.entries:
        lines.append(f"{e.index}\t{e.world_hash}\t{e.size}\t"
                     f"{int(e.deterministic)}\t{len(e.lives)}\t{e.mean}\t"
                     f"{float(e.mean)!r}")
    return "\n".join(lines) + "\n"


def report_summary_text(report: EvalReport) -> str:
    lines = [f"agent: {report.agent_spec}",
             f"worlds evaluated: {len(report.entries)}"
             + (f" (+{len(report.failures)} failed)" if report.failures else "")]
    if report.mean is None:
        lines.append("no successful entries; nothing to aggregate")
    else:
        lines.append(f"mean success: {report.mean} ({float(report.mean):.4f})")
        if report.ci95:
            lines.append(f"95% interval: [{report.ci95[0]:.4f}, {report.ci95[1]:.4f}]")
        verdict = "PASS" if report.passed else "FAIL"
        lines.append(f"threshold {report.threshold}: {verdict} "
                     f"(pass means mean > threshold)")
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines) + "\n"


def _prefix_means(report: EvalReport) -> list[float]:
    """Mean success over the first k games, averaged over all lives."""
    series = []
    longest = max((len(life.outcomes) for e in report.entries for life in e.lives),
                  default=0)
    for k in range(1, longest + 1):
        points = []
        for entry in report.entries:
            for life in entry.lives:
                prefix = life.outcomes[:k]
                if prefix:
                    points.append(sum(_PAYOFF[ch] for ch in prefix) / len(prefix))
        if points:
            series.append(sum(points) / len(points))
    return series


def render_figures(report: EvalReport, out_dir: Path) -> list[Path]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    values = [float(e.mean) for e in report.entries]
    fig, ax = plt.subplots(figsize=(6, 4))
    if values:
        ax.hist(values, bins=min(20, max(5, len(values) // 2)), range=(0.0, 1.0),
                color="#4878a8", edgecolor="white")
        ax.axvline(float(report.mean), color="#c44e52", linestyle="-",
                   label=f"mean {float(report.mean):.3f}")
    ax.axvline(float(report.threshold), color="#55a868", linestyle="--",
               label=f"threshold {report.threshold}")
    ax.set_xlabel("per-world mean success")
    ax.set_ylabel("worlds")
    ax.set_title("success across sampled worlds")
    ax.legend(loc="best")
    fig.tight_layout()
    hist_path = out_dir / "success_histogram.png"
    fig.savefig(hist_path)
    plt.close(fig)
    paths.append(hist_path)

    series = _prefix_means(report)
    fig, ax = plt.subplots(figsize=(6, 4))
    if series:
        ax.plot(range(1, len(series) + 1), series, color="#4878a8")
    ax.axhline(float(report.threshold), color="#55a868", linestyle="--",
               label=f"threshold {report.threshold}")
    ax.set_xlabel("games played")
    ax.set_ylabel("mean success so far")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title("success convergence over the life")
    ax.legend(loc="best")
    fig.tight_layout()
    conv_path = out_dir / "success_convergence.png"
    fig.savefig(conv_path)
    plt.close(fig)
    paths.append(conv_path)
    return paths


def write_report(report: EvalReport, out_dir, figures: bool = True) -> dict:
    """Write report files under ``out_dir``; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    json_path = out / "report.json"
    json_path.write_text(report_to_json_text(report))
    paths["json"] = json_path
    tsv_path = out / "per_world.tsv"
    tsv_path.write_text(report_to_tsv_text(report))
    paths["tsv"] = tsv_path
    if figures:
        paths["figures"] = render_figures(report, out / "figures")
    return paths
