"""Report serialization: deterministic JSON/CSV writers plus a summary figure.

Two runs with the same configuration must produce byte-identical report
files, so everything here is sorted, versioned ("schema": 1) and free of
timestamps.  When a report is written to a file, a PNG figure summarizing
the check table is rendered next to it.
"""

import csv
import io
import json
import os


def report_dict(config, rows, payloads=None):
    """Bundle check rows (and optional per-label payloads) into a report."""
    out = {
        "schema": 1,
        "config": config,
        "rows": [
            {
                "label": row.label,
                "check": row.check,
                "expected": row.expected,
                "got": row.got,
                "pass": bool(row.passed),
            }
            for row in rows
        ],
        "pass": all(row.passed for row in rows),
    }
    if payloads:
        out["labels"] = payloads
    return out


def to_json_bytes(report):
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def to_csv_bytes(report):
    """One row per (label, check, expected, got, pass)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "check", "expected", "got", "pass"])
    for row in report["rows"]:
        writer.writerow(
            [
                row["label"],
                row["check"],
                row["expected"],
                row["got"],
                "true" if row["pass"] else "false",
            ]
        )
    return buf.getvalue().encode("utf-8")


def write_report(report, out_path, out_format):
    """Write the delimited report and render the PNG figure alongside it."""
    data = to_json_bytes(report) if out_format == "json" else to_csv_bytes(report)
    with open(out_path, "wb") as fh:
        fh.write(data)
    render_figure(report, os.path.splitext(out_path)[0] + ".png")
    return data


def render_figure(report, png_path):
    """Pass/fail counts per check kind, plus per-label dims when available."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    counts = {}
    for row in report["rows"]:
        kind = row["check"].split("[")[0]
        ok, bad = counts.get(kind, (0, 0))
        counts[kind] = (ok + bool(row["pass"]), bad + (not row["pass"]))
    payloads = report.get("labels") or []
    ncols = 2 if payloads else 1
    height = max(2.5, 0.35 * max(len(counts), len(payloads)) + 1.5)
    fig, axes = plt.subplots(1, ncols, figsize=(6.0 * ncols, height), squeeze=False)

    ax = axes[0][0]
    kinds = sorted(counts)
    passes = [counts[k][0] for k in kinds]
    fails = [counts[k][1] for k in kinds]
    ys = range(len(kinds))
    ax.barh(ys, passes, color="#3a7d44", label="pass")
    ax.barh(ys, fails, left=passes, color="#b33939", label="fail")
    ax.set_yticks(ys)
    ax.set_yticklabels(kinds, fontsize=8)
    ax.set_xlabel("checks")
    ax.set_title("verification checks")
    ax.legend(loc="lower right", fontsize=8)

    if payloads:
        ax = axes[0][1]
        names = [pay["label"] for pay in payloads]
        ys = range(len(names))
        keys = ("module", "head", "socle", "radical")
        colors = ("#4a69bd", "#3a7d44", "#e58e26", "#b33939")
        width = 0.2
        for k, (key, color) in enumerate(zip(keys, colors)):
            vals = [pay["dims"][key] for pay in payloads]
            ax.barh(
                [y + (k - 1.5) * width for y in ys],
                vals,
                height=width,
                color=color,
                label=key,
            )
        ax.set_yticks(ys)
        ax.set_yticklabels(names, fontsize=8)
        ax.set_xlabel("dimension")
        ax.set_title("module dimensions per label")
        ax.legend(loc="lower right", fontsize=8)

    fig.tight_layout()
    fig.savefig(png_path, dpi=100, metadata={"Software": ""})
    plt.close(fig)
