"""CSV results plus a JSON sidecar."""
from __future__ import annotations

import csv
import io
import json
import os
from datetime import datetime, timezone
from pathlib import Path

CSV_COLUMNS = ("policy", "t", "mean_regret", "std_regret", "optimal_action_freq")


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def csv_text(traces) -> str:
    """CSV body for the successful traces; floats use round-trip ``repr`` formatting."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for tr in traces:
        if not tr.ok:
            continue
        for t, mean, std, freq in zip(tr.t.tolist(), tr.mean_regret.tolist(), tr.std_regret.tolist(),
                                      tr.optimal_action_freq.tolist()):
            writer.writerow((tr.label, t, repr(mean), repr(std), repr(freq)))
    return buf.getvalue()


def serialize_results(traces, path, config=None) -> tuple:
    """Write ``path`` (CSV) and its ``.json`` sidecar; returns both paths."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(traces), encoding="utf-8")
    side = {
        "created": datetime.now(timezone.utc).isoformat(),
        "config": config.to_dict() if config is not None else None,
        "policies": {
            tr.label: {
                "policy": tr.policy,
                "params": tr.params,
                "error": tr.error,
                "final_mean_regret": tr.final_mean if tr.ok else None,
                "final_std_regret": float(tr.std_regret[-1]) if tr.ok and len(tr.std_regret) else None,
                "metadata": tr.metadata,
            }
            for tr in traces
        },
    }
    if config is not None:
        side["seeds"] = {"base": config.seed, "replications": list(range(config.reps))}
    spath = sidecar_path(path)
    spath.write_text(json.dumps(side, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    return path, spath


def read_results(path) -> dict:
    """Parse a results CSV into ``{label: {column: list}}``."""
    out = {}
    with open(os.fspath(path), newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            cols = out.setdefault(row["policy"], {c: [] for c in CSV_COLUMNS[1:]})
            cols["t"].append(int(row["t"]))
            for c in CSV_COLUMNS[2:]:
                cols[c].append(float(row[c]))
    return out
