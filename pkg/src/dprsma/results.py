"""Result containers and deterministic CSV/JSON emission."""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from pathlib import Path

CSV_HEADER = (
    "scheme,group,user,snr_db,chi,xi,csi_error,metric,source,value,std_error,trials,seed"
)

_COLUMNS = CSV_HEADER.split(",")


@dataclass
class MetricEstimate:
    """A point estimate with its normal-approximation standard error."""

    value: float
    std_error: float
    trials: int
    metric: str


@dataclass
class ResultRow:
    """One (sweep point, metric, source) record of a run."""

    scheme: str
    group: int
    user: str
    snr_db: float
    chi: float
    xi: float
    csi_error: float
    metric: str
    source: str          # "analytic" | "mc"
    value: float
    std_error: float
    trials: int
    seed: int

    def to_csv_line(self) -> str:
        vals = [getattr(self, c) for c in _COLUMNS]
        return ",".join(_fmt(v) for v in vals)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)          # shortest round-trip representation
    return str(v)


def emit_csv(rows: list[ResultRow], path: str | Path, config_echo: dict | None = None) -> None:
    """Write rows as CSV (UTF-8, LF) with the resolved config as '#' comments."""
    if not rows:
        raise ValueError("refusing to emit an empty result table")
    lines = []
    if config_echo is not None:
        lines.append("# config: " + json.dumps(config_echo, sort_keys=True))
    lines.append(CSV_HEADER)
    lines.extend(r.to_csv_line() for r in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def emit_json(rows: list[ResultRow], path: str | Path, config_echo: dict | None = None) -> None:
    """Write rows as a JSON array of row objects.

    The resolved config is echoed to a sibling `<path>.config.json` metadata
    file so the array-of-rows shape stays clean for consumers.
    """
    if not rows:
        raise ValueError("refusing to emit an empty result table")
    payload = json.dumps([asdict(r) for r in rows], indent=1, sort_keys=True)
    Path(path).write_text(payload + "\n", encoding="utf-8", newline="\n")
    if config_echo is not None:
        meta = Path(str(path) + ".config.json")
        meta.write_text(
            json.dumps(config_echo, indent=1, sort_keys=True) + "\n",
            encoding="utf-8", newline="\n",
        )


def read_csv(path: str | Path) -> list[ResultRow]:
    """Parse a CSV produced by emit_csv back into rows."""
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        if line == CSV_HEADER:
            continue
        parts = line.split(",")
        if len(parts) != len(_COLUMNS):
            raise ValueError(f"malformed CSV line: {line!r}")
        rows.append(
            ResultRow(
                scheme=parts[0],
                group=int(parts[1]),
                user=parts[2],
                snr_db=float(parts[3]),
                chi=float(parts[4]),
                xi=float(parts[5]),
                csi_error=float(parts[6]),
                metric=parts[7],
                source=parts[8],
                value=float(parts[9]),
                std_error=float(parts[10]),
                trials=int(parts[11]),
                seed=int(parts[12]),
            )
        )
    return rows
