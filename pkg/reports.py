"""
Payload models for command output and run reports
"""

import csv
import io
from typing import Any, Dict, List, Literal, Optional

import mpmath
from pydantic import BaseModel, Field

from enumeration import CountTable, CycleReport, DepthProfile
from sequences import SockPattern, render, render_multiset
from series import K_PAPER, AsymptoticEstimate
from sorter import PUSH, SortTrace


class TraceEvent(BaseModel):
    op: Literal["push", "pop"]
    sock: str


class SortTraceModel(BaseModel):
    sigma: str
    input: str
    output: str
    events: List[TraceEvent]

    @classmethod
    def from_trace(cls, trace: SortTrace, sigma: SockPattern) -> "SortTraceModel":
        return cls(
            sigma=render(sigma),
            input=render(trace.input),
            output=render(trace.output),
            events=[TraceEvent(op="push" if op == PUSH else "pop", sock=render((s,))) for op, s in trace.events],
        )


class CountRow(BaseModel):
    n: int
    r: Optional[int] = None
    count: int


class CountTableModel(BaseModel):
    k: int
    rows: List[CountRow]

    @classmethod
    def from_table(cls, table: CountTable, refined: bool) -> "CountTableModel":
        if refined:
            rows = [CountRow(n=n, r=r, count=c) for (n, r), c in sorted(table.entries.items())]
        else:
            rows = [CountRow(n=n, count=table.marginal(n)) for n in table.lengths()]
        return cls(k=table.k, rows=rows)


class DepthProfileModel(BaseModel):
    n: int
    histogram: Dict[int, int]

    @classmethod
    def from_profile(cls, profile: DepthProfile) -> "DepthProfileModel":
        return cls(n=profile.n, histogram=dict(profile.histogram))


class CycleModel(BaseModel):
    period: int
    representative: str


class CycleReportModel(BaseModel):
    sigma: str
    multiset: str
    cycles: List[CycleModel]
    max_transient: int
    unresolved: int = 0

    @classmethod
    def from_report(cls, report: CycleReport) -> "CycleReportModel":
        return cls(
            sigma=render(report.sigma),
            multiset=render_multiset(report.multiset),
            cycles=[CycleModel(period=p, representative=render(rep)) for p, rep in report.cycles],
            max_transient=report.max_transient,
            unresolved=report.unresolved,
        )


def six_digits(value) -> float:
    """Round to 6 significant digits"""
    return float(mpmath.nstr(value, 6))


class AsymptoticModel(BaseModel):
    x0: float
    c: float
    N: int
    K_estimate: float
    K_paper: float = K_PAPER
    samples: Dict[int, float] = Field(default_factory=dict, exclude=True)

    @classmethod
    def from_estimate(cls, estimate: AsymptoticEstimate) -> "AsymptoticModel":
        return cls(
            x0=six_digits(estimate.x0),
            c=six_digits(estimate.c),
            N=estimate.N_used,
            K_estimate=six_digits(estimate.K_estimate),
            samples={n: six_digits(v) for n, v in estimate.samples.items()},
        )


class VerifyRow(BaseModel):
    n: int
    r: Optional[int] = None
    brute: int
    closed: int
    functional: int

    @property
    def matches(self) -> bool:
        return self.brute == self.closed == self.functional


class RunReport(BaseModel):
    """One CLI invocation: echo, parameters, payload and timing"""

    command: str
    parameters: Dict[str, Any]
    results: Any = None
    wall_time: float = 0.0


def _csv(header: List[str], rows: List[List[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def count_table_csv(model: CountTableModel) -> str:
    if any(row.r is not None for row in model.rows):
        return _csv(["n", "r", "count"], [[row.n, row.r, row.count] for row in model.rows])
    return _csv(["n", "count"], [[row.n, row.count] for row in model.rows])


def depth_profile_csv(models: List[DepthProfileModel]) -> str:
    rows = [[m.n, depth, count] for m in models for depth, count in sorted(m.histogram.items())]
    return _csv(["n", "depth", "count"], rows)


def verify_table(rows: List[VerifyRow]) -> str:
    """Fixed-width comparison table, one row per (n) or (n, r)"""
    refined = any(row.r is not None for row in rows)
    header = ["n"] + (["r"] if refined else []) + ["brute", "closed", "functional", "status"]
    lines = [header]
    for row in rows:
        cells = [str(row.n)] + ([str(row.r)] if refined else [])
        cells += [str(row.brute), str(row.closed), str(row.functional), "MATCH" if row.matches else "MISMATCH"]
        lines.append(cells)
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip() for line in lines)
