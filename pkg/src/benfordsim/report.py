"""BenfordReport: the summary of one sample set, and its text/JSON/CSV forms."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Tuple, Union

import numpy as np

from . import metrics
from .digits import DigitTally, percents, tally
from .metrics import ConformanceVerdict
from .sampling import Bound

__all__ = ["BenfordReport", "build_report", "report_to_dict", "report_from_dict",
           "format_report", "write_report", "FORMATS"]

FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class BenfordReport:
    name: str
    expression: str
    runs: int
    seed: Optional[int]
    tally: DigitTally
    percents: Tuple[float, ...]
    ssd: float
    pom_empirical: float
    pom_theoretical: Union[float, Bound]
    oom: float
    mean: float
    median: float
    min: float
    max: float
    skew_ratio: Optional[float]
    log_hist: Tuple[Tuple[float, ...], Tuple[int, ...]]
    verdict: ConformanceVerdict
    elapsed_ms: int = 0
    unparsed: int = 0

    @property
    def digit_one_share(self) -> float:
        return self.percents[0]


def build_report(values, *, name: str, expression: str = "", runs: Optional[int] = None,
                 seed: Optional[int] = None, pom_theoretical=Bound.UNAVAILABLE,
                 elapsed_ms: int = 0, unparsed: int = 0, bin_count: int = 60) -> BenfordReport:
    """Measure a sample set: digits, SSD, POM/OOM, location, log histogram, verdict."""
    from .process import EmptyResult

    x = np.asarray(values, dtype=np.float64).ravel()
    t = tally(x)
    if t.total == 0:
        raise EmptyResult(f"{name}: no value has a first digit")
    p = percents(t)
    d = metrics.ssd(p)
    mags = metrics.magnitudes(x)
    pom = float(mags.max() / mags.min())
    mean, median, ratio = metrics.skew_indicator(x)
    edges, counts = metrics.log_histogram(mags, bin_count)
    return BenfordReport(
        name=name,
        expression=expression,
        runs=int(runs if runs is not None else x.size),
        seed=seed,
        tally=t,
        percents=tuple(float(v) for v in p),
        ssd=d,
        pom_empirical=pom,
        pom_theoretical=pom_theoretical,
        oom=math.log10(pom),
        mean=mean,
        median=median,
        min=float(mags.min()),
        max=float(mags.max()),
        skew_ratio=None if math.isnan(ratio) else ratio,
        log_hist=(tuple(edges), tuple(counts)),
        verdict=metrics.conformance(d, pom),
        elapsed_ms=int(elapsed_ms),
        unparsed=int(unparsed),
    )


def report_to_dict(report: BenfordReport) -> dict:
    out = {}
    for f in fields(report):
        value = getattr(report, f.name)
        if isinstance(value, DigitTally):
            value = value.to_dict()
        elif isinstance(value, ConformanceVerdict):
            value = asdict(value)
        elif isinstance(value, Bound):
            value = value.value
        elif f.name == "log_hist":
            value = {"edges": list(value[0]), "counts": list(value[1])}
        elif isinstance(value, tuple):
            value = list(value)
        out[f.name] = value
    return out


def report_from_dict(data: dict) -> BenfordReport:
    kw = dict(data)
    kw["tally"] = DigitTally.from_dict(data["tally"])
    kw["percents"] = tuple(data["percents"])
    kw["verdict"] = ConformanceVerdict(**data["verdict"])
    kw["log_hist"] = (tuple(data["log_hist"]["edges"]), tuple(data["log_hist"]["counts"]))
    pt = data["pom_theoretical"]
    kw["pom_theoretical"] = Bound(pt) if isinstance(pt, str) else pt
    return BenfordReport(**kw)


def _fmt(v: float, digits: int = 1) -> str:
    return f"{v:.{digits}f}"


def _pom_text(v) -> str:
    return v.value if isinstance(v, Bound) else f"{v:.6g}"


def _text(r: BenfordReport) -> str:
    digits = ", ".join(_fmt(p) for p in r.percents)
    lines = [
        r.name,
        f"  expression: {r.expression}" if r.expression and r.expression != r.name else None,
        f"  runs = {r.runs}   seed = {r.seed}",
        f"  1st significant digits: {{{digits}}}   SSD = {r.ssd:.2f}",
        f"  counts: {{{', '.join(map(str, r.tally.counts))}}}   skipped = {r.tally.skipped}"
        + (f"   unparsed = {r.unparsed}" if r.unparsed else ""),
        f"  POM = {_pom_text(r.pom_empirical)} (theoretical {_pom_text(r.pom_theoretical)})"
        f"   OOM = {r.oom:.3f}",
        f"  mean = {r.mean:.6g}   median = {r.median:.6g}"
        f"   mean/median = {'n/a' if r.skew_ratio is None else f'{r.skew_ratio:.3f}'}",
        f"  verdict: SSD {r.verdict.ssd_class}, POM {r.verdict.pom_class}",
    ]
    return "\n".join(line for line in lines if line is not None) + "\n"


def _csv(r: BenfordReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["digit", "count", "percent", "benford_percent"])
    expected = metrics.benford_expected()
    for d in range(9):
        w.writerow([d + 1, r.tally.counts[d], repr(r.percents[d]), repr(float(expected[d]))])
    w.writerow([])
    w.writerow(["metric", "value"])
    for key in ("name", "expression", "runs", "seed", "ssd", "pom_empirical",
                "pom_theoretical", "oom", "mean", "median", "min", "max", "skew_ratio"):
        value = getattr(r, key)
        w.writerow([key, value.value if isinstance(value, Bound) else value])
    w.writerow(["skipped", r.tally.skipped])
    w.writerow(["ssd_class", r.verdict.ssd_class])
    w.writerow(["pom_class", r.verdict.pom_class])
    return buf.getvalue()


def format_report(report: BenfordReport, fmt: str = "text") -> str:
    if fmt == "text":
        return _text(report)
    if fmt == "json":
        return json.dumps(report_to_dict(report), indent=2) + "\n"
    if fmt == "csv":
        return _csv(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def write_report(report: BenfordReport, fmt: str = "text", path=None) -> None:
    """Write ``report`` to ``path``; ``None`` or ``"-"`` means stdout."""
    text = format_report(report, fmt)
    if path is None or str(path) == "-":
        import sys

        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
