"""Monte Carlo rate sweeps over SNR with deterministic per-trial streams.

Every trial draws its randomness from an independent substream keyed by
(seed, trial index), so results are bit-identical regardless of how many
worker processes run the trials.
"""
from __future__ import annotations

import concurrent.futures
import csv
import io
import math
import os
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import catalog_field
from .rates import (ChannelRealization, best_coefficients, if_rate,
                    integer_baseline, integer_if_rate, mac_capacity,
                    ml_capacity)

RATE_METRICS = ("rate1", "sumrate", "mac", "z_baseline")
IF_METRICS = ("if_rate", "z_if", "ml")


@dataclass
class SweepConfig:
    """Monte Carlo sweep description."""

    fields: list
    users: int = 2
    snr_db_grid: tuple = tuple(range(0, 55, 5))
    trials: int = 2000
    seed: int = 0
    metrics: tuple = RATE_METRICS

    def __post_init__(self):
        if self.users < 1:
            raise ValueError("users must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        self.fields = list(self.fields)
        degrees = {catalog_field(name).degree for name in self.fields}
        if len(degrees) > 1:
            raise ValueError("all sweep fields must share one degree, got %s"
                             % sorted(degrees))
        self.snr_db_grid = tuple(float(s) for s in self.snr_db_grid)
        self.metrics = tuple(self.metrics)

    @classmethod
    def from_json(cls, doc):
        import json as _json
        if isinstance(doc, str):
            doc = _json.loads(doc)
        return cls(**doc)


@dataclass
class CurvePoint:
    """One aggregated point of a sweep curve."""

    snr_db: float
    field: str
    metric: str
    mean: float
    stderr: float
    trials: int
    seed: int


def _trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _draw_channels(rng, degrees, users):
    """Per-trial channel draws, one per distinct block count, fixed order."""
    return {n: rng.normal(size=(n, users)) for n in sorted(degrees)}


def _rate_trial(cfg, trial):
    fields = [catalog_field(name) for name in cfg.fields]
    degrees = {f.degree for f in fields}
    rng = _trial_rng(cfg.seed, trial)
    hs = _draw_channels(rng, degrees, cfg.users)
    out = {}
    for snr_db in cfg.snr_db_grid:
        P = 10.0 ** (snr_db / 10.0)
        for f in fields:
            ch = ChannelRealization(h=hs[f.degree], snr=P)
            rep = best_coefficients(f, ch)
            mac = mac_capacity(ch)
            lb, slb = rep.lower_bounds
            if not (rep.best_rate >= lb - 1e-9 and rep.sum_rate >= slb - 1e-9
                    and mac >= rep.sum_rate - 1e-9):
                raise AssertionError(
                    "per-trial sanity chain failed: trial=%d field=%s snr=%g"
                    % (trial, f.name, snr_db))
            if "rate1" in cfg.metrics:
                out[(snr_db, f.name, "rate1")] = rep.best_rate
            if "sumrate" in cfg.metrics:
                out[(snr_db, f.name, "sumrate")] = rep.sum_rate
        if "mac" in cfg.metrics:
            n0 = fields[0].degree
            out[(snr_db, "-", "mac")] = mac_capacity(
                ChannelRealization(h=hs[n0], snr=P))
        if "z_baseline" in cfg.metrics:
            n0 = fields[0].degree
            rates, _ = integer_baseline(
                ChannelRealization(h=hs[n0], snr=P), k=1)
            out[(snr_db, "Z", "z_baseline")] = rates[0]
    return out


def _if_trial(cfg, trial):
    fields = [catalog_field(name) for name in cfg.fields]
    degrees = {f.degree for f in fields}
    rng = _trial_rng(cfg.seed, trial)
    hs = {n: [rng.normal(size=(cfg.users, cfg.users)) for _ in range(n)]
          for n in sorted(degrees)}
    out = {}
    for snr_db in cfg.snr_db_grid:
        P = 10.0 ** (snr_db / 10.0)
        for f in fields:
            rep = if_rate(f, hs[f.degree], P)
            if rep.rate > rep.ml_capacity + 1e-9:
                raise AssertionError(
                    "IF rate exceeded ML benchmark: trial=%d field=%s snr=%g"
                    % (trial, f.name, snr_db))
            if "if_rate" in cfg.metrics:
                out[(snr_db, f.name, "if_rate")] = rep.rate
        n0 = fields[0].degree
        if "z_if" in cfg.metrics:
            out[(snr_db, "Z", "z_if")] = integer_if_rate(hs[n0], P)
        if "ml" in cfg.metrics:
            out[(snr_db, "-", "ml")] = ml_capacity(hs[n0], P)
    return out


def _default_workers():
    try:
        return max(1, int(os.environ.get("RINGCF_THREADS", "1")))
    except ValueError:
        return 1


def _run(cfg, trial_fn, workers):
    if workers is None:
        workers = _default_workers()
    if workers <= 1:
        results = [trial_fn(cfg, t) for t in range(cfg.trials)]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_TrialRunner(cfg, trial_fn), range(cfg.trials),
                                    chunksize=max(1, cfg.trials // (8 * workers))))
    keys = list(results[0].keys())
    points = []
    for key in keys:
        vals = np.array([r[key] for r in results])
        mean = float(np.mean(vals))
        stderr = float(np.std(vals, ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        snr_db, fname, metric = key
        points.append(CurvePoint(snr_db=snr_db, field=fname, metric=metric,
                                 mean=mean, stderr=stderr, trials=cfg.trials,
                                 seed=cfg.seed))
    return points


class _TrialRunner:
    """Picklable (config, function) pair for process pools."""

    def __init__(self, cfg, fn):
        self.cfg = cfg
        self.fn = fn

    def __call__(self, trial):
        return self.fn(self.cfg, trial)


def run_sweep(cfg, workers=None):
    """Computation-rate sweep; returns CurvePoints in deterministic order."""
    bad = set(cfg.metrics) - set(RATE_METRICS)
    if bad:
        raise ValueError("unknown metrics: %s" % ", ".join(sorted(bad)))
    return _run(cfg, _rate_trial, workers)


def run_if_sweep(cfg, workers=None):
    """Integer-forcing sweep; returns CurvePoints in deterministic order."""
    bad = set(cfg.metrics) - set(IF_METRICS)
    if bad:
        raise ValueError("unknown metrics: %s" % ", ".join(sorted(bad)))
    return _run(cfg, _if_trial, workers)


def export_csv(points, out):
    """Write curve points as CSV (header + one row per point)."""
    close = False
    if isinstance(out, (str, os.PathLike)):
        out = open(out, "w", newline="")
        close = True
    try:
        w = csv.writer(out)
        w.writerow(["snr_db", "field", "metric", "mean", "stderr", "trials", "seed"])
        for pt in points:
            w.writerow([repr(pt.snr_db), pt.field, pt.metric, repr(pt.mean),
                        repr(pt.stderr), pt.trials, pt.seed])
    finally:
        if close:
            out.close()


def csv_string(points):
    buf = io.StringIO()
    export_csv(points, buf)
    return buf.getvalue()


def curve(points, field, metric):
    """(snr_db list, mean list) for one field/metric, ascending SNR."""
    sel = sorted((p.snr_db, p.mean) for p in points
                 if p.field == field and p.metric == metric)
    return [s for s, _ in sel], [m for _, m in sel]


def horizontal_gap_db(points, field_a, metric_a, field_b, metric_b, at_db):
    """SNR offset at which curve A reaches curve B's value at `at_db`.

    Both curves must be increasing over the grid; linear interpolation in dB.
    Returns (gap_db) with positive values meaning A needs more SNR than B.
    """
    xs_b, ys_b = curve(points, field_b, metric_b)
    target = float(np.interp(at_db, xs_b, ys_b))
    xs_a, ys_a = curve(points, field_a, metric_a)
    ys_a = np.maximum.accumulate(ys_a)  # guard tiny non-monotonicity
    if target <= ys_a[0]:
        return xs_a[0] - at_db
    if target > ys_a[-1]:
        return math.inf
    crossing = float(np.interp(target, ys_a, xs_a))
    return crossing - at_db
