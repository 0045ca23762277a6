"""Master/worker pool simulation with stragglers and failures.

Time is simulated, never slept: a straggler model assigns each worker a
completion time (infinity marks a permanent failure), the run collects the
earliest recovery_threshold finishers, decodes, and checks the output against
the directly computed product.  Identical seeds give byte-identical reports.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .blocks import AugmentedPair, BlockMatrix
from .codec import EncodingPlan, decode, encode, worker_compute, write_share
from .errors import ConfigurationError, NotEnoughResults


class FixedSet:
    """Only the listed workers respond, in list order (times 1, 2, 3, ...)."""

    def __init__(self, responders):
        self.responders = tuple(int(w) for w in responders)
        if len(set(self.responders)) != len(self.responders):
            raise ConfigurationError("responder list contains duplicates")

    def completion_times(self, n_workers: int, trial: int = 0) -> np.ndarray:
        times = np.full(n_workers, math.inf)
        for rank, w in enumerate(self.responders):
            if not 1 <= w <= n_workers:
                raise ConfigurationError(f"responder id {w} outside pool 1..{n_workers}")
            times[w - 1] = float(rank + 1)
        return times

    def describe(self) -> dict:
        return {"model": "fixed-set", "responders": ",".join(map(str, self.responders))}


class RandomSubset:
    """A seeded random choice of `count` responders; the rest never finish."""

    def __init__(self, count: int, seed: int = 0):
        if count < 0:
            raise ConfigurationError(f"responder count must be >= 0, got {count}")
        self.count = int(count)
        self.seed = int(seed)

    def completion_times(self, n_workers: int, trial: int = 0) -> np.ndarray:
        if self.count > n_workers:
            raise ConfigurationError(
                f"cannot pick {self.count} responders from {n_workers} workers"
            )
        rng = np.random.default_rng((0x5EED, self.seed, trial))
        chosen = rng.permutation(n_workers)[: self.count]
        times = np.full(n_workers, math.inf)
        times[chosen] = np.arange(1, self.count + 1, dtype=float)
        return times

    def describe(self) -> dict:
        return {"model": "random-subset", "count": self.count, "seed": self.seed}


class LatencyModel:
    """Per-worker delay = shift + Exponential(1/rate); failures take forever."""

    def __init__(self, shift: float = 1.0, rate: float = 1.0, failure_prob: float = 0.0, seed: int = 0):
        if shift < 0:
            raise ConfigurationError(f"shift must be >= 0, got {shift}")
        if not rate > 0:
            raise ConfigurationError(f"rate must be > 0, got {rate}")
        if not 0.0 <= failure_prob <= 1.0:
            raise ConfigurationError(f"failure_prob must be in [0, 1], got {failure_prob}")
        self.shift = float(shift)
        self.rate = float(rate)
        self.failure_prob = float(failure_prob)
        self.seed = int(seed)

    def completion_times(self, n_workers: int, trial: int = 0) -> np.ndarray:
        rng = np.random.default_rng((0x1A7E, self.seed, trial))
        scale = 0.0 if math.isinf(self.rate) else 1.0 / self.rate
        times = self.shift + rng.exponential(scale, size=n_workers)
        if self.failure_prob:
            times[rng.random(n_workers) < self.failure_prob] = math.inf
        return times

    def describe(self) -> dict:
        return {
            "model": "latency",
            "shift": self.shift,
            "rate": self.rate,
            "failure_prob": self.failure_prob,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class RunReport:
    success: bool
    responders: tuple
    points: tuple
    wall_clock: float
    measured_load: int
    checksum: str
    cause: str = ""
    decoded: BlockMatrix | None = None

    def lines(self) -> list:
        out = [
            f"success={self.success}",
            f"responders={','.join(map(str, self.responders))}",
            f"points={','.join(map(str, self.points))}",
            f"wall_clock={self.wall_clock!r}",
            f"measured_load={self.measured_load}",
            f"checksum={self.checksum}",
        ]
        if self.cause:
            out.append(f"cause={self.cause}")
        return out


def _checksum(matrix: BlockMatrix) -> str:
    h = hashlib.sha256()
    h.update(f"{matrix.shape[0]}x{matrix.shape[1]};".encode())
    h.update(np.ascontiguousarray(matrix.data).tobytes())
    return h.hexdigest()


def _completion_order(times: np.ndarray):
    """Finished worker ids, earliest first; ties broken by worker id."""
    finite = [w for w in range(len(times)) if math.isfinite(times[w])]
    return sorted(finite, key=lambda w: (times[w], w))


def run(
    plan: EncodingPlan,
    pair: AugmentedPair,
    model,
    trial: int = 0,
    trace_dir=None,
) -> RunReport:
    """Dispatch all shares, collect the earliest finishers, decode, verify."""
    shares = encode(plan, pair)
    times = model.completion_times(plan.n_workers, trial)
    order = _completion_order(times)
    p_r = plan.recovery_threshold
    if trace_dir is not None:
        trace_dir = Path(trace_dir)
        trace_dir.mkdir(parents=True, exist_ok=True)
        for share in shares:
            write_share(trace_dir / f"worker_{share.worker_id:04d}.share", share)
    if len(order) < p_r:
        report = RunReport(
            success=False,
            responders=tuple(w + 1 for w in order),
            points=tuple(shares[w].point for w in order),
            wall_clock=math.inf,
            measured_load=0,
            checksum="",
            cause=f"NotEnoughResults: have {len(order)}, need {p_r}",
        )
        _maybe_manifest(trace_dir, plan, model, trial, report)
        return report
    used = order[:p_r]
    results = [worker_compute(shares[w], float(times[w])) for w in used]
    decoded = decode(plan, results)
    expected = plan.field.matmul(pair.original_a, pair.original_b)
    ok = bool(np.array_equal(decoded.data, expected))
    report = RunReport(
        success=ok,
        responders=tuple(w + 1 for w in used),
        points=tuple(shares[w].point for w in used),
        wall_clock=float(times[used[-1]]),
        measured_load=sum(r.product.size for r in results),
        checksum=_checksum(decoded),
        cause="" if ok else "decoded output failed verification",
        decoded=decoded,
    )
    _maybe_manifest(trace_dir, plan, model, trial, report)
    return report


def _maybe_manifest(trace_dir, plan, model, trial, report: RunReport) -> None:
    if trace_dir is None:
        return
    lines = [
        f"t={plan.t}",
        f"s={plan.s}",
        f"d={plan.d}",
        f"pc={plan.p_c}",
        f"modulus={plan.field.p}",
        f"workers={plan.n_workers}",
        f"recovery_threshold={plan.recovery_threshold}",
        f"trial={trial}",
    ]
    lines += [f"{k}={v}" for k, v in model.describe().items()]
    lines += report.lines()
    Path(trace_dir, "manifest.txt").write_text("\n".join(lines) + "\n")


@dataclass(frozen=True)
class LatencySummary:
    times: np.ndarray  # one P_R-th completion time per successful trial
    trials: int
    failed_trials: int

    @property
    def mean(self) -> float:
        return float(np.mean(self.times))

    @property
    def std(self) -> float:
        return float(np.std(self.times, ddof=1)) if len(self.times) > 1 else 0.0

    @property
    def stderr(self) -> float:
        return self.std / math.sqrt(len(self.times)) if len(self.times) else math.inf


def latency_sweep(plan: EncodingPlan, model, trials: int) -> LatencySummary:
    """Empirical distribution of the recovery_threshold-th completion time.

    Samples delays only; no matrix work is done, so large trial counts are
    cheap.  Trials without enough survivors are counted, not included."""
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    p_r = plan.recovery_threshold
    collected = []
    failed = 0
    for trial in range(trials):
        times = np.sort(model.completion_times(plan.n_workers, trial))
        if len(times) < p_r or not math.isfinite(times[p_r - 1]):
            failed += 1
            continue
        collected.append(float(times[p_r - 1]))
    return LatencySummary(np.asarray(collected), trials, failed)
