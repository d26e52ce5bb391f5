"""Streaming analytics over primes congruent to 2 mod 3.

The divergent product r = prod (p**6+1)(p+1) / ((p**2+1)(p**5+1)) and the
reciprocal sum over the progression are accumulated in log space with
Neumaier-compensated float pairs, fed by a segmented wheel sieve (residues
1 and 5 mod 6 stored; 2 mod 3 is the 5 mod 6 track plus the prime 2, which
belongs to the progression and is handled explicitly).  Primes are folded
strictly in ascending order, one at a time, so checkpoint/resume runs are
bit-identical to uninterrupted ones regardless of where they stop.
"""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import CheckpointError

STATE_VERSION = 1
# wheel positions k per segment; each k carries the two stored residues
# 6k+1 and 6k+5, so a segment holds 2**20 wheel entries spanning 6 * 2**19
# integers (cache-resident bool tracks)
DEFAULT_SEGMENT_SIZE = 1 << 19

_BERNOULLI_OVER_FACT = (
    (2, 1.0 / 12.0),  # B2/2!
    (4, -1.0 / 720.0),  # B4/4!
    (6, 1.0 / 30240.0),  # B6/6!
    (8, -1.0 / 1209600.0),  # B8/8!
)


# ---------------------------------------------------------------------------
# ratio terms


def ratio_term(p: int) -> tuple[Fraction, float]:
    """Per-prime factor (p**6+1)(p+1) / ((p**2+1)(p**5+1)) and its log.

    The exact rational is always in (1, 1 + 1/p); the float log uses the
    same log1p expression as the streaming accumulator.
    """
    exact = Fraction((p**6 + 1) * (p + 1), (p * p + 1) * (p**5 + 1))
    inv = 1.0 / p
    inv2 = inv * inv
    inv5 = inv2 * inv2 * inv
    inv6 = inv5 * inv
    log = (math.log1p(inv6) + math.log1p(inv)) - (
        math.log1p(inv2) + math.log1p(inv5)
    )
    return exact, log


# ---------------------------------------------------------------------------
# state and checkpointing


@dataclass(frozen=True)
class RatioState:
    """Checkpointable accumulator over primes = 2 mod 3 up to a limit.

    log_r and recip_sum are Neumaier pairs (hi + lo); both are nondecreasing
    as the limit grows since every term is positive.
    """

    version: int
    segment_size: int
    limit_processed: int
    prime_count: int
    log_r_hi: float
    log_r_lo: float
    recip_hi: float
    recip_lo: float

    @classmethod
    def fresh(cls, segment_size: int = DEFAULT_SEGMENT_SIZE) -> "RatioState":
        return cls(
            version=STATE_VERSION,
            segment_size=segment_size,
            limit_processed=1,
            prime_count=0,
            log_r_hi=0.0,
            log_r_lo=0.0,
            recip_hi=0.0,
            recip_lo=0.0,
        )

    @property
    def log_r(self) -> float:
        return self.log_r_hi + self.log_r_lo

    @property
    def r_estimate(self) -> float:
        return math.exp(self.log_r)

    @property
    def recip_sum(self) -> float:
        return self.recip_hi + self.recip_lo

    def payload_dict(self) -> dict:
        return {
            "version": self.version,
            "segment_size": self.segment_size,
            "limit_processed": self.limit_processed,
            "prime_count": self.prime_count,
            "log_r_hi": self.log_r_hi,
            "log_r_lo": self.log_r_lo,
            "recip_hi": self.recip_hi,
            "recip_lo": self.recip_lo,
        }

    def save(self, path: str) -> None:
        payload = self.payload_dict()
        body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        payload["crc32"] = zlib.crc32(body.encode("ascii"))
        with open(path, "w", encoding="ascii") as fh:
            json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "RatioState":
        try:
            with open(path, "r", encoding="ascii") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
        if not isinstance(data, dict) or "crc32" not in data:
            raise CheckpointError(f"checkpoint {path} lacks a crc32 field")
        crc = data.pop("crc32")
        body = json.dumps(data, sort_keys=True, separators=(",", ":"))
        if zlib.crc32(body.encode("ascii")) != crc:
            raise CheckpointError(f"checkpoint {path} failed its CRC check")
        if data.get("version") != STATE_VERSION:
            raise CheckpointError(
                f"checkpoint version {data.get('version')} != {STATE_VERSION}"
            )
        try:
            return cls(**data)
        except TypeError as exc:
            raise CheckpointError(f"checkpoint {path} has bad fields: {exc}") from exc


# ---------------------------------------------------------------------------
# segmented wheel sieve

_base_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _base_tables(limit: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Base primes >= 5 up to sqrt(limit) with per-track crossing residues.

    For track r in {1, 5}: 6k + r = 0 mod p at k = -r/6 mod p; the inverse
    of 6 has the closed form (p+1)/6 or (5p+1)/6 depending on p mod 6.
    """
    root = math.isqrt(limit)
    cached = _base_cache.get(root)
    if cached is not None:
        return cached
    sieve = np.ones(root + 1, dtype=np.bool_)
    sieve[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    bp = np.flatnonzero(sieve).astype(np.int64)
    bp = bp[bp >= 5]
    inv6 = np.where(bp % 6 == 1, (5 * bp + 1) // 6, (bp + 1) // 6)
    c1 = (bp - inv6 % bp) % bp
    c5 = (bp - 5 * inv6 % bp) % bp
    result = (bp, c1, c5)
    if len(_base_cache) > 8:
        _base_cache.clear()
    _base_cache[root] = result
    return result


def _segment_masks(k0: int, k1: int, limit: int):
    bp, c1, c5 = _base_tables(limit)
    m1, m5 = kernels.wheel_segment(k0, k1, bp, c1, c5)
    if k0 == 0:
        m1[0] = False  # 6*0 + 1 = 1 is not prime
    return m1, m5


def iter_prime_blocks(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE):
    """Yield ascending int64 arrays that together cover all primes <= limit."""
    if limit >= 2:
        head = [p for p in (2, 3) if p <= limit]
        yield np.asarray(head, dtype=np.int64)
    if limit < 5:
        return
    k_max = (limit - 1) // 6  # largest k with 6k+1 <= limit covers both tracks
    for k0 in range(0, k_max + 1, segment_size):
        k1 = min(k0 + segment_size, k_max + 1)
        m1, m5 = _segment_masks(k0, k1, limit)
        p1 = 6 * (k0 + np.flatnonzero(m1).astype(np.int64)) + 1
        p5 = 6 * (k0 + np.flatnonzero(m5).astype(np.int64)) + 5
        block = np.concatenate([p1, p5])
        block.sort(kind="stable")
        block = block[block <= limit]
        if block.size:
            yield block


def count_primes_2_mod_3(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> int:
    """Count of primes p <= limit with p = 2 mod 3 (sieve self-check)."""
    count = 0
    for block in iter_prime_blocks(limit, segment_size):
        count += int((block % 3 == 2).sum())
    return count


# ---------------------------------------------------------------------------
# accumulation


def accumulate_ratio(
    limit: int,
    state: RatioState | None = None,
    *,
    segment_size: int | None = None,
    progress=None,
    progress_stride: int = 10**8,
) -> RatioState:
    """Consume all primes p = 2 mod 3 with state.limit_processed < p <= limit.

    Returns the advanced state.  Folding is strictly per prime in ascending
    order, so for a fixed segment_size (and in fact for any), stopping at an
    arbitrary limit and resuming reproduces an uninterrupted run bit for bit.
    ``progress`` is called with the running state roughly once per
    ``progress_stride`` of range.
    """
    if state is None:
        state = RatioState.fresh(
            DEFAULT_SEGMENT_SIZE if segment_size is None else segment_size
        )
    elif segment_size is not None and segment_size != state.segment_size:
        raise CheckpointError(
            f"segment_size {segment_size} != checkpointed {state.segment_size}"
        )
    if limit < state.limit_processed:
        raise ValueError(
            f"limit {limit} below already-processed bound {state.limit_processed}"
        )
    lo = state.limit_processed
    if limit == lo:
        return state
    acc = [state.log_r_hi, state.log_r_lo, state.recip_hi, state.recip_lo]
    count = state.prime_count

    def fold(block: np.ndarray) -> None:
        nonlocal count
        acc[0], acc[1], acc[2], acc[3] = kernels.fold_terms(
            block, acc[0], acc[1], acc[2], acc[3]
        )
        count += block.size

    if lo < 2 <= limit:
        fold(np.asarray([2], dtype=np.int64))
    next_report = (lo // progress_stride + 1) * progress_stride
    if limit >= 5:
        width = state.segment_size
        k_lo = 0 if lo < 5 else (lo - 5) // 6  # first k whose 6k+5 may exceed lo
        k_max = (limit - 5) // 6
        for k0 in range(k_lo - k_lo % width, k_max + 1, width):
            k1 = min(k0 + width, k_max + 1)
            _, m5 = _segment_masks(k0, k1, limit)
            p5 = 6 * (k0 + np.flatnonzero(m5).astype(np.int64)) + 5
            p5 = p5[(p5 > lo) & (p5 <= limit)]
            if p5.size:
                fold(p5)
            covered = min(limit, 6 * (k1 - 1) + 5)
            if progress is not None and covered >= next_report:
                progress(
                    replace(
                        state,
                        limit_processed=covered,
                        prime_count=count,
                        log_r_hi=acc[0],
                        log_r_lo=acc[1],
                        recip_hi=acc[2],
                        recip_lo=acc[3],
                    )
                )
                next_report = (covered // progress_stride + 1) * progress_stride
    return replace(
        state,
        limit_processed=limit,
        prime_count=count,
        log_r_hi=acc[0],
        log_r_lo=acc[1],
        recip_hi=acc[2],
        recip_lo=acc[3],
    )


def reciprocal_model_gap(state: RatioState) -> float:
    """recip_sum minus log(log(limit)) / 2; stabilizes as the limit grows."""
    if state.limit_processed < 100:
        raise ValueError("gap model needs limit_processed >= 100")
    return state.recip_sum - 0.5 * math.log(math.log(state.limit_processed))


@dataclass(frozen=True)
class Extrapolation:
    target: float
    log10_limit: float
    model_offset: float
    degenerate: bool


def crossing_extrapolation(state: RatioState, target: float = 21.0) -> Extrapolation:
    """Solve log r = log target under the half-log-log growth model.

    Fits C = log_r - log(log(m))/2 at the current state and returns log10 of
    the m where the model reaches the target.  This is an extrapolation of
    the fitted model, not a computed bound.
    """
    if state.limit_processed < 10**6:
        raise ValueError("extrapolation needs limit_processed >= 10**6")
    c = state.log_r - 0.5 * math.log(math.log(state.limit_processed))
    if target <= 1.0:
        return Extrapolation(
            target=target, log10_limit=0.0, model_offset=c, degenerate=True
        )
    loglog = 2.0 * (math.log(target) - c)
    return Extrapolation(
        target=target,
        log10_limit=math.exp(loglog) / math.log(10.0),
        model_offset=c,
        degenerate=False,
    )


# ---------------------------------------------------------------------------
# zeta and the Euler product identity


@dataclass(frozen=True)
class ZetaValue:
    s: int
    value: float


def zeta(s: int) -> ZetaValue:
    """Direct series with an Euler-Maclaurin tail through the B8 term.

    Absolute error is far below 1e-15 for every integer s >= 2 with the
    fixed cutoff N = 1000 (the first omitted term is O(N**(-s-9))).
    """
    if not isinstance(s, int) or s < 2:
        raise ValueError(f"zeta requires an integer s >= 2, got {s!r}")
    n = 1000
    head = math.fsum(k ** (-float(s)) for k in range(1, n))
    tail = [n ** (1.0 - s) / (s - 1.0), 0.5 * n ** (-float(s))]
    for order, coef in _BERNOULLI_OVER_FACT:
        rising = 1.0
        for i in range(order - 1):
            rising *= s + i
        tail.append(coef * rising * n ** (-float(s + order - 1)))
    return ZetaValue(s=s, value=head + math.fsum(tail))


@dataclass(frozen=True)
class EulerProductCheck:
    s: int
    limit: int
    partial: float
    target: float
    gap: float


def euler_product_check(s: int, limit: int) -> EulerProductCheck:
    """Partial prod over all primes p <= limit of (1 + p**-s) against
    zeta(s)/zeta(2s); the gap shrinks with the limit."""
    if s < 2:
        raise ValueError(f"s must be >= 2, got {s}")
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    logs = []
    for block in iter_prime_blocks(limit):
        fl = block.astype(np.float64)
        logs.append(math.fsum(np.log1p(fl ** (-float(s))).tolist()))
    partial = math.exp(math.fsum(logs))
    target = zeta(s).value / zeta(2 * s).value
    return EulerProductCheck(
        s=s, limit=limit, partial=partial, target=target, gap=target - partial
    )
