"""AWGN/BPSK Monte-Carlo estimation and latency benchmarking.

Frames are processed in fixed-size batches with one counter-based RNG
stream per frame (Philox keyed by ``(seed, point << 32 | frame)``), so the
set of simulated frames and every statistic are bit-identical for any
worker count. Workers may overrun the stop rule; surplus batches are
discarded before aggregation.
"""

from __future__ import annotations

import concurrent.futures
import os
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .adaptive import AdaptiveDecoder
from .codec import encode_payload, info_from_codeword
from .construction import PolarCode, build_code
from .list_decoder import ScListDecoder, SscListDecoder, select_output
from .sc import FastSscDecoder, ScDecoder, channel_ll, sc_info_bits
from .tree import SSC_REPERTOIRE, build_decoder_tree

DECODER_KINDS = ("sc", "fast_ssc", "sc_list", "ssc_list", "adaptive")


@dataclass(frozen=True)
class DecoderSpec:
    kind: str = "ssc_list"
    list_size: int = 32
    constraint: int = 8
    max_leaf_size: int | None = None

    def __post_init__(self):
        if self.kind not in DECODER_KINDS:
            raise ValueError(f"decoder.kind must be one of {DECODER_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class StopRule:
    min_frame_errors: int = 100
    max_frames: int = 10_000_000

    def __post_init__(self):
        if self.min_frame_errors < 1:
            raise ValueError("stop.min_frame_errors must be at least 1")
        if self.max_frames < 1:
            raise ValueError("stop.max_frames must be at least 1")


@dataclass
class SimConfig:
    code: PolarCode
    decoder: DecoderSpec
    ebn0_db: list[float]
    stop: StopRule = field(default_factory=StopRule)
    seed: int = 1
    batch_frames: int = 64
    workers: int = 1

    def __post_init__(self):
        if not self.ebn0_db:
            raise ValueError("ebn0_db must list at least one point")
        if self.batch_frames < 1:
            raise ValueError("batch_frames must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.decoder.kind == "adaptive" and self.code.crc is None:
            raise ValueError("decoder 'adaptive' requires a code with a CRC")


@dataclass
class SweepRow:
    ebn0_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ber: float
    mean_latency_s: float
    max_latency_s: float
    throughput_bps: float
    stage2_fraction: float | None


@dataclass
class SimResult:
    rows: list[SweepRow]


@dataclass
class BenchStats:
    mean_latency_s: float
    p50_latency_s: float
    p100_latency_s: float
    throughput_bps: float


def awgn_transmit(x: np.ndarray, ebn0_db: float, system_rate: float, rng) -> np.ndarray:
    """BPSK-modulate, add white Gaussian noise, return soft pairs.

    The noise variance is ``1 / (2 * system_rate * 10^(ebn0/10))`` with the
    overall system rate (payload bits over block length).
    """
    if not 0.0 < system_rate <= 1.0:
        raise ValueError(f"system rate must be in (0, 1], got {system_rate}")
    x = np.asarray(x, dtype=np.uint8)
    sigma = float(np.sqrt(1.0 / (2.0 * system_rate * 10.0 ** (ebn0_db / 10.0))))
    y = (1.0 - 2.0 * x.astype(np.float64)) + rng.normal(0.0, sigma, x.size)
    return channel_ll(y, sigma)


def _frame_rng(seed: int, point: int, frame: int):
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, ((point << 32) | frame) & 0xFFFFFFFFFFFFFFFF],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class _FrameDecoder:
    """Per-worker decoder instance: decodes soft input to an info block."""

    def __init__(self, code: PolarCode, spec: DecoderSpec):
        self.code = code
        self.spec = spec
        self.stage2 = False
        kind = spec.kind
        if kind == "sc":
            self._sc = ScDecoder(code)
        elif kind == "fast_ssc":
            self._fast = FastSscDecoder(build_decoder_tree(code))
        elif kind == "ssc_list":
            tree = build_decoder_tree(code, SSC_REPERTOIRE, spec.max_leaf_size)
            self._list = SscListDecoder(tree, spec.list_size, spec.constraint)
        elif kind == "sc_list":
            self._list = ScListDecoder(code, spec.list_size)
        elif kind == "adaptive":
            self._adaptive = AdaptiveDecoder(code, spec.list_size, spec.constraint)

    def decode(self, alpha) -> np.ndarray:
        code = self.code
        kind = self.spec.kind
        self.stage2 = False
        if kind == "sc":
            u, _, _ = self._sc.decode(alpha)
            return sc_info_bits(code, u)
        if kind == "fast_ssc":
            x, _ = self._fast.decode(alpha)
            return info_from_codeword(code, x)
        if kind == "adaptive":
            res = self._adaptive.decode(alpha)
            self.stage2 = res.stage == "list"
            return res.info_bits
        xs, rs = self._list.decode(alpha)
        if code.crc is not None:
            cands = [(info_from_codeword(code, x), float(r)) for x, r in zip(xs, rs)]
            info, _ = select_output(cands, code.crc)
            return info
        return info_from_codeword(code, xs[0])


@dataclass
class _BatchStats:
    frames: int = 0
    frame_errors: int = 0
    bit_errors: int = 0
    decode_time: float = 0.0
    max_latency: float = 0.0
    stage2: int = 0

    def add(self, other: "_BatchStats"):
        self.frames += other.frames
        self.frame_errors += other.frame_errors
        self.bit_errors += other.bit_errors
        self.decode_time += other.decode_time
        self.max_latency = max(self.max_latency, other.max_latency)
        self.stage2 += other.stage2


def _run_batch(config: SimConfig, dec: _FrameDecoder, point: int, ebn0: float,
               first: int, count: int) -> _BatchStats:
    code = config.code
    rate = code.k_info / code.n_bits
    out = _BatchStats()
    for frame in range(first, first + count):
        rng = _frame_rng(config.seed, point, frame)
        payload = rng.integers(0, 2, code.k_info, dtype=np.uint8)
        x = encode_payload(code, payload)
        alpha = awgn_transmit(x, ebn0, rate, rng)
        t0 = time.perf_counter()
        info = dec.decode(alpha)
        dt = time.perf_counter() - t0
        errs = int(np.count_nonzero(info[: code.k_info] != payload))
        out.frames += 1
        out.bit_errors += errs
        out.frame_errors += 1 if errs else 0
        out.decode_time += dt
        out.max_latency = max(out.max_latency, dt)
        out.stage2 += 1 if dec.stage2 else 0
    return out


def _sweep_point(config: SimConfig, point: int, ebn0: float,
                 pool: concurrent.futures.ThreadPoolExecutor | None,
                 decoders: list[_FrameDecoder]) -> SweepRow:
    stop = config.stop
    bf = config.batch_frames
    n_batches = (stop.max_frames + bf - 1) // bf

    def batch_bounds(b: int) -> tuple[int, int]:
        first = b * bf
        return first, min(bf, stop.max_frames - first)

    results: dict[int, _BatchStats] = {}
    agg = _BatchStats()
    next_prefix = 0
    stopped = False

    if pool is None:
        b = 0
        while b < n_batches and not stopped:
            first, count = batch_bounds(b)
            agg.add(_run_batch(config, decoders[0], point, ebn0, first, count))
            stopped = agg.frame_errors >= stop.min_frame_errors
            b += 1
    else:
        futures: dict = {}
        next_submit = 0
        idle = list(range(len(decoders)))
        while True:
            while (not stopped and next_submit < n_batches
                   and futures.__len__() < len(decoders) and idle):
                first, count = batch_bounds(next_submit)
                d = idle.pop()
                fut = pool.submit(_run_batch, config, decoders[d], point, ebn0, first, count)
                futures[fut] = (next_submit, d)
                next_submit += 1
            if not futures:
                break
            done, _ = concurrent.futures.wait(
                futures, return_when=concurrent.futures.FIRST_COMPLETED
            )
            for fut in done:
                b, d = futures.pop(fut)
                idle.append(d)
                results[b] = fut.result()
            while next_prefix in results and not stopped:
                agg.add(results.pop(next_prefix))
                next_prefix += 1
                stopped = agg.frame_errors >= stop.min_frame_errors
            results = {} if stopped else results

    code = config.code
    frames = agg.frames
    return SweepRow(
        ebn0_db=ebn0,
        frames=frames,
        frame_errors=agg.frame_errors,
        bit_errors=agg.bit_errors,
        fer=agg.frame_errors / frames,
        ber=agg.bit_errors / (frames * code.k_info),
        mean_latency_s=agg.decode_time / frames,
        max_latency_s=agg.max_latency,
        throughput_bps=code.k_info * frames / agg.decode_time,
        stage2_fraction=(agg.stage2 / frames) if config.decoder.kind == "adaptive" else None,
    )


def run_sweep(config: SimConfig) -> SimResult:
    """Monte-Carlo FER/BER sweep over the configured Eb/N0 points."""
    workers = config.workers
    decoders = [_FrameDecoder(config.code, config.decoder) for _ in range(workers)]
    rows = []
    if workers == 1:
        for point, ebn0 in enumerate(config.ebn0_db):
            rows.append(_sweep_point(config, point, ebn0, None, decoders))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            for point, ebn0 in enumerate(config.ebn0_db):
                rows.append(_sweep_point(config, point, ebn0, pool, decoders))
    return SimResult(rows=rows)


def bench_decoder(code: PolarCode, decoder: DecoderSpec, ebn0_db: float,
                  frames: int, seed: int = 1, warmup: int = 20) -> BenchStats:
    """Per-frame decode latency at one operating point (channel time excluded)."""
    if frames < 100:
        raise ValueError("benchmarking needs at least 100 frames")
    dec = _FrameDecoder(code, decoder)
    rate = code.k_info / code.n_bits
    times = np.empty(frames, dtype=np.float64)
    for frame in range(-warmup, frames):
        rng = _frame_rng(seed, 0, max(frame, 0))
        payload = rng.integers(0, 2, code.k_info, dtype=np.uint8)
        x = encode_payload(code, payload)
        alpha = awgn_transmit(x, ebn0_db, rate, rng)
        t0 = time.perf_counter()
        dec.decode(alpha)
        dt = time.perf_counter() - t0
        if frame >= 0:
            times[frame] = dt
    total = float(times.sum())
    return BenchStats(
        mean_latency_s=total / frames,
        p50_latency_s=float(np.median(times)),
        p100_latency_s=float(times.max()),
        throughput_bps=code.k_info * frames / total,
    )


# ---------------------------------------------------------------------------
# CSV and config I/O
# ---------------------------------------------------------------------------

CSV_HEADER = ("snr_db,frames,frame_errors,bit_errors,FER,BER,"
              "mean_latency_s,max_latency_s,throughput_bps,stage2_fraction")


def emit_results(result: SimResult, path: str) -> None:
    """Write one CSV row per Eb/N0 point (floats in shortest round-trip form)."""
    if not result.rows:
        raise ValueError("result holds no rows")
    lines = [CSV_HEADER]
    for row in result.rows:
        s2 = "" if row.stage2_fraction is None else repr(row.stage2_fraction)
        lines.append(
            f"{row.ebn0_db!r},{row.frames},{row.frame_errors},{row.bit_errors},"
            f"{row.fer!r},{row.ber!r},{row.mean_latency_s!r},{row.max_latency_s!r},"
            f"{row.throughput_bps!r},{s2}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_results(path: str) -> SimResult:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unrecognized results header in {path}")
    rows = []
    for ln in lines[1:]:
        f = ln.split(",")
        rows.append(SweepRow(
            ebn0_db=float(f[0]), frames=int(f[1]), frame_errors=int(f[2]),
            bit_errors=int(f[3]), fer=float(f[4]), ber=float(f[5]),
            mean_latency_s=float(f[6]), max_latency_s=float(f[7]),
            throughput_bps=float(f[8]),
            stage2_fraction=None if f[9] == "" else float(f[9]),
        ))
    return SimResult(rows=rows)


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ValueError(f"config field '{where}{key}' is missing")
    return d[key]


def code_from_config(d: dict, where: str = "code.") -> PolarCode:
    crc = d.get("crc", 32)
    if isinstance(crc, dict):
        from .construction import _crc_from_dict

        crc = _crc_from_dict(crc)
    try:
        return build_code(
            n_bits=int(_require(d, "n", where)),
            k_info=int(_require(d, "k_info", where)),
            crc=crc,
            design_snr_db=float(d.get("design_snr_db", 2.0)),
            systematic=bool(d.get("systematic", True)),
        )
    except ValueError as exc:
        raise ValueError(f"config field '{where}*': {exc}") from exc


def sim_config_from_dict(d: dict) -> SimConfig:
    code = code_from_config(_require(d, "code", ""))
    dd = d.get("decoder", {})
    mls = dd.get("max_leaf_size")
    decoder = DecoderSpec(
        kind=dd.get("kind", "ssc_list"),
        list_size=int(dd.get("list_size", 32)),
        constraint=int(dd.get("constraint", 8)),
        max_leaf_size=None if mls is None else int(mls),
    )
    sd = d.get("stop", {})
    stop = StopRule(
        min_frame_errors=int(sd.get("min_frame_errors", 100)),
        max_frames=int(sd.get("max_frames", 10_000_000)),
    )
    ebn0 = [float(v) for v in _require(d, "ebn0_db", "")]
    workers = d.get("workers")
    return SimConfig(
        code=code,
        decoder=decoder,
        ebn0_db=ebn0,
        stop=stop,
        seed=int(d.get("seed", 1)),
        batch_frames=int(d.get("batch_frames", 64)),
        workers=int(workers) if workers is not None else (os.cpu_count() or 1),
    )


def override_config(config: SimConfig, **kwargs) -> SimConfig:
    """Apply non-None keyword overrides onto a parsed config."""
    updates = {k: v for k, v in kwargs.items() if v is not None}
    dec_updates = {k: updates.pop(k) for k in ("kind", "list_size", "constraint")
                   if k in updates}
    stop_updates = {k: updates.pop(k) for k in ("min_frame_errors", "max_frames")
                    if k in updates}
    if dec_updates:
        updates["decoder"] = replace(config.decoder, **dec_updates)
    if stop_updates:
        updates["stop"] = replace(config.stop, **stop_updates)
    return replace(config, **updates)
