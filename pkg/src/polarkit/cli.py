"""Command-line front end.

Verbs: construct, encode, decode, simulate, bench. Long-form flags only;
simulate/bench read a JSON config and flags override file values.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .codec import encode_payload, info_from_codeword
from .construction import code_from_dict, code_to_dict, load_code
from .list_decoder import ScListDecoder, SscListDecoder, select_output
from .sc import FastSscDecoder, ScDecoder, channel_ll, sc_info_bits
from .simulate import (
    DecoderSpec,
    _FrameDecoder,
    bench_decoder,
    code_from_config,
    emit_results,
    override_config,
    run_sweep,
    sim_config_from_dict,
)
from .tree import build_decoder_tree


def _read_bits(path: str) -> np.ndarray:
    with open(path) as fh:
        text = "".join(fh.read().split())
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"config field 'in': {path} must contain only 0/1 characters")
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")


def _write_bits(path: str | None, bits: np.ndarray) -> None:
    text = "".join("1" if b else "0" for b in bits)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _read_soft(path: str) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln:
                continue
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError("config field 'in': soft input needs one float pair per line")
            rows.append((float(parts[0]), float(parts[1])))
    return np.array(rows, dtype=np.float64)


def _cmd_construct(args) -> int:
    from .construction import build_code

    code = build_code(
        n_bits=args.n,
        k_info=args.k,
        crc=args.crc,
        design_snr_db=args.design_snr,
        systematic=not args.non_systematic,
    )
    doc = json.dumps(code_to_dict(code), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    return 0


def _cmd_encode(args) -> int:
    code = load_code(args.code)
    payload = _read_bits(args.infile)
    x = encode_payload(code, payload)
    _write_bits(args.out, x)
    return 0


def _cmd_decode(args) -> int:
    code = load_code(args.code)
    if args.in_format == "bits":
        x = _read_bits(args.infile)
        if x.size != code.n_bits:
            raise ValueError(f"config field 'in': expected {code.n_bits} bits, got {x.size}")
        alpha = channel_ll(1.0 - 2.0 * x.astype(np.float64), 0.1)
    else:
        alpha = _read_soft(args.infile)
        if alpha.shape != (code.n_bits, 2):
            raise ValueError(
                f"config field 'in': expected {code.n_bits} soft pairs, got {alpha.shape[0]}"
            )
    spec = DecoderSpec(kind=args.decoder, list_size=args.list_size, constraint=args.constraint)
    info = _FrameDecoder(code, spec).decode(alpha)
    _write_bits(args.out, info[: code.k_info])
    return 0


def _load_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _cmd_simulate(args) -> int:
    config = sim_config_from_dict(_load_config(args.config))
    config = override_config(
        config,
        seed=args.seed,
        workers=args.workers,
        ebn0_db=[float(v) for v in args.ebn0.split(",")] if args.ebn0 else None,
        min_frame_errors=args.min_frame_errors,
        max_frames=args.max_frames,
        kind=args.decoder,
        list_size=args.list_size,
        constraint=args.constraint,
        batch_frames=args.batch_frames,
    )
    result = run_sweep(config)
    emit_results(result, args.out)
    return 0


def _cmd_bench(args) -> int:
    doc = _load_config(args.config)
    code = code_from_config(doc["code"] if "code" in doc else doc)
    dd = doc.get("decoder", {})
    mls = dd.get("max_leaf_size")
    spec = DecoderSpec(
        kind=args.decoder or dd.get("kind", "ssc_list"),
        list_size=args.list_size or int(dd.get("list_size", 32)),
        constraint=args.constraint or int(dd.get("constraint", 8)),
        max_leaf_size=None if mls is None else int(mls),
    )
    ebn0 = float(args.ebn0) if args.ebn0 else float(doc.get("ebn0_db", 4.0))
    frames = args.frames or int(doc.get("frames", 200))
    stats = bench_decoder(code, spec, ebn0, frames, seed=int(doc.get("seed", 1)))
    lines = [
        "decoder,list_size,constraint,ebn0_db,frames,"
        "mean_latency_s,p50_latency_s,p100_latency_s,throughput_bps",
        f"{spec.kind},{spec.list_size},{spec.constraint},{ebn0!r},{frames},"
        f"{stats.mean_latency_s!r},{stats.p50_latency_s!r},"
        f"{stats.p100_latency_s!r},{stats.throughput_bps!r}",
    ]
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="polarkit",
        description="Polar code construction, encoding, decoding, and AWGN benchmarks.",
    )
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("construct", help="build a code and print/save its JSON description")
    c.add_argument("--n", type=int, required=True, help="code length (power of two)")
    c.add_argument("--k", type=int, required=True, help="payload bits per frame")
    c.add_argument("--crc", type=int, default=32, choices=(0, 8, 32),
                   help="CRC width appended to the payload (default: 32, the 802.3 CRC)")
    c.add_argument("--design-snr", type=float, default=2.0,
                   help="construction design SNR in dB (default: 2)")
    c.add_argument("--non-systematic", action="store_true",
                   help="mark the code for non-systematic encoding")
    c.add_argument("--out", help="output path (default: stdout)")
    c.set_defaults(fn=_cmd_construct)

    e = sub.add_parser("encode", help="encode one frame of payload bits")
    e.add_argument("--code", required=True, help="code JSON from 'construct'")
    e.add_argument("--in", dest="infile", required=True, help="payload bits as 0/1 text")
    e.add_argument("--out", help="codeword bits output (default: stdout)")
    e.set_defaults(fn=_cmd_encode)

    d = sub.add_parser("decode", help="decode one frame of soft values")
    d.add_argument("--code", required=True, help="code JSON from 'construct'")
    d.add_argument("--in", dest="infile", required=True,
                   help="soft input, one 'll0 ll1' pair per line")
    d.add_argument("--in-format", choices=("soft", "bits"), default="soft",
                   help="treat input as soft pairs or as noiseless bits")
    d.add_argument("--decoder", default="ssc_list",
                   choices=("sc", "fast_ssc", "sc_list", "ssc_list", "adaptive"),
                   help="decoding algorithm (default: ssc_list)")
    d.add_argument("--list-size", type=int, default=32, help="list size L (default: 32)")
    d.add_argument("--constraint", type=int, default=8,
                   help="flip-search constraint c (default: 8)")
    d.add_argument("--out", help="decoded payload bits output (default: stdout)")
    d.set_defaults(fn=_cmd_decode)

    s = sub.add_parser("simulate", help="run a Monte-Carlo FER/BER sweep")
    s.add_argument("--config", required=True, help="sweep config JSON")
    s.add_argument("--out", required=True, help="CSV output path")
    s.add_argument("--seed", type=int, help="override config seed")
    s.add_argument("--workers", type=int, help="parallel workers (default: config or all cores)")
    s.add_argument("--ebn0", help="override Eb/N0 points, comma separated dB values")
    s.add_argument("--min-frame-errors", type=int, help="override stop rule (default: 100)")
    s.add_argument("--max-frames", type=int, help="override stop rule (default: 10000000)")
    s.add_argument("--decoder", choices=("sc", "fast_ssc", "sc_list", "ssc_list", "adaptive"),
                   help="override decoder kind")
    s.add_argument("--list-size", type=int, help="override list size L (default: 32)")
    s.add_argument("--constraint", type=int, help="override constraint c (default: 8)")
    s.add_argument("--batch-frames", type=int, help="frames per work batch (default: 64)")
    s.set_defaults(fn=_cmd_simulate)

    b = sub.add_parser("bench", help="measure single-frame decode latency/throughput")
    b.add_argument("--config", required=True, help="bench config JSON (code + decoder)")
    b.add_argument("--out", help="CSV output path (default: stdout)")
    b.add_argument("--frames", type=int, help="timed frames (default: 200, minimum 100)")
    b.add_argument("--ebn0", help="operating Eb/N0 in dB")
    b.add_argument("--decoder", choices=("sc", "fast_ssc", "sc_list", "ssc_list", "adaptive"),
                   help="override decoder kind")
    b.add_argument("--list-size", type=int, help="override list size L (default: 32)")
    b.add_argument("--constraint", type=int, help="override constraint c (default: 8)")
    b.set_defaults(fn=_cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"polarkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
