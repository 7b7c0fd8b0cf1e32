"""polarkit: polar code construction, encoding, decoding, and benchmarking."""

from ._backend import NUMBA_ENABLED, backend_name
from .construction import (
    PolarCode,
    build_code,
    build_frozen_set,
    code_from_dict,
    code_to_dict,
    load_code,
    save_code,
)
from .crc import CRC8_CCITT, CRC32_IEEE, CrcSpec, crc_check, crc_compute
from .codec import (
    build_info_block,
    encode_nonsystematic,
    encode_payload,
    encode_systematic,
    info_from_codeword,
    polar_transform,
)
from .tree import (
    FAST_SSC_REPERTOIRE,
    SSC_REPERTOIRE,
    DecoderTree,
    NodeKind,
    build_decoder_tree,
)
from .sc import (
    FastSscDecoder,
    ScDecoder,
    channel_ll,
    f_combine,
    fast_ssc_decode,
    g_combine,
    sc_decode,
)
from .list_decoder import (
    CandidateFork,
    CandidateSet,
    ScListDecoder,
    SscListDecoder,
    append_candidates,
    merge_best_candidates,
    rate1_ml,
    replace_candidates,
    sc_list_decode,
    select_output,
    ssc_list_decode,
)
from .adaptive import AdaptiveDecoder, AdaptiveResult, adaptive_decode, predict_throughput
from .simulate import (
    BenchStats,
    DecoderSpec,
    SimConfig,
    SimResult,
    StopRule,
    SweepRow,
    awgn_transmit,
    bench_decoder,
    emit_results,
    read_results,
    run_sweep,
    sim_config_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveDecoder",
    "AdaptiveResult",
    "BenchStats",
    "CRC32_IEEE",
    "CRC8_CCITT",
    "CandidateFork",
    "CandidateSet",
    "CrcSpec",
    "DecoderSpec",
    "DecoderTree",
    "FAST_SSC_REPERTOIRE",
    "FastSscDecoder",
    "NodeKind",
    "NUMBA_ENABLED",
    "PolarCode",
    "SSC_REPERTOIRE",
    "ScDecoder",
    "ScListDecoder",
    "SimConfig",
    "SimResult",
    "SscListDecoder",
    "StopRule",
    "SweepRow",
    "adaptive_decode",
    "append_candidates",
    "awgn_transmit",
    "backend_name",
    "bench_decoder",
    "build_code",
    "build_decoder_tree",
    "build_frozen_set",
    "build_info_block",
    "channel_ll",
    "code_from_dict",
    "code_to_dict",
    "crc_check",
    "crc_compute",
    "emit_results",
    "encode_nonsystematic",
    "encode_payload",
    "encode_systematic",
    "f_combine",
    "fast_ssc_decode",
    "g_combine",
    "info_from_codeword",
    "load_code",
    "merge_best_candidates",
    "polar_transform",
    "predict_throughput",
    "rate1_ml",
    "read_results",
    "replace_candidates",
    "run_sweep",
    "save_code",
    "sc_decode",
    "sc_list_decode",
    "select_output",
    "sim_config_from_dict",
    "ssc_list_decode",
]
