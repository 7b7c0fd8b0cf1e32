import numpy as np
import pytest

import polarkit as pk

from conftest import matrix_encode


def _plain_code(n_bits, frozen_idx, systematic=False):
    frozen = np.zeros(n_bits, dtype=bool)
    frozen[list(frozen_idx)] = True
    return pk.PolarCode(n_bits, frozen, n_bits - len(frozen_idx), None, systematic)


def test_length2_generator_examples():
    code = _plain_code(2, [])
    assert list(pk.encode_nonsystematic(code, [1, 0])) == [1, 0]
    assert list(pk.encode_nonsystematic(code, [0, 1])) == [1, 1]


def test_all_zero_is_fixed_point():
    code = pk.build_code(64, 32, crc=None, systematic=False)
    assert not pk.encode_nonsystematic(code, np.zeros(64, dtype=np.uint8)).any()
    code_s = pk.build_code(64, 32, crc=None, systematic=True)
    assert not pk.encode_systematic(code_s, np.zeros(32, dtype=np.uint8)).any()


@pytest.mark.parametrize("n_bits", [4, 8, 16, 32])
def test_matches_generator_matrix(n_bits, rng):
    for _ in range(20):
        u = rng.integers(0, 2, n_bits, dtype=np.uint8)
        assert np.array_equal(pk.polar_transform(u), matrix_encode(u, n_bits))


def test_transform_is_involution(rng):
    for n_bits in (8, 64, 512):
        u = rng.integers(0, 2, n_bits, dtype=np.uint8)
        assert np.array_equal(pk.polar_transform(pk.polar_transform(u)), u)


def test_nonsystematic_rejects_nonzero_frozen():
    code = _plain_code(4, [0, 1])
    with pytest.raises(ValueError):
        pk.encode_nonsystematic(code, [1, 0, 0, 0])
    with pytest.raises(ValueError):
        pk.encode_nonsystematic(code, [0, 0, 0])


def test_systematic_small_example():
    code = _plain_code(4, [0, 1], systematic=True)
    x = pk.encode_systematic(code, [1, 0])
    assert x[2] == 1 and x[3] == 0
    # valid codeword: the inverse transform has zeros at frozen positions
    u = pk.polar_transform(x)
    assert not u[code.frozen].any()
    # re-encoding the recovered source vector reproduces the codeword
    assert np.array_equal(pk.encode_nonsystematic(code, u), x)


def test_systematic_positions_carry_info(rng):
    code = pk.build_code(128, 77, crc=None, systematic=True)
    for _ in range(25):
        info = rng.integers(0, 2, code.k_code, dtype=np.uint8)
        x = pk.encode_systematic(code, info)
        assert np.array_equal(x[code.info_positions], info)
        assert not pk.polar_transform(x)[code.frozen].any()


def test_systematic_rejects_bad_length():
    code = pk.build_code(16, 8, crc=None)
    with pytest.raises(ValueError):
        pk.encode_systematic(code, np.zeros(7, dtype=np.uint8))


def test_payload_framing_with_crc(rng):
    code = pk.build_code(64, 20, crc=8, systematic=True)
    payload = rng.integers(0, 2, 20, dtype=np.uint8)
    block = pk.build_info_block(code, payload)
    assert block.size == 28
    assert pk.crc_check(block, code.crc)
    x = pk.encode_payload(code, payload)
    assert np.array_equal(pk.info_from_codeword(code, x), block)


def test_info_from_codeword_nonsystematic(rng):
    code = pk.build_code(64, 20, crc=8, systematic=False)
    payload = rng.integers(0, 2, 20, dtype=np.uint8)
    x = pk.encode_payload(code, payload)
    assert np.array_equal(pk.info_from_codeword(code, x)[:20], payload)
