import numpy as np
import pytest

import polarkit as pk
from polarkit.construction import code_from_dict, code_to_dict

from conftest import bec_bhattacharyya_order


def test_frozen_4_2_matches_erasure_recursion_order():
    # reliability order u0 < u1 < u2 < u3 puts the frozen pair at {0, 1}
    frozen = pk.build_frozen_set(4, 2, design_snr_db=0.0)
    assert set(np.flatnonzero(frozen)) == {0, 1}
    frozen = pk.build_frozen_set(4, 2, design_snr_db=5.0)
    assert set(np.flatnonzero(frozen)) == {0, 1}
    order = bec_bhattacharyya_order(4)
    assert list(order) == [0, 1, 2, 3]


def test_frozen_rate1_code_is_empty():
    assert not pk.build_frozen_set(2, 2).any()


def test_frozen_8_4_extremes():
    frozen = pk.build_frozen_set(8, 4, design_snr_db=2.0)
    idx = set(np.flatnonzero(frozen))
    assert len(idx) == 4
    assert 0 in idx
    assert 7 not in idx


def test_invalid_dimensions():
    with pytest.raises(ValueError):
        pk.build_frozen_set(8, 9)
    with pytest.raises(ValueError):
        pk.build_frozen_set(12, 4)
    with pytest.raises(ValueError):
        pk.build_frozen_set(1, 1)


@pytest.mark.parametrize("n_bits", [16, 64, 256])
def test_ranking_is_a_fixed_total_order(n_bits):
    # shrinking k by one freezes exactly one more position, nested all the way
    prev = pk.build_frozen_set(n_bits, n_bits)
    for k in range(n_bits - 1, -1, -1):
        cur = pk.build_frozen_set(n_bits, k)
        added = np.flatnonzero(cur & ~prev)
        assert added.size == 1
        assert not (prev & ~cur).any()
        prev = cur


def test_determinism():
    a = pk.build_frozen_set(2048, 1755, 2.0)
    b = pk.build_frozen_set(2048, 1755, 2.0)
    assert np.array_equal(a, b)


def test_build_code_dimensions():
    code = pk.build_code(2048, 1723, crc=32)
    assert code.k_code == 1755
    assert code.k_info == 1723
    code = pk.build_code(1024, 860, crc=8)
    assert code.k_code == 868
    code = pk.build_code(8, 4, crc=None)
    assert code.k_code == 4
    assert code.crc is None


def test_build_code_overflow():
    with pytest.raises(ValueError):
        pk.build_code(64, 60, crc=8)
    with pytest.raises(ValueError):
        pk.build_code(64, 0, crc=None)


def test_code_json_roundtrip(tmp_path):
    code = pk.build_code(256, 180, crc=32, design_snr_db=1.5, systematic=False)
    doc = code_to_dict(code)
    assert doc["n"] == 256
    assert doc["k_info"] == 180
    assert doc["crc"]["poly_hex"] == "0x04C11DB7"
    back = code_from_dict(doc)
    assert np.array_equal(back.frozen, code.frozen)
    assert back.k_code == code.k_code
    assert back.crc == code.crc
    assert back.systematic == code.systematic
    assert back.design_snr_db == code.design_snr_db

    path = tmp_path / "code.json"
    pk.save_code(code, str(path))
    again = pk.load_code(str(path))
    assert np.array_equal(again.frozen, code.frozen)


def test_crc_rate_adjustment_keeps_system_rate():
    code = pk.build_code(2048, 1723, crc=32)
    assert code.k_info / code.n_bits == 1723 / 2048
    assert int((~code.frozen).sum()) == 1755
