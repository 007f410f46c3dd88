import logging
from fractions import Fraction

import numpy as np
import pytest

from srfc.errors import DecodingError, FieldError, UnrepairableError
from srfc.field import make_field
from srfc.rfc import rfc_generate
from srfc.secure import (
    SecureRfcSystem,
    dss_fail,
    dss_repair,
    dss_store,
    srfc_build,
    srfc_decode,
    srfc_encode,
)


def encode_random(system, rng):
    msg = [system.field.random(rng) for _ in range(system.k)]
    return msg, srfc_encode(system, msg, rng)


# ---------------------------------------------------------
# Параметры
# ---------------------------------------------------------

def test_fixed_topology_parameters(system_20_10):
    assert (system_20_10.n, system_20_10.k_tilde, system_20_10.xi) == (20, 10, 3)
    assert system_20_10.u == 4
    assert system_20_10.k == 6
    assert system_20_10.rate == Fraction(3, 10)


def test_build_preconditions():
    with pytest.raises(FieldError, match="p >= k_tilde"):
        srfc_build(make_field(11, 4), 12, 6, 2, 1, 1, seed=0)
    with pytest.raises(FieldError, match=r"k_tilde > l1 \+ xi\*l2"):
        srfc_build(make_field(11, 6), 12, 6, 2, 2, 2, seed=0)
    with pytest.raises(FieldError, match="q > k_tilde"):
        srfc_build(make_field(5, 6), 12, 6, 2, 1, 0, seed=0)
    with pytest.raises(FieldError, match="l1 \\+ l2 < k"):
        srfc_build(make_field(11, 6), 12, 6, 2, 2, 1, seed=0)


def test_relaxed_model_warns(caplog):
    with caplog.at_level(logging.WARNING):
        system = srfc_build(make_field(2, 3), 5, 3, 2, 0, 1, seed=1, strict=False)
    assert system.u == 2 and system.k == 1
    assert not system.strict
    assert "Ослабленная модель" in caplog.text


# ---------------------------------------------------------
# Эффективные точки
# ---------------------------------------------------------

def test_every_symbol_is_evaluation_at_effective_point(system_20_10, rng):
    msg, codeword = encode_random(system_20_10, rng)
    f = system_20_10.polynomial(codeword.message, codeword.padding)
    for c, z in zip(codeword.symbols, system_20_10.effective_points):
        assert c == f(z)


def test_parity_effective_point_is_combination(system_20_10):
    y = system_20_10.outer.points
    assert system_20_10.effective_points[17] == y[4] + y[5] + y[7]
    assert system_20_10.effective_points[:10] == y


def test_effective_points_on_generated_code(rng):
    system = srfc_build(make_field(11, 6), 14, 6, 2, 1, 1, seed=21)
    msg, codeword = encode_random(system, rng)
    f = system.polynomial(msg, codeword.padding)
    assert all(c == f(z) for c, z in zip(codeword.symbols, system.effective_points))


# ---------------------------------------------------------
# Кодирование и декодирование
# ---------------------------------------------------------

def test_decode_from_all_nodes(system_20_10, rng):
    msg, codeword = encode_random(system_20_10, rng)
    available = {i: c for i, c in enumerate(codeword.symbols, start=1)}
    assert srfc_decode(system_20_10, available) == msg


def test_decode_from_parity_heavy_subset(system_20_10, rng):
    msg, codeword = encode_random(system_20_10, rng)
    nodes = [1, 3, 5, 7, 9, 11, 12, 16, 17, 20]
    assert system_20_10.field.subfield_rank([system_20_10.effective_points[i - 1] for i in nodes]) == 10
    assert srfc_decode(system_20_10, {i: codeword.symbols[i - 1] for i in nodes}) == msg


def test_decode_rank_deficit(system_20_10, rng):
    _, codeword = encode_random(system_20_10, rng)
    with pytest.raises(DecodingError):
        srfc_decode(system_20_10, {i: codeword.symbols[i - 1] for i in range(11, 21)})


def test_decode_rejects_unknown_nodes(system_20_10, rng):
    msg, codeword = encode_random(system_20_10, rng)
    available = {i: codeword.symbols[i - 1] for i in range(1, 11)}
    assert srfc_decode(system_20_10, available) == msg
    for node in (0, 21):
        with pytest.raises(DecodingError, match="вне"):
            srfc_decode(system_20_10, {**available, node: codeword.symbols[0]})


def test_message_length_checked(system_20_10, rng):
    with pytest.raises(FieldError):
        srfc_encode(system_20_10, [system_20_10.field.one()] * 5, rng)


def test_padding_differs_between_encodings(system_20_10):
    msg = [system_20_10.field.one()] * 6
    a = srfc_encode(system_20_10, msg, np.random.Generator(np.random.Philox(1)))
    b = srfc_encode(system_20_10, msg, np.random.Generator(np.random.Philox(2)))
    assert a.padding != b.padding
    assert a.discard_secret().padding is None
    assert a.discard_secret().symbols == a.symbols


def test_same_generator_state_gives_same_codeword(system_20_10):
    msg = [system_20_10.field.one()] * 6
    a = srfc_encode(system_20_10, msg, np.random.Generator(np.random.Philox(9)))
    b = srfc_encode(system_20_10, msg, np.random.Generator(np.random.Philox(9)))
    assert a == b


# ---------------------------------------------------------
# Состояние хранилища
# ---------------------------------------------------------

def test_fail_and_repair_logs_downloads(system_20_10, policy_20_10, rng):
    _, codeword = encode_random(system_20_10, rng)
    state = dss_store(system_20_10, codeword)
    dss_fail(state, 5)
    assert state.is_erased(5)
    dss_repair(system_20_10, state, 5, policy_20_10)
    assert state.value(5) == codeword.symbols[4]
    event = state.events[-1]
    assert (event.failed, event.parity_index, event.downloaded) == (5, 18, (18, 6, 8))


def test_repair_of_live_node_raises(system_20_10, rng):
    _, codeword = encode_random(system_20_10, rng)
    state = dss_store(system_20_10, codeword)
    with pytest.raises(UnrepairableError):
        dss_repair(system_20_10, state, 3)
    with pytest.raises(FieldError):
        dss_fail(state, 21)


def test_snapshot_is_independent(system_20_10, rng):
    _, codeword = encode_random(system_20_10, rng)
    state = dss_store(system_20_10, codeword)
    copy = state.snapshot()
    dss_fail(copy, 1)
    assert not state.is_erased(1)
    assert len(state.live()) == 20 and len(copy.live()) == 19


def test_store_checks_length(system_20_10):
    with pytest.raises(FieldError):
        dss_store(system_20_10, [system_20_10.field.one()] * 19)


def test_from_inner_with_custom_outer_points():
    field = make_field(7, 4)
    inner = rfc_generate(field, 7, 4, 2, seed=2)
    points = [field.basis(0) + field.basis(1), field.basis(1), field.basis(2), field.basis(3)]
    system = SecureRfcSystem.from_inner(inner, 1, 0, outer_points=points)
    assert system.outer.points == tuple(points)
    assert system.effective_points[0] == points[0]
