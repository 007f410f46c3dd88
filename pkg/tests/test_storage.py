import json

import pytest

from srfc.errors import ShardFormatError, SpecFileError
from srfc.field import make_field
from srfc.storage import (
    bytes_per_symbol,
    decode_shard,
    digit_width,
    encode_shard,
    file_to_messages,
    load_spec,
    messages_to_file,
    read_shard,
    save_spec,
    spec_hash,
    write_shard,
)


# ---------------------------------------------------------
# Описание кода
# ---------------------------------------------------------

def test_spec_roundtrip_is_byte_identical(system_20_10, tmp_path):
    first = save_spec(system_20_10, tmp_path / "code.json")
    loaded = load_spec(first)
    second = save_spec(loaded, tmp_path / "again.json")
    assert first.read_bytes() == second.read_bytes()
    assert loaded.effective_points == system_20_10.effective_points
    assert spec_hash(loaded) == spec_hash(system_20_10)


def test_spec_file_is_readable_json(system_20_10, tmp_path):
    path = save_spec(system_20_10, tmp_path / "code.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["u"] == 4 and data["k"] == 6
    assert data["field"]["q"] == 11
    assert len(data["hash"]) == 64
    assert path.read_text(encoding="utf-8").endswith("}\n")


def rewrite(path, mutate):
    data = json.loads(path.read_text(encoding="utf-8"))
    mutate(data)
    path.write_text(json.dumps(data), encoding="utf-8")


def test_tampered_spec_is_rejected(system_20_10, tmp_path):
    path = save_spec(system_20_10, tmp_path / "code.json")
    rewrite(path, lambda d: d["inner"]["parities"][0][0].__setitem__(1, 2))
    with pytest.raises(SpecFileError, match="хеш"):
        load_spec(path)


def test_spec_version_is_checked(system_20_10, tmp_path):
    path = save_spec(system_20_10, tmp_path / "code.json")
    rewrite(path, lambda d: d.__setitem__("version", "srfc-spec/0"))
    with pytest.raises(SpecFileError, match="версия"):
        load_spec(path)


def test_spec_invariants_are_rechecked(system_20_10, tmp_path):
    path = save_spec(system_20_10, tmp_path / "code.json")
    rewrite(path, lambda d: d.__setitem__("l2", 3))
    with pytest.raises(SpecFileError, match="инварианты"):
        load_spec(path)


def test_missing_or_broken_spec(tmp_path):
    with pytest.raises(SpecFileError):
        load_spec(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(SpecFileError):
        load_spec(broken)


# ---------------------------------------------------------
# Шарды
# ---------------------------------------------------------

@pytest.mark.parametrize("q,width", [(2, 1), (11, 1), (256, 1), (257, 2), (65537, 3)])
def test_digit_width(q, width):
    assert digit_width(q) == width


def sample_elements(field, rng, count=3):
    return [field.random(rng) for _ in range(count)]


def test_shard_roundtrip(system_20_10, rng, tmp_path):
    field = system_20_10.field
    digest = spec_hash(system_20_10)
    elements = sample_elements(field, rng)
    path = write_shard(tmp_path / "node_0007.shard", 7, digest, field, elements)
    shard = read_shard(path, field, digest)
    assert shard.node == 7
    assert list(shard.elements) == elements


def test_shard_errors(system_20_10, rng):
    field = system_20_10.field
    digest = spec_hash(system_20_10)
    blob = encode_shard(3, digest, field, sample_elements(field, rng))

    with pytest.raises(ShardFormatError, match="сигнатура"):
        decode_shard(b"XXXX" + blob[4:], field, digest)
    with pytest.raises(ShardFormatError, match="другого описания"):
        decode_shard(blob, field, bytes(32))
    with pytest.raises(ShardFormatError, match="длина данных"):
        decode_shard(blob[:-1], field, digest)
    with pytest.raises(ShardFormatError):
        decode_shard(blob[:10], field, digest)
    with pytest.raises(ShardFormatError, match="GF"):
        decode_shard(blob, make_field(11, 6), digest)


def test_shard_digit_out_of_range(system_20_10, rng):
    field = system_20_10.field
    digest = spec_hash(system_20_10)
    blob = bytearray(encode_shard(1, digest, field, sample_elements(field, rng, 1)))
    blob[-1] = 11
    with pytest.raises(ShardFormatError, match="цифра"):
        decode_shard(bytes(blob), field, digest)


def test_unreadable_shard(system_20_10, tmp_path):
    with pytest.raises(ShardFormatError):
        read_shard(tmp_path / "nothing.shard", system_20_10.field, spec_hash(system_20_10))


# ---------------------------------------------------------
# Нарезка файла
# ---------------------------------------------------------

def test_bytes_per_symbol(gf8, gf256, system_20_10):
    with pytest.raises(ShardFormatError):
        bytes_per_symbol(gf8)
    assert bytes_per_symbol(gf256) == 1
    assert bytes_per_symbol(system_20_10.field) == 4
    assert bytes_per_symbol(make_field(5, 4)) == 1


def test_single_stripe_roundtrip(system_20_10):
    data = b"sixteen bytes!!!"
    messages = file_to_messages(data, system_20_10.field, system_20_10.k)
    assert len(messages) == 1 and len(messages[0]) == 6
    assert messages[0][0].to_int() == 0
    assert messages_to_file(messages, system_20_10.field) == data


def test_file_longer_than_stripe_needs_chunking(system_20_10):
    with pytest.raises(ShardFormatError, match="--chunked"):
        file_to_messages(b"x" * 17, system_20_10.field, system_20_10.k)


def test_chunked_roundtrip(system_20_10):
    data = bytes(range(256)) * 4 + b"tail"
    messages = file_to_messages(data, system_20_10.field, system_20_10.k, chunked=True)
    assert len(messages) == -(-(len(data) + 8) // 24)
    assert messages_to_file(messages, system_20_10.field) == data


def test_empty_file_is_rejected(system_20_10):
    with pytest.raises(ShardFormatError, match="пустой"):
        file_to_messages(b"", system_20_10.field, system_20_10.k)


def test_corrupted_length_header(system_20_10):
    field = system_20_10.field
    messages = file_to_messages(b"abc", field, system_20_10.k)
    messages[0][1] = field.from_int(1000)
    with pytest.raises(ShardFormatError, match="длина"):
        messages_to_file(messages, field)
