"""
Модуль хранения: файл описания кода (JSON), бинарные шарды узлов и
нарезка пользовательского файла на сообщения.

Описание кода самопроверяемо: при загрузке заново строятся поле, RFC и
внешний код со всеми проверками, а SHA-256 канонического JSON сверяется
с записанным.
"""

import hashlib
import json
import logging
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from config import LENGTH_HEADER_BYTES, SHARD_MAGIC, SHARD_VERSION, SPEC_VERSION
from srfc.errors import FieldError, ShardFormatError, SpecFileError, SrfcError
from srfc.field import FieldElement, FieldParams
from srfc.rfc import RfcCode
from srfc.secure import SecureRfcSystem

# Настраиваем логирование
logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# magic, версия, хеш описания, узел, q, p, число элементов
_HEADER = struct.Struct("<4sB32sIIHI")


# ========== ОПИСАНИЕ КОДА ==========

def spec_payload(system: SecureRfcSystem) -> Dict[str, Any]:
    """Все смысловые поля описания, без хеша."""
    return {
        "version": SPEC_VERSION,
        "field": system.field.to_dict(),
        "inner": system.inner.to_dict(),
        "outer": {"points": [y.to_list() for y in system.outer.points]},
        "l1": system.l1,
        "l2": system.l2,
        "u": system.u,
        "k": system.k,
        "strict": system.strict,
    }


def _canonical(payload: Dict[str, Any]) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def spec_hash(system: SecureRfcSystem) -> bytes:
    """SHA-256 канонического JSON описания (32 байта)."""
    return hashlib.sha256(_canonical(spec_payload(system))).digest()


def save_spec(system: SecureRfcSystem, path: PathLike) -> Path:
    """
    Сохраняет описание кода в JSON.

    Повторное сохранение загруженного описания даёт побайтно тот же файл.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = spec_payload(system)
    payload["hash"] = spec_hash(system).hex()
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"Описание кода сохранено в {path}")
    return path


def load_spec(path: PathLike) -> SecureRfcSystem:
    """
    Загружает и заново проверяет описание кода.

    Raises:
        SpecFileError: если файл не читается, версия или хеш не совпадают,
            или нарушен какой-либо инвариант конструкторов
    """
    path = Path(path)
    if not path.exists():
        raise SpecFileError(f"файл описания {path} не найден")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise SpecFileError(f"не удалось прочитать {path}: {e}") from e

    if data.get("version") != SPEC_VERSION:
        raise SpecFileError(f"неподдерживаемая версия описания {data.get('version')!r}, ожидалась {SPEC_VERSION!r}")
    try:
        field = FieldParams.from_dict(data["field"])
        inner_data = data["inner"]
        strict = bool(data["strict"])
        inner = RfcCode.from_parities(
            field, int(inner_data["n"]), int(inner_data["k_tilde"]), int(inner_data["xi"]),
            inner_data["parities"], inner_data.get("seed"), strict=strict,
        )
        points = [field.element(c) for c in data["outer"]["points"]]
        system = SecureRfcSystem.from_inner(inner, int(data["l1"]), int(data["l2"]), strict, points)
    except SrfcError as e:
        raise SpecFileError(f"описание {path} нарушает инварианты: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise SpecFileError(f"описание {path} повреждено: {e}") from e

    if (system.u, system.k) != (data.get("u"), data.get("k")):
        raise SpecFileError(f"u, k в файле ({data.get('u')}, {data.get('k')}) не совпадают "
                            f"с вычисленными ({system.u}, {system.k})")
    if spec_hash(system).hex() != data.get("hash"):
        raise SpecFileError(f"хеш описания {path} не совпадает с содержимым")
    logger.info(f"Описание кода загружено из {path}: n={system.n}, k_tilde={system.k_tilde}, k={system.k}")
    return system


# ========== ШАРДЫ ==========

def digit_width(q: int) -> int:
    """Байт на одну цифру по основанию q."""
    return max(1, math.ceil((q - 1).bit_length() / 8))


@dataclass(frozen=True)
class Shard:
    """Содержимое файла шарда: символы одного узла по всем полосам."""

    node: int
    spec_hash: bytes
    elements: Tuple[FieldElement, ...]


def encode_shard(node: int, digest: bytes, field: FieldParams, elements: Sequence[FieldElement]) -> bytes:
    width = digit_width(field.q)
    header = _HEADER.pack(SHARD_MAGIC, SHARD_VERSION, digest, node, field.q, field.p, len(elements))
    body = b"".join(c.to_bytes(width, "little") for e in elements for c in e.coeffs)
    return header + body


def decode_shard(blob: bytes, field: FieldParams, digest: bytes) -> Shard:
    """
    Разбирает шард и сверяет его с описанием кода.

    Raises:
        ShardFormatError: при неверных magic, версии, хеше, параметрах поля или длине
    """
    if len(blob) < _HEADER.size:
        raise ShardFormatError(f"шард короче заголовка ({len(blob)} < {_HEADER.size} байт)")
    magic, version, blob_hash, node, q, p, count = _HEADER.unpack_from(blob)
    if magic != SHARD_MAGIC:
        raise ShardFormatError(f"неверная сигнатура {magic!r}")
    if version != SHARD_VERSION:
        raise ShardFormatError(f"неподдерживаемая версия шарда {version}")
    if blob_hash != digest:
        raise ShardFormatError(f"шард узла {node} записан для другого описания кода")
    if (q, p) != (field.q, field.p):
        raise ShardFormatError(f"шард для GF({q}^{p}), ожидалось {field}")
    width = digit_width(q)
    body = blob[_HEADER.size:]
    if len(body) != count * p * width:
        raise ShardFormatError(f"длина данных {len(body)} != {count}·{p}·{width}")
    elements = []
    for e in range(count):
        digits = [int.from_bytes(body[(e * p + d) * width:(e * p + d + 1) * width], "little") for d in range(p)]
        if any(c >= q for c in digits):
            raise ShardFormatError(f"цифра вне [0, {q}) в элементе {e} узла {node}")
        elements.append(field.element(digits))
    return Shard(node, blob_hash, tuple(elements))


def write_shard(path: PathLike, node: int, digest: bytes, field: FieldParams,
                elements: Sequence[FieldElement]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_shard(node, digest, field, elements))
    logger.debug(f"Шард узла {node} записан в {path} ({len(elements)} элементов)")
    return path


def read_shard(path: PathLike, field: FieldParams, digest: bytes) -> Shard:
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as e:
        raise ShardFormatError(f"не удалось прочитать шард {path}: {e}") from e
    return decode_shard(blob, field, digest)


# ========== НАРЕЗКА ФАЙЛА ==========

def bytes_per_symbol(field: FieldParams) -> int:
    """
    Наибольшее B с 256^B <= q^p.

    Raises:
        ShardFormatError: если поле меньше 256 элементов
    """
    b = 0
    while 256 ** (b + 1) <= field.order:
        b += 1
    if b == 0:
        raise ShardFormatError(f"в символ {field} не помещается ни одного байта")
    return b


def file_to_messages(data: bytes, field: FieldParams, k: int, chunked: bool = False) -> List[List[FieldElement]]:
    """
    Режет файл на сообщения по k символов (полосы).

    Перед данными пишется длина файла (8 байт, big-endian), хвост
    дополняется нулями до целой полосы.

    Raises:
        ShardFormatError: пустой файл, или файл длиннее одной полосы без chunked
    """
    if k < 1:
        raise FieldError(f"нарушено k >= 1 (k={k})")
    if not data:
        raise ShardFormatError("пустой файл: нечего кодировать")
    width = bytes_per_symbol(field)
    stripe_bytes = width * k
    framed = len(data).to_bytes(LENGTH_HEADER_BYTES, "big") + data
    stripes = -(-len(framed) // stripe_bytes)
    if stripes > 1 and not chunked:
        raise ShardFormatError(
            f"файл ({len(data)} байт) не помещается в одну полосу ({stripe_bytes - LENGTH_HEADER_BYTES} байт); "
            f"используйте --chunked"
        )
    framed += b"\x00" * (stripes * stripe_bytes - len(framed))
    messages = []
    for s in range(stripes):
        stripe = framed[s * stripe_bytes:(s + 1) * stripe_bytes]
        messages.append([
            field.from_int(int.from_bytes(stripe[j * width:(j + 1) * width], "big")) for j in range(k)
        ])
    logger.info(f"Файл {len(data)} байт разбит на {stripes} полос по {k} символов ({width} байт на символ)")
    return messages


def messages_to_file(messages: Sequence[Sequence[FieldElement]], field: FieldParams) -> bytes:
    """
    Обратная операция к file_to_messages.

    Raises:
        ShardFormatError: если символ не помещается в байты или длина в заголовке неверна
    """
    width = bytes_per_symbol(field)
    try:
        framed = b"".join(m.to_int().to_bytes(width, "big") for msg in messages for m in msg)
    except OverflowError as e:
        raise ShardFormatError("символ сообщения не соответствует байтовой нарезке") from e
    if len(framed) < LENGTH_HEADER_BYTES:
        raise ShardFormatError("данных меньше заголовка длины")
    length = int.from_bytes(framed[:LENGTH_HEADER_BYTES], "big")
    if length > len(framed) - LENGTH_HEADER_BYTES:
        raise ShardFormatError(f"длина в заголовке {length} больше доступных данных")
    return framed[LENGTH_HEADER_BYTES:LENGTH_HEADER_BYTES + length]
