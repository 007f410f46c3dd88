"""
Модуль пайплайна хранения: файл -> шарды узлов -> восстановление -> файл.

Координирует компоненты библиотеки:
1. Нарезка файла на полосы по k символов
2. Защищённое кодирование каждой полосы и запись шардов
3. Восстановление отказавшего узла во всех полосах
4. Декодирование файла по доступным шардам
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from config import DEFAULT_SEED
from srfc.errors import ShardFormatError, UnrepairableError
from srfc.field import FieldElement
from srfc.rfc import RepairPolicy
from srfc.secure import DssState, SecureRfcSystem, repair_node, srfc_decode, srfc_encode
from srfc.storage import (
    PathLike,
    file_to_messages,
    messages_to_file,
    read_shard,
    spec_hash,
    write_shard,
)

# Настраиваем логирование
logger = logging.getLogger(__name__)


def shard_name(node: int) -> str:
    return f"node_{node:04d}.shard"


@dataclass(frozen=True)
class NodeRepairReport:
    """Итог восстановления узла по всем полосам."""

    failed: int
    parity_index: int
    downloaded: Tuple[int, ...]
    stripes: int
    path: Path


class StoragePipeline:
    """
    Пайплайн над одной защищённой системой.

    Все полосы одного каталога шардов видят одни и те же живые узлы,
    поэтому группа восстановления и набор скачанных узлов у них общие.
    """

    def __init__(self, system: SecureRfcSystem):
        """
        Args:
            system: Защищённая система (обычно из load_spec)
        """
        self.system = system
        self.digest = spec_hash(system)
        logger.info(f"Инициализация StoragePipeline: n={system.n}, k={system.k}, поле {system.field}")

    # ---------- Кодирование ----------

    def encode_bytes(self, data: bytes, seed: int = DEFAULT_SEED,
                     chunked: bool = False) -> List[List[FieldElement]]:
        """
        Кодирует байты в символы узлов.

        Returns:
            Для каждого узла 1..n - список символов по полосам
        """
        messages = file_to_messages(data, self.system.field, self.system.k, chunked)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
        columns: List[List[FieldElement]] = [[] for _ in range(self.system.n)]
        for msg in messages:
            codeword = srfc_encode(self.system, msg, rng, keep_secret=False)
            for i, c in enumerate(codeword.symbols):
                columns[i].append(c)
        return columns

    def encode_file(self, in_path: PathLike, outdir: PathLike, seed: int = DEFAULT_SEED,
                    chunked: bool = False) -> List[Path]:
        """
        Кодирует файл и пишет n шардов в outdir.

        Args:
            in_path: Исходный файл
            outdir: Каталог шардов
            seed: Seed дополнения (одинаковый seed - одинаковые шарды)
            chunked: Разрешить несколько полос

        Returns:
            Пути записанных шардов
        """
        data = Path(in_path).read_bytes()
        columns = self.encode_bytes(data, seed, chunked)
        outdir = Path(outdir)
        paths = [
            write_shard(outdir / shard_name(i), i, self.digest, self.system.field, column)
            for i, column in enumerate(columns, start=1)
        ]
        logger.info(f"Файл {in_path} закодирован в {len(paths)} шардов в {outdir}")
        return paths

    # ---------- Загрузка состояния ----------

    def load_states(self, shard_dir: PathLike, nodes: Optional[Iterable[int]] = None) -> List[DssState]:
        """
        Читает шарды каталога в состояния хранилища, по одному на полосу.

        Args:
            shard_dir: Каталог шардов
            nodes: Если задано - учитывать только эти узлы

        Raises:
            ShardFormatError: если шарды противоречат друг другу или их нет
        """
        shard_dir = Path(shard_dir)
        wanted = set(nodes) if nodes is not None else None
        columns: Dict[int, Tuple[FieldElement, ...]] = {}
        for i in range(1, self.system.n + 1):
            path = shard_dir / shard_name(i)
            if not path.exists() or (wanted is not None and i not in wanted):
                continue
            shard = read_shard(path, self.system.field, self.digest)
            if shard.node != i:
                raise ShardFormatError(f"файл {path.name} содержит узел {shard.node}")
            columns[i] = shard.elements
        if not columns:
            raise ShardFormatError(f"в {shard_dir} нет шардов этого кода")
        lengths = {len(c) for c in columns.values()}
        if len(lengths) != 1:
            raise ShardFormatError(f"шарды содержат разное число полос: {sorted(lengths)}")
        stripes = lengths.pop()
        states = []
        for s in range(stripes):
            states.append(DssState([columns[i][s] if i in columns else None for i in range(1, self.system.n + 1)]))
        logger.info(f"Загружено {len(columns)} шардов из {shard_dir}: {stripes} полос")
        return states

    # ---------- Восстановление ----------

    def repair_node(self, shard_dir: PathLike, failed: int,
                    policy: Optional[RepairPolicy] = None) -> NodeRepairReport:
        """
        Восстанавливает отсутствующий шард узла failed.

        Raises:
            UnrepairableError: если шард на месте или группы нет
        """
        shard_dir = Path(shard_dir)
        path = shard_dir / shard_name(failed)
        if path.exists():
            raise UnrepairableError(f"шард узла {failed} на месте, восстанавливать нечего")
        states = self.load_states(shard_dir)
        results = [repair_node(self.system, state, failed, policy) for state in states]
        write_shard(path, failed, self.digest, self.system.field, [r.value for r in results])
        first = results[0]
        report = NodeRepairReport(failed, first.group.parity_index, first.downloaded_indices, len(states), path)
        logger.info(f"Шард узла {failed} восстановлен через группу {report.parity_index}, "
                    f"скачаны узлы {list(report.downloaded)}")
        return report

    # ---------- Декодирование ----------

    def decode_states(self, states: List[DssState]) -> bytes:
        messages = [srfc_decode(self.system, state.live()) for state in states]
        return messages_to_file(messages, self.system.field)

    def decode_dir(self, shard_dir: PathLike, nodes: Optional[Iterable[int]] = None) -> bytes:
        """Декодирует файл по шардам каталога (или по подмножеству узлов)."""
        data = self.decode_states(self.load_states(shard_dir, nodes))
        logger.info(f"Декодировано {len(data)} байт из {shard_dir}")
        return data

    def get_stats(self, shard_dir: PathLike) -> dict:
        """
        Статистика каталога шардов.

        Returns:
            Словарь со статистикой
        """
        shard_dir = Path(shard_dir)
        present = [i for i in range(1, self.system.n + 1) if (shard_dir / shard_name(i)).exists()]
        return {
            "n": self.system.n,
            "k_tilde": self.system.k_tilde,
            "k": self.system.k,
            "present_nodes": present,
            "missing_nodes": [i for i in range(1, self.system.n + 1) if i not in present],
            "unit_bits": self.system.field.unit_bits,
        }
