"""
Конфигурация библиотеки и CLI защищённых ремонтопригодных фонтанных кодов.

Этот модуль содержит все настройки:
- Seed по умолчанию для всех детерминированных команд
- Параметры логирования
- Бюджеты перебора для оракула взаимной информации и аудита худшего случая
- Форматы файлов описания кода и шардов
- Пути к данным и фикстурам
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Загружаем переменные окружения
load_dotenv()

# ========== ДЕТЕРМИНИЗМ ==========
# Используется, если --seed не передан явно
DEFAULT_SEED = int(os.getenv("SRFC_SEED", "0"))

# ========== ЛОГИРОВАНИЕ ==========
LOG_LEVEL = os.getenv("SRFC_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
# Пустая строка - только stderr, без файла
LOG_FILE = os.getenv("SRFC_LOG_FILE", "")

# ========== БЮДЖЕТЫ ПЕРЕБОРА ==========
# Максимум совместных состояний (m, r) для точного оракула I(m; e)
MI_ORACLE_BUDGET = int(os.getenv("SRFC_MI_ORACLE_BUDGET", str(2 ** 24)))

# Максимальный порядок поля q^p, для которого строятся плотные таблицы сложения/умножения
FIELD_TABLE_LIMIT = int(os.getenv("SRFC_FIELD_TABLE_LIMIT", "1024"))

# Сколько атак перебирает аудит худшего случая до перехода в режим выборки
WORST_CASE_BUDGET = int(os.getenv("SRFC_WORST_CASE_BUDGET", "200000"))

# Испытаний на каждый размер подмножества в Монте-Карло декодирования
MONTE_CARLO_TRIALS = int(os.getenv("SRFC_MONTE_CARLO_TRIALS", "1000"))

# ========== ФОРМАТЫ ФАЙЛОВ ==========
SPEC_VERSION = "srfc-spec/1"
SHARD_MAGIC = b"SRFC"
SHARD_VERSION = 1
# Заголовок длины исходного файла при нарезке на символы
LENGTH_HEADER_BYTES = 8

# ========== ПУТИ ==========
BASE_DIR = Path(__file__).parent
DATA_PATH = BASE_DIR / "data"
FIXTURES_PATH = DATA_PATH / "fixtures"
