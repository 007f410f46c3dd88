"""
Командная строка защищённых ремонтопригодных фонтанных кодов.

Команды:
- gen: построить систему и сохранить описание кода
- encode / decode: файл <-> шарды узлов
- repair: восстановить шард отказавшего узла
- audit: утечка к (ℓ1, ℓ2)-перехватчику для конкретной атаки
- worst: наихудшая атака заданного размера
- curve: Монте-Карло успешного декодирования внутреннего RFC
- rates: таблица достижимых защищённых скоростей (CSV)

Коды возврата: 0 - успех, 1 - ошибка предметной области, 2 - ошибка использования.
stdout содержит только JSON/CSV, журнал пишется в stderr.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import FrozenSet, List, Optional, Sequence

import numpy as np

from config import DEFAULT_SEED, LOG_FILE, LOG_FORMAT, LOG_LEVEL, MONTE_CARLO_TRIALS, WORST_CASE_BUDGET
from srfc.eavesdropper import AttackSpec, audit_attack, audit_solution_count, simulate_attack, worst_case_audit
from srfc.errors import RateError, SrfcError, SpecFileError
from srfc.field import make_field
from srfc.oracle import mi_oracle
from srfc.pipeline import StoragePipeline
from srfc.rates import parse_k_range, rate_sweep, write_csv
from srfc.rfc import RfcCode, decoding_success_curve, default_xi, overhead_sizes, rfc_generate
from srfc.secure import SecureRfcSystem, dss_store, srfc_encode
from srfc.storage import load_spec, save_spec, spec_hash

logger = logging.getLogger(__name__)


# ========== НАСТРОЙКА ЛОГИРОВАНИЯ ==========

def setup_logging(level: str = LOG_LEVEL) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if LOG_FILE:
        handlers.append(logging.FileHandler(LOG_FILE, encoding="utf-8"))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT,
                        handlers=handlers, force=True)


# ========== ВСПОМОГАТЕЛЬНЫЕ ФУНКЦИИ ==========

def parse_nodes(text: str) -> FrozenSet[int]:
    """'1,3,5' -> {1, 3, 5}; пустая строка - пустое множество."""
    try:
        return frozenset(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидался список узлов через запятую, получено {text!r}")


def parse_list(text: str) -> List[str]:
    return [x for x in text.replace(" ", "").split(",") if x]


def parse_k_values(text: str) -> range:
    """--ktilde: 'a:b:step' или одно число."""
    try:
        return parse_k_range(text)
    except RateError as e:
        raise argparse.ArgumentTypeError(str(e))


def parse_fractions(text: str) -> List[Fraction]:
    """'0.5,4/5' -> [1/2, 4/5]"""
    try:
        return [Fraction(x) for x in parse_list(text)]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"ожидался список дробей через запятую, получено {text!r}")


def parse_floats(text: str) -> List[float]:
    try:
        return [float(x) for x in parse_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидался список чисел через запятую, получено {text!r}")


def emit(data: dict) -> None:
    print(json.dumps(data, ensure_ascii=False, indent=2))


def load_topology(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise SpecFileError(f"не удалось прочитать топологию {path}: {e}") from e


# ========== ОБРАБОТЧИКИ КОМАНД ==========

def cmd_gen(args: argparse.Namespace) -> int:
    field = make_field(args.q, args.p)
    strict = not args.relaxed
    if args.topology:
        topo = load_topology(args.topology)
        inner = RfcCode.from_parities(field, int(topo["n"]), int(topo["k_tilde"]), int(topo["xi"]),
                                      topo["parities"], strict=strict)
    else:
        if args.n is None or args.k_tilde is None:
            raise SrfcError("без --topology нужны --n и --k-tilde")
        xi = args.xi if args.xi is not None else default_xi(args.k_tilde)
        if field.p < args.k_tilde:
            raise SrfcError(f"нарушено p >= k_tilde (p={field.p}, k_tilde={args.k_tilde})")
        inner = rfc_generate(field, args.n, args.k_tilde, xi, args.seed, strict=strict)
    system = SecureRfcSystem.from_inner(inner, args.l1, args.l2, strict)
    save_spec(system, args.out)
    emit({
        "spec": str(args.out),
        "n": system.n,
        "k_tilde": system.k_tilde,
        "xi": system.xi,
        "u": system.u,
        "k": system.k,
        "unit_bits": system.field.unit_bits,
        "hash": spec_hash(system).hex(),
    })
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    system = load_spec(args.spec)
    pipeline = StoragePipeline(system)
    paths = pipeline.encode_file(args.input, args.outdir, args.seed, args.chunked)
    emit({"shards": len(paths), "outdir": str(args.outdir), "unit_bits": system.field.unit_bits})
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    system = load_spec(args.spec)
    pipeline = StoragePipeline(system)
    data = pipeline.decode_dir(args.shards, args.nodes or None)
    Path(args.out).write_bytes(data)
    emit({"out": str(args.out), "bytes": len(data)})
    return 0


def cmd_repair(args: argparse.Namespace) -> int:
    system = load_spec(args.spec)
    pipeline = StoragePipeline(system)
    report = pipeline.repair_node(args.shards, args.failed)
    emit({
        "failed": report.failed,
        "parity": report.parity_index,
        "downloaded": list(report.downloaded),
        "stripes": report.stripes,
        "shard": str(report.path),
    })
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    system = load_spec(args.spec)
    attack = AttackSpec.create(args.s1, args.s2, args.policy)
    msg = None
    if args.shards:
        state = StoragePipeline(system).load_states(args.shards)[0]
    else:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
        msg = [system.field.random(rng) for _ in range(system.k)]
        state = dss_store(system, srfc_encode(system, msg, rng, keep_secret=False))

    report = audit_attack(system, state, attack)
    data = report.to_dict()
    if msg is not None:
        record = simulate_attack(system, state, attack)
        d = audit_solution_count(system, record, msg)
        data["solution_exponent"] = d
        data["solution_count_matches"] = d == report.H_r_given_em
    if args.oracle:
        oracle = mi_oracle(system, attack)
        data["oracle_leakage_bits"] = oracle.bits
        data["oracle_agrees"] = abs(oracle.bits - report.leakage_bits) < 1e-9
    emit(data)
    return 0


def cmd_worst(args: argparse.Namespace) -> int:
    system = load_spec(args.spec)
    l1 = system.l1 if args.l1 is None else args.l1
    l2 = system.l2 if args.l2 is None else args.l2
    result = worst_case_audit(system, l1, l2, args.budget, args.seed, args.jobs)
    emit(result.to_dict())
    return 0


def cmd_curve(args: argparse.Namespace) -> int:
    system = load_spec(args.spec)
    sizes = overhead_sizes(system.k_tilde, args.eps)
    sizes = [min(s, system.n) for s in sizes]
    curve = decoding_success_curve(system.inner, sizes, args.trials, args.seed, args.jobs)
    emit({"trials": args.trials, "success": {str(s): rate for s, rate in curve.items()}})
    return 0


def cmd_rates(args: argparse.Namespace) -> int:
    rows = rate_sweep(parse_list(args.models), args.inner_rate, args.l1, args.l2,
                      args.ktilde, xi=args.xi, r=args.r)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            write_csv(rows, f)
        logger.info(f"Таблица скоростей записана в {args.out}")
    else:
        write_csv(rows, sys.stdout)
    return 0


# ========== РАЗБОР АРГУМЕНТОВ ==========

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srfc", description="Защищённые ремонтопригодные фонтанные коды")
    parser.add_argument("--log-level", default=LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="построить систему и сохранить описание кода")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--k-tilde", dest="k_tilde", type=int)
    p.add_argument("--xi", type=int, help="по умолчанию ⌈log2 k_tilde⌉")
    p.add_argument("--l1", type=int, default=0)
    p.add_argument("--l2", type=int, default=0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--topology", type=Path, help="JSON с фиксированными проверочными символами")
    p.add_argument("--relaxed", action="store_true", help="не требовать q > k_tilde и l1 + l2 < k")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("encode", help="закодировать файл в шарды")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--outdir", type=Path, required=True)
    p.add_argument("--chunked", action="store_true", help="разрешить несколько полос")
    p.set_defaults(handler=cmd_encode)

    p = sub.add_parser("decode", help="декодировать файл по шардам")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--shards", type=Path, required=True)
    p.add_argument("--nodes", type=parse_nodes, default=frozenset(), help="использовать только эти узлы")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_decode)

    p = sub.add_parser("repair", help="восстановить шард узла")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--shards", type=Path, required=True)
    p.add_argument("--failed", type=int, required=True)
    p.set_defaults(handler=cmd_repair)

    p = sub.add_parser("audit", help="аудит утечки для атаки")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--s1", type=parse_nodes, default=frozenset())
    p.add_argument("--s2", type=parse_nodes, default=frozenset())
    p.add_argument("--policy", choices=["default", "worst"], default="default")
    p.add_argument("--oracle", action="store_true", help="сверить с полным перебором")
    p.add_argument("--shards", type=Path, help="взять символы из каталога шардов")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(handler=cmd_audit)

    p = sub.add_parser("worst", help="наихудшая атака")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--l1", type=int)
    p.add_argument("--l2", type=int)
    p.add_argument("--budget", type=int, default=WORST_CASE_BUDGET)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_worst)

    p = sub.add_parser("curve", help="Монте-Карло декодирования внутреннего RFC")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--eps", type=parse_floats, default="0,0.1,0.2,0.5")
    p.add_argument("--trials", type=int, default=MONTE_CARLO_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_curve)

    p = sub.add_parser("rates", help="таблица защищённых скоростей")
    p.add_argument("--models", default="msr,rfc,lrc")
    p.add_argument("--inner-rate", dest="inner_rate", type=parse_fractions, default="0.5")
    p.add_argument("--l1", type=int, default=2)
    p.add_argument("--l2", type=int, default=2)
    p.add_argument("--xi", type=int, default=3)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--ktilde", type=parse_k_values, default="10:100:10")
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=cmd_rates)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except (SrfcError, OSError) as e:
        logger.error(f"Ошибка команды {args.command}: {e}")
        print(f"ошибка: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
