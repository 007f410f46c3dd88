"""Общие фикстуры: поля, системы с фиксированной топологией, генераторы."""

import json

import numpy as np
import pytest
from hypothesis import settings

from config import FIXTURES_PATH
from srfc.field import make_field
from srfc.rfc import FixedGroupPolicy, RfcCode, rfc_generate
from srfc.secure import SecureRfcSystem

settings.register_profile("srfc", deadline=None, max_examples=50)
settings.load_profile("srfc")


def load_topology(name: str) -> dict:
    with open(FIXTURES_PATH / name, "r", encoding="utf-8") as f:
        return json.load(f)


def system_from_topology(name: str, l1=None, l2=None, strict=True) -> SecureRfcSystem:
    topo = load_topology(name)
    field = make_field(topo["field"]["q"], topo["field"]["p"])
    inner = RfcCode.from_parities(field, topo["n"], topo["k_tilde"], topo["xi"], topo["parities"], strict=strict)
    return SecureRfcSystem.from_inner(
        inner,
        topo["l1"] if l1 is None else l1,
        topo["l2"] if l2 is None else l2,
        strict,
    )


def tiny_system(q, p, k_tilde, n, xi, l1, l2, seed) -> SecureRfcSystem:
    """Маленькая система в ослабленной модели (q <= k_tilde допустимо)."""
    field = make_field(q, p)
    inner = rfc_generate(field, n, k_tilde, xi, seed, strict=False)
    return SecureRfcSystem.from_inner(inner, l1, l2, strict=False)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(12345)))


@pytest.fixture(scope="session")
def gf8():
    return make_field(2, 3)


@pytest.fixture(scope="session")
def gf9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def gf256():
    return make_field(2, 8)


@pytest.fixture(scope="session")
def system_20_10():
    return system_from_topology("topology_20_10.json")


@pytest.fixture(scope="session")
def policy_20_10():
    choice = load_topology("topology_20_10.json")["repair_choice"]
    return FixedGroupPolicy({int(k): v for k, v in choice.items()})


@pytest.fixture(scope="session")
def system_6_4():
    return system_from_topology("topology_6_4.json")


@pytest.fixture
def topology_system():
    return system_from_topology


@pytest.fixture
def make_tiny_system():
    return tiny_system
