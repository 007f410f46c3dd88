import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from srfc.eavesdropper import AttackSpec, audit, simulate_attack
from srfc.errors import BudgetExceededError
from srfc.field import make_field
from srfc.oracle import mi_oracle, oracle_states
from srfc.rfc import RfcCode
from srfc.secure import SecureRfcSystem, dss_store, srfc_encode

# (q, p, k_tilde): перебор (q^p)^k_tilde не больше 2^24
TINY_SHAPES = [(2, 3, 2), (2, 3, 3), (2, 4, 3), (2, 4, 4), (3, 3, 2), (3, 3, 3), (3, 4, 2)]
SLOW_SHAPES = [(3, 4, 3)]


def assert_symbols_are_evaluations(system, codeword):
    f = system.polynomial(codeword.message, codeword.padding)
    assert list(codeword.symbols) == [f(z) for z in system.effective_points]


def audited_leakage_bits(system, attack):
    rng = np.random.Generator(np.random.Philox(0))
    msg = [system.field.random(rng) for _ in range(system.k)]
    codeword = srfc_encode(system, msg, rng)
    assert_symbols_are_evaluations(system, codeword)
    state = dss_store(system, codeword)
    return audit(system, simulate_attack(system, state, attack), attack)


def test_secure_instance_has_zero_information(make_tiny_system):
    system = make_tiny_system(2, 3, 3, 5, 2, 0, 1, seed=0)
    assert (system.u, system.k) == (2, 1)
    attack = AttackSpec.create({1})
    result = mi_oracle(system, attack)
    assert result.bits == 0.0
    assert audited_leakage_bits(system, attack).leakage == 0


def test_no_padding_leaks_full_symbol(make_tiny_system):
    system = make_tiny_system(2, 3, 3, 5, 2, 0, 0, seed=0)
    result = mi_oracle(system, AttackSpec.create({1}))
    assert result.bits == pytest.approx(3.0, abs=1e-9)
    assert result.H_e_bits == pytest.approx(3.0, abs=1e-9)


def test_empty_attack(make_tiny_system):
    system = make_tiny_system(2, 3, 3, 5, 2, 0, 1, seed=0)
    result = mi_oracle(system, AttackSpec.create())
    assert result.bits == 0.0 and result.nodes == ()


def test_budget_is_enforced(make_tiny_system):
    system = make_tiny_system(2, 3, 3, 5, 2, 0, 1, seed=0)
    assert oracle_states(system) == 512
    with pytest.raises(BudgetExceededError):
        mi_oracle(system, AttackSpec.create({1}), budget=100)


def test_observed_symbols_are_uniform():
    field = make_field(3, 2)
    inner = RfcCode.from_parities(field, 4, 2, 2, [[[1, 1], [2, 1]], [[1, 2]]])
    system = SecureRfcSystem.from_inner(inner, 1, 0, strict=False)
    result = mi_oracle(system, AttackSpec.create({1}, {3}))
    assert result.nodes == (1, 2, 3)
    assert result.states == 81
    for node in result.nodes:
        assert result.is_uniform(node)
        assert result.marginals[node].sum() == result.states


def test_oracle_on_toy_topology_is_over_budget(topology_system):
    # GF(5^4), k_tilde = 4: 625^4 состояний
    system = topology_system("topology_6_4.json")
    with pytest.raises(BudgetExceededError):
        mi_oracle(system, AttackSpec.create({1}))


def draw_instance(data, shapes):
    q, p, k_tilde = data.draw(st.sampled_from(shapes))
    xi = data.draw(st.integers(1, 2))
    l2 = data.draw(st.integers(0, (k_tilde - 1) // xi))
    l1 = data.draw(st.integers(0, k_tilde - 1 - xi * l2))
    n = data.draw(st.integers(k_tilde + 1, k_tilde + 3))
    seed = data.draw(st.integers(0, 2 ** 16))
    return q, p, k_tilde, n, xi, l1, l2, seed


def draw_attack(data, system):
    s1 = data.draw(st.sets(st.integers(1, system.n), max_size=3))
    repairable = [j for j in range(1, system.n + 1) if j not in s1 and system.inner.local_groups_of(j)]
    s2 = data.draw(st.sets(st.sampled_from(repairable), max_size=2)) if repairable else set()
    return AttackSpec.create(s1, s2)


def check_oracle_agrees(data, make_tiny_system, shapes):
    system = make_tiny_system(*draw_instance(data, shapes))
    attack = draw_attack(data, system)
    report = audited_leakage_bits(system, attack)
    result = mi_oracle(system, attack)
    assert result.bits == pytest.approx(report.leakage_bits, abs=1e-9)
    assert result.H_e_bits == pytest.approx(report.H_e * report.unit_bits, abs=1e-9)


@given(st.data())
@settings(max_examples=50, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_oracle_matches_rank_audit(make_tiny_system, data):
    check_oracle_agrees(data, make_tiny_system, TINY_SHAPES)


@pytest.mark.slow
@given(st.data())
@settings(max_examples=10, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_oracle_matches_rank_audit_larger_fields(make_tiny_system, data):
    check_oracle_agrees(data, make_tiny_system, SLOW_SHAPES)
