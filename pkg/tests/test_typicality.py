import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrwork.errors import DomainError, InvalidArgument, PreconditionError, ResourceError
from corrwork.instances import fix_4
from corrwork.spectra import make_partition
from corrwork.typicality import energy_shell, family_T_set, shell_swap_work, typical_set

LN2 = math.log(2)


def test_uniform_typical_set():
    rep = typical_set([0.5, 0.5], 6, 0.1)
    assert rep.cardinality == 64
    assert rep.population == pytest.approx(1.0)
    assert all(rep.holds.values())


def test_biased_coin_example():
    rep = typical_set([0.75, 0.25], 2, 0.3)
    assert rep.cardinality == 3
    assert rep.population == pytest.approx(0.9375)
    assert rep.cardinality_bound == pytest.approx(5.6116, rel=2e-4)
    assert rep.population_bound == pytest.approx(0.258, abs=5e-4)
    assert all(rep.holds.values())


@pytest.mark.parametrize("eta", [0.05, 0.1, 0.2])
def test_biased_coin_N14(eta):
    assert all(typical_set([0.75, 0.25], 14, eta).holds.values())


def test_type_classes_agree_with_brute_force():
    p = [0.5, 0.3, 0.2]
    for N in (3, 6, 9):
        a = typical_set(p, N, 0.1)
        b = typical_set(p, N, 0.1, cap=3**N - 1)
        assert b.method == "type-classes"
        assert a.cardinality == b.cardinality
        assert a.population == pytest.approx(b.population, abs=1e-12)


def test_typical_set_errors():
    with pytest.raises(InvalidArgument):
        typical_set([0.5, 0.6], 2, 0.1)
    with pytest.raises(InvalidArgument):
        typical_set([1.0, 0.0], 2, 0.1)
    with pytest.raises(DomainError):
        typical_set([0.5, 0.5], 2, 0.0)
    with pytest.raises(ResourceError):
        typical_set([0.25] * 4, 30, 0.1, cap=100)


probs_st = st.lists(st.floats(0.01, 1.0), min_size=2, max_size=4).map(lambda w: list(np.array(w) / sum(w)))


@settings(max_examples=80, deadline=None)
@given(probs_st, st.integers(1, 10), st.sampled_from([0.05, 0.1, 0.3]))
def test_chernoff_property(p, N, eta):
    assert all(typical_set(p, N, eta).holds.values())


def test_qubit_shell_small():
    rep = energy_shell([0, 1], LN2, 0.25, 2)
    # inclusive window [1, 2] holds the levels 1, 1 and 2
    assert rep.cardinality == 3
    assert rep.cardinality_bound == pytest.approx(5.129, abs=1e-3)
    assert rep.holds["cardinality_lower"] is False
    assert rep.applicable is False
    assert rep.N_star == pytest.approx(1608)


def test_qubit_shell_binomial():
    want = sum(math.comb(20, k) for k in range(10, 21))
    rep = energy_shell([0, 1], LN2, 0.5, 20)
    assert rep.cardinality == want
    dp = energy_shell([0, 1], LN2, 0.5, 20, cap=1000)
    assert dp.method == "polynomial-dp" and dp.cardinality == want
    assert not dp.applicable and dp.N_star == pytest.approx(402)


def test_incommensurate_shell_uses_type_classes():
    levels = [0.0, 1.0, math.sqrt(2)]
    a = energy_shell(levels, 0.8, 0.3, 7)
    b = energy_shell(levels, 0.8, 0.3, 7, cap=3**7 - 1)
    assert b.method == "type-classes" and a.cardinality == b.cardinality


def test_shell_at_max_entropy_nonempty():
    h = [0, 1, 2, 3]
    assert energy_shell(h, math.log(4), 1.5, 2).cardinality >= 1


def test_shell_errors():
    with pytest.raises(DomainError):
        energy_shell([0, 1], 1.0, 0.1, 2)
    with pytest.raises(DomainError):
        energy_shell([0, 1], LN2, 0.0, 2)


@pytest.mark.parametrize("fam", ["B", "C"])
def test_family_T_hypotheses(fam):
    s = fix_4()
    rep = family_T_set(s, make_partition(s, 2, "uniform"), fam, 3, 0.3)
    assert all(rep.holds.values())
    assert rep.cardinality == rep.members.size
    assert rep.population == pytest.approx(rep.spectrum.eigenvalues[rep.members].sum())


def test_family_T_single_block_is_product_typical_set():
    s = fix_4()
    rep = family_T_set(s, make_partition(s, 1), "B", 2, 0.5)
    ref = typical_set(s.lam, 2, 0.5)
    assert rep.cardinality == ref.cardinality
    assert rep.population == pytest.approx(ref.population)


def test_family_T_rejects_A():
    s = fix_4()
    with pytest.raises(InvalidArgument):
        family_T_set(s, make_partition(s, 2), "A", 2, 0.3)


def test_shell_swap_chain_fix4_C():
    s = fix_4()
    p = make_partition(s, 2, "uniform")
    t = family_T_set(s, p, "C", 2, 0.3)
    res = shell_swap_work(t.spectrum.eigenvalues, t.members, s.h, 2, LN2 + 0.5 * LN2, 0.5, s.mean_energy)
    assert res.chain_ok
    assert res.energy_after <= res.chain_bound
    assert res.t_count == t.cardinality <= res.shell_count


def test_shell_swap_pure_ghz():
    s = fix_4()
    res = shell_swap_work([1.0], [0], s.h, 2, 0.0, 1.0, s.mean_energy)
    assert res.work == pytest.approx(2 * s.mean_energy)
    assert res.chain_ok


def test_shell_swap_oversized_set():
    s = fix_4()
    with pytest.raises(PreconditionError, match="shell holds"):
        shell_swap_work(np.full(16, 1 / 16), range(16), s.h, 2, LN2, 0.05, s.mean_energy)
