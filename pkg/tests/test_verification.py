import pytest

from processors import verification
from processors.verification import (
    SweepResult,
    product_instances,
    random_instances,
    run_all_sweeps,
    sweep_lemma_prop1,
    sweep_no_help,
    sweep_nu_optimizer,
    sweep_oracles,
    sweep_theorem,
)


@pytest.fixture(scope='module')
def family():
    return random_instances(12, seed=3, x_max=3, y_max=4)


def test_random_family_is_seeded():
    a = random_instances(5, seed=9, x_max=3, y_max=3)
    b = random_instances(5, seed=9, x_max=3, y_max=3)
    assert [i.pxy for i in a] == [i.pxy for i in b]
    assert all(1 <= len(i.pxy) <= 3 and 1 <= len(i.pxy[0]) <= 3 for i in a)


def test_sweep_result_counts_and_report():
    sweep = SweepResult('demo')
    sweep.record(True, 'a', '')
    sweep.record(False, 'b', 'lhs > rhs', 2.0, 1.0)
    assert sweep.counts() == {'checked': 2, 'violations': 1}
    assert not sweep.passed
    assert 'FAIL' in sweep.to_report()
    assert '[b] lhs > rhs' in sweep.to_report()


def test_lemma_and_spectrum_sweep():
    results = sweep_lemma_prop1(random_instances(6, seed=1, x_max=3, y_max=3), m_max=2, l_max=2)
    for name in ('lemma1', 'prop1'):
        assert results[name].checked > 0
        assert results[name].passed, results[name].to_report()


def test_lemma_sweep_goes_through_set_masses(monkeypatch):
    calls = {'set_masses': 0, 'verify_prop1': 0}
    real_set_masses = verification.set_masses
    real_verify_prop1 = verification.verify_prop1

    def counting_set_masses(*args, **kwargs):
        calls['set_masses'] += 1
        return real_set_masses(*args, **kwargs)

    def counting_verify_prop1(*args, **kwargs):
        calls['verify_prop1'] += 1
        return real_verify_prop1(*args, **kwargs)

    monkeypatch.setattr(verification, 'set_masses', counting_set_masses)
    monkeypatch.setattr(verification, 'verify_prop1', counting_verify_prop1)
    eta_grid = (0.5, 2.0)
    results = sweep_lemma_prop1(random_instances(2, seed=5, x_max=2, y_max=3), eta_grid, m_max=2, l_max=2)
    assert calls['set_masses'] == results['lemma1'].checked
    assert calls['verify_prop1'] * len(eta_grid) == results['prop1'].checked


def test_theorem_sweep(family):
    results = sweep_theorem(family, l_max=3, nu_points=10)
    assert set(results) == {'thm1', 'tail_bound', 'corollary', 'thm1_optimum', 'ordering'}
    for sweep in results.values():
        assert sweep.passed, sweep.to_report()
    assert results['ordering'].checked == len(family)
    assert results['thm1_optimum'].checked == len(family) - results['thm1'].notes.get('degenerate', 0)


def test_theorem_sweep_parallel_matches_serial(family):
    serial = sweep_theorem(family[:6], l_max=2, nu_points=5, workers=1)
    parallel = sweep_theorem(family[:6], l_max=2, nu_points=5, workers=2)
    assert {k: v.counts() for k, v in serial.items()} == {k: v.counts() for k, v in parallel.items()}


def test_no_help_sweep():
    result = sweep_no_help(product_instances(8, seed=4, x_max=3, y_max=4))
    assert result.checked > 0
    assert result.passed, result.to_report()


def test_oracle_sweep(family):
    results = sweep_oracles(family, l_max=3)
    assert results['map_vs_exhaustive_psi'].passed
    assert results['partitions_vs_raw'].passed
    assert results['partitions_vs_raw'].checked == 3 * len(family)


def test_nu_optimizer_sweep(family):
    results = sweep_nu_optimizer(family, pairs=100, seed=0)
    assert results['nu_grid'].passed
    assert results['nu_convexity'].passed
    assert results['nu_convexity'].checked == 100


def test_run_all_sweeps_small():
    results = run_all_sweeps(count=6, seed=3, x_max=3, y_max=3, l_max=2, nu_points=5)
    assert {'lemma1', 'prop1', 'thm1', 'no_help', 'nu_grid'} <= set(results)
    assert all(sweep.passed for sweep in results.values())
