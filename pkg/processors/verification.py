"""
Verification Sweeps
Exhaustive and randomized checks of every inequality the bounds module
evaluates, over seeded Dirichlet instance families.
"""

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from .bounds import (
    CHECK_TOL,
    DEFAULT_ETA_GRID,
    is_degenerate,
    log_inv_p_max,
    nu_interval,
    optimize_nu,
    set_masses,
    thm1_objective,
    verify_prop1,
)
from .dist_core import mutual_information, p_max, relative_ic_spectrum_mass
from .encoders import (
    enumerate_estimators,
    eval_case2,
    identity_encoder,
    induced_joint_xs,
    map_estimator_case2,
)
from .errors import BudgetExceeded, VerificationViolation
from .instance_io import InstanceFile, gen_product, gen_random
from .search import (
    best_mi_partition,
    exact_case2,
    exhaustive_raw_case2,
    ordering_check,
    partitions_up_to_k,
)

logger = logging.getLogger(__name__)


LEMMA_TOL = 1e-12
DOMINANCE_TOL = 1e-12
NO_HELP_TOL = 1e-6


@dataclass
class Violation:
    """One failed check"""
    check: str
    instance: str
    message: str
    lhs: Optional[float] = None
    rhs: Optional[float] = None


@dataclass
class SweepResult:
    """Outcome of one named sweep"""
    name: str
    checked: int = 0
    violations: List[Violation] = field(default_factory=list)
    notes: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    def record(self, ok: bool, instance: str, message: str, lhs: float = None, rhs: float = None) -> None:
        self.checked += 1
        if not ok:
            self.violations.append(Violation(self.name, instance, message, lhs, rhs))

    def merge(self, other: 'SweepResult') -> None:
        self.checked += other.checked
        self.violations.extend(other.violations)
        for key, value in other.notes.items():
            self.notes[key] = self.notes.get(key, 0) + value

    def counts(self) -> Dict[str, int]:
        return {'checked': self.checked, 'violations': self.violation_count}

    def to_report(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        lines = [f"{self.name}: {status} ({self.checked} checks, {self.violation_count} violations)"]
        for violation in self.violations[:5]:
            lines.append(f"  [{violation.instance}] {violation.message}")
        if self.violation_count > 5:
            lines.append(f"  ... and {self.violation_count - 5} more")
        return '\n'.join(lines)


# ===== Instance families =====

def random_instances(
    count: int,
    seed: int,
    x_max: int,
    y_max: int,
    concentration: float = 1.0,
    x_min: int = 1,
    y_min: int = 1
) -> List[InstanceFile]:
    """Seeded family: sizes drawn uniformly, tables Dirichlet, per-instance seeds drawn from `seed`"""
    rng = np.random.default_rng(seed)
    instances = []
    for i in range(count):
        x_size = int(rng.integers(x_min, x_max + 1))
        y_size = int(rng.integers(y_min, y_max + 1))
        instance_seed = int(rng.integers(0, 2 ** 31 - 1))
        instances.append(gen_random(x_size, y_size, concentration, instance_seed, name=f"inst{i:04d}"))
    return instances


def product_instances(count: int, seed: int, x_max: int, y_max: int) -> List[InstanceFile]:
    rng = np.random.default_rng(seed)
    instances = []
    for i in range(count):
        x_size = int(rng.integers(1, x_max + 1))
        y_size = int(rng.integers(1, y_max + 1))
        instance_seed = int(rng.integers(0, 2 ** 31 - 1))
        instances.append(gen_product(x_size, y_size, 1.0, instance_seed, name=f"prod{i:04d}"))
    return instances


def _fan_out(fn: Callable, tasks: Sequence, workers: int, desc: str, progress: bool) -> List:
    """Map fn over tasks, order preserved; a process pool when workers > 1"""
    bar_format = '{desc}: {n}/{total}|{bar}| [{elapsed}<{remaining}]'
    if workers <= 1:
        iterator = map(fn, tasks)
        results = []
        for result in tqdm(iterator, total=len(tasks), desc=desc, bar_format=bar_format, disable=not progress):
            results.append(result)
        return results
    with Pool(processes=workers) as pool:
        return list(tqdm(pool.imap(fn, tasks), total=len(tasks), desc=desc,
                         bar_format=bar_format, disable=not progress))


def _merge(name: str, parts: Iterable[SweepResult]) -> SweepResult:
    merged = SweepResult(name)
    for part in parts:
        merged.merge(part)
    return merged


# ===== Lemma / spectrum-bound sweep =====

def _triples_worker(task) -> Dict[str, SweepResult]:
    instance, eta_grid, m_max, l_max = task
    j = instance.joint()
    tag = instance.name or 'instance'
    lemma = SweepResult('lemma1')
    prop1 = SweepResult('prop1')

    for l_size in range(1, l_max + 1):
        for phi_y in partitions_up_to_k(j.y_size, l_size):
            for m_size in range(1, m_max + 1):
                for phi_x in partitions_up_to_k(j.x_size, m_size):
                    for psi in enumerate_estimators(m_size, l_size, j.x_size):
                        for eta in eta_grid:
                            dc_e = set_masses(j, phi_x, phi_y, psi, eta).mass_Dc_and_E
                            limit = 2.0 ** (-eta)
                            lemma.record(
                                dc_e <= limit + LEMMA_TOL, tag,
                                f"p(D^c n E)={dc_e!r} > 2^-eta={limit!r} (eta={eta}, phi_x={phi_x.map}, "
                                f"phi_y={phi_y.map}, psi={psi.table})",
                                dc_e, limit,
                            )
                        for check in verify_prop1(j, phi_x, phi_y, psi, eta_grid):
                            prop1.record(
                                check.ok, tag,
                                f"P_c={check.lhs!r} > rhs={check.rhs!r} (eta={check.eta}, |M|={m_size})",
                                check.lhs, check.rhs,
                            )
    return {'lemma1': lemma, 'prop1': prop1}


def sweep_lemma_prop1(
    instances: Sequence[InstanceFile],
    eta_grid: Sequence[float] = DEFAULT_ETA_GRID,
    m_max: int = 2,
    l_max: int = 2,
    workers: int = 1,
    progress: bool = False
) -> Dict[str, SweepResult]:
    """Every (phi_x, phi_y, psi) with |M| <= m_max, |L| <= l_max, every eta in the grid"""
    tasks = [(instance, tuple(eta_grid), m_max, l_max) for instance in instances]
    parts = _fan_out(_triples_worker, tasks, workers, "  Lemma/spectrum", progress)
    return {name: _merge(name, (part[name] for part in parts)) for name in ('lemma1', 'prop1')}


# ===== MI bound sweep =====

def _interior_grid(upper: float, points: int) -> np.ndarray:
    """points evenly spaced strictly inside (0, upper)"""
    return upper * np.arange(1, points + 1) / (points + 1)


def _theorem_worker(task) -> Dict[str, SweepResult]:
    instance, l_max, nu_points, m_size, budget = task
    j = instance.joint()
    tag = instance.name or 'instance'
    theorem = SweepResult('thm1')
    tail = SweepResult('tail_bound')
    corollary = SweepResult('corollary')
    optimum = SweepResult('thm1_optimum')
    ordering = SweepResult('ordering')

    pm = p_max(j)
    try:
        optima = ordering_check(j, m_size, l_max, budget)
        ordering.record(True, tag, '')
    except VerificationViolation as e:
        ordering.record(False, tag, str(e))
        optima = None
    except BudgetExceeded as e:
        ordering.notes['skipped'] = ordering.notes.get('skipped', 0) + 1
        logger.debug(f"{tag}: ordering check skipped ({e})")
        optima = None

    if is_degenerate(j):
        # Bound is reported as 1 and every P_c <= 1
        theorem.notes['degenerate'] = 1
        return {s.name: s for s in (theorem, tail, corollary, optimum, ordering)}

    upper = log_inv_p_max(j)
    nus = _interior_grid(upper, nu_points)
    cor_limit = min(1.0, upper)

    for phi_y in partitions_up_to_k(j.y_size, l_max):
        xs = induced_joint_xs(j, phi_y)
        mi = mutual_information(xs).bits
        p_correct = map_estimator_case2(xs)[1].p_correct
        for nu in nus:
            thm1 = 2.0 ** nu * pm + mi / nu
            theorem.record(
                p_correct <= thm1 + CHECK_TOL, tag,
                f"max_psi P_c={p_correct!r} > thm1={thm1!r} (phi_y={phi_y.map}, nu={nu!r})",
                p_correct, thm1,
            )
            rigorous = 2.0 ** nu * pm + relative_ic_spectrum_mass(xs, nu)
            tail.record(
                p_correct <= rigorous + CHECK_TOL, tag,
                f"max_psi P_c={p_correct!r} > tail bound={rigorous!r} (phi_y={phi_y.map}, nu={nu!r})",
                p_correct, rigorous,
            )
            if nu < cor_limit:
                cor = (1.0 + nu) * pm + mi / nu
                corollary.record(
                    thm1 <= cor + DOMINANCE_TOL and p_correct <= cor + CHECK_TOL, tag,
                    f"thm1={thm1!r}, cor={cor!r}, P_c={p_correct!r} (phi_y={phi_y.map}, nu={nu!r})",
                    thm1, cor,
                )

    p2_max = optima.p2 if optima is not None else exact_case2(j, l_max, budget).best_value
    mi_phi, _ = best_mi_partition(j, l_max, budget)
    best_bound = optimize_nu(j, mi_phi).thm1_bound
    optimum.record(
        p2_max <= best_bound + CHECK_TOL, tag,
        f"P2max={p2_max!r} > optimized bound {best_bound!r} for MI-maximizing phi_y={mi_phi.map}",
        p2_max, best_bound,
    )
    return {s.name: s for s in (theorem, tail, corollary, optimum, ordering)}


def sweep_theorem(
    instances: Sequence[InstanceFile],
    l_max: int = 3,
    nu_points: int = 50,
    m_size: int = 2,
    budget: int = 10_000_000,
    workers: int = 1,
    progress: bool = False
) -> Dict[str, SweepResult]:
    """
    Per-phi MI bound, the pre-Markov tail bound, corollary dominance, the
    optimized bound at the MI-maximizing phi and the case ordering.
    """
    tasks = [(instance, l_max, nu_points, m_size, budget) for instance in instances]
    parts = _fan_out(_theorem_worker, tasks, workers, "  MI bound", progress)
    names = ('thm1', 'tail_bound', 'corollary', 'thm1_optimum', 'ordering')
    return {name: _merge(name, (part[name] for part in parts)) for name in names}


# ===== No-help certificate =====

def sweep_no_help(instances: Sequence[InstanceFile], budget: int = 10_000_000) -> SweepResult:
    """Product-form instances: P2max = p_max for every |L| <= |Y|, optimized bound <= p_max + 1e-6"""
    result = SweepResult('no_help')
    for instance in instances:
        j = instance.joint()
        tag = instance.name or 'instance'
        pm = p_max(j)
        for l_size in range(1, j.y_size + 1):
            value = exact_case2(j, l_size, budget).best_value
            result.record(
                abs(value - pm) <= 1e-12, tag,
                f"P2max={value!r} != p_max={pm!r} at |L|={l_size}", value, pm,
            )
        if is_degenerate(j):
            continue
        bound = optimize_nu(j, identity_encoder(j.y_size)).thm1_bound
        result.record(
            bound <= pm + NO_HELP_TOL, tag,
            f"optimized bound {bound!r} > p_max + 1e-6 = {pm + NO_HELP_TOL!r}", bound, pm,
        )
    return result


# ===== Oracle equivalences =====

def sweep_oracles(instances: Sequence[InstanceFile], l_max: int = 3) -> Dict[str, SweepResult]:
    """MAP vs exhaustive psi, partition search vs raw-function search"""
    map_vs_psi = SweepResult('map_vs_exhaustive_psi')
    partitions_vs_raw = SweepResult('partitions_vs_raw')
    for instance in instances:
        j = instance.joint()
        tag = instance.name or 'instance'
        for l_size in range(1, l_max + 1):
            if j.x_size <= 3:
                for phi_y in partitions_up_to_k(j.y_size, l_size):
                    xs = induced_joint_xs(j, phi_y)
                    map_value = map_estimator_case2(xs)[1].p_correct
                    brute = max(
                        eval_case2(j, phi_y, psi).p_correct
                        for psi in enumerate_estimators(1, l_size, j.x_size)
                    )
                    map_vs_psi.record(
                        abs(map_value - brute) <= 1e-12, tag,
                        f"MAP {map_value!r} != exhaustive {brute!r} (phi_y={phi_y.map})",
                        map_value, brute,
                    )
            if j.y_size <= 4:
                exact = exact_case2(j, l_size).best_value
                raw = exhaustive_raw_case2(j, l_size)
                partitions_vs_raw.record(
                    abs(exact - raw) <= 1e-12, tag,
                    f"partition search {exact!r} != raw search {raw!r} (|L|={l_size})",
                    exact, raw,
                )
    return {s.name: s for s in (map_vs_psi, partitions_vs_raw)}


# ===== nu optimizer =====

def sweep_nu_optimizer(instances: Sequence[InstanceFile], pairs: int = 1000, seed: int = 0) -> Dict[str, SweepResult]:
    """Line search against the 1000-point grid, and midpoint convexity of f on random pairs"""
    grid_check = SweepResult('nu_grid')
    convexity = SweepResult('nu_convexity')
    rng = np.random.default_rng(seed)
    usable = [instance for instance in instances if not is_degenerate(instance.joint())]

    for instance in usable:
        j = instance.joint()
        tag = instance.name or 'instance'
        phi_y = identity_encoder(j.y_size)
        report = optimize_nu(j, phi_y)
        lo, hi = nu_interval(j)
        f = thm1_objective(report.p_max, report.mi_bits)
        grid_min = float(np.min(f(np.linspace(lo, hi, 1000))))
        grid_check.record(
            report.thm1_bound <= grid_min + CHECK_TOL, tag,
            f"optimized {report.thm1_bound!r} > grid minimum {grid_min!r}",
            report.thm1_bound, grid_min,
        )

    if usable:
        for _ in range(pairs):
            instance = usable[int(rng.integers(0, len(usable)))]
            j = instance.joint()
            lo, hi = nu_interval(j)
            a, b = rng.uniform(lo, hi, size=2)
            f = thm1_objective(p_max(j), mutual_information(induced_joint_xs(j, identity_encoder(j.y_size))).bits)
            mid = f((a + b) / 2)
            chord = (f(a) + f(b)) / 2
            convexity.record(
                mid <= chord + CHECK_TOL, instance.name or 'instance',
                f"f(mid)={mid!r} > chord {chord!r} at a={a!r}, b={b!r}", mid, chord,
            )
    return {s.name: s for s in (grid_check, convexity)}


# ===== Full run =====

def run_all_sweeps(
    count: int = 200,
    seed: int = 0,
    x_max: int = 3,
    y_max: int = 4,
    l_max: int = 3,
    m_size: int = 2,
    m_max: int = 2,
    eta_grid: Sequence[float] = DEFAULT_ETA_GRID,
    nu_points: int = 50,
    budget: int = 10_000_000,
    workers: int = 1,
    progress: bool = False
) -> Dict[str, SweepResult]:
    """The full acceptance sweep set, seeded and reproducible"""
    theorem_family = random_instances(count, seed, x_max, y_max)
    triples_family = random_instances(min(50, count), seed + 1, min(3, x_max), min(3, y_max))
    product_family = product_instances(min(50, count), seed + 2, x_max, y_max)

    results: Dict[str, SweepResult] = {}
    results.update(sweep_lemma_prop1(triples_family, eta_grid, m_max, 2, workers, progress))
    results.update(sweep_theorem(theorem_family, l_max, nu_points, m_size, budget, workers, progress))
    results['no_help'] = sweep_no_help(product_family, budget)
    results.update(sweep_oracles(
        [i for i in theorem_family if len(i.pxy) <= 3 and len(i.pxy[0]) <= 4], min(3, l_max)
    ))
    results.update(sweep_nu_optimizer(theorem_family[:100], 1000, seed))
    return results

