"""
Command Processors
Analyze, search, bound and verify, each producing a RunReport that is
re-evaluated before it is handed back.
"""

import logging
from typing import Any, Dict, Optional

from . import __version__
from .base_processor import BaseProcessor, ProcessorType
from .bounds import (
    DEFAULT_ETA_GRID,
    bound_sweep,
    nu_grid,
    optimize_nu,
    prop1_rhs,
    thm1_bound,
)
from .dist_core import JointDist, mutual_information, p_max
from .encoders import (
    Encoder,
    Estimator,
    eval_case1,
    eval_case2,
    identity_encoder,
    induced_joint_xs,
    map_estimator_case2,
)
from .errors import BudgetExceeded, DimensionMismatch
from .instance_io import InstanceFile, RunReport
from .search import (
    DEFAULT_BUDGET,
    SearchResult,
    assert_case_ordering,
    case3_value,
    exact_case1,
    exact_case2,
    local_search_case2,
)
from .verification import run_all_sweeps

logger = logging.getLogger(__name__)


REPORT_TOL = 1e-9


def _sizes(instance: InstanceFile, j: JointDist, m_size: Optional[int], l_size: Optional[int]):
    m = _first_set(m_size, instance.m_size, 2)
    l = _first_set(l_size, instance.l_size, j.y_size)
    for key, value in (('m_size', m), ('l_size', l)):
        if value < 1:
            raise DimensionMismatch(f"{key} must be >= 1, got {value}")
    return m, l


def _first_set(*values: Optional[int]) -> int:
    return next(v for v in values if v is not None)


def _phi_y(instance: InstanceFile, j: JointDist) -> Encoder:
    return instance.encoder() or identity_encoder(j.y_size)


def _instance_meta(instance: InstanceFile, j: JointDist) -> Dict[str, Any]:
    return {
        'name': instance.name,
        'seed': instance.seed,
        'x_size': j.x_size,
        'y_size': j.y_size,
        'p_max': p_max(j),
    }


def _reevaluate(j: JointDist, entry: Dict[str, Any]) -> float:
    """Value of a serialized SearchResult re-computed from its encoders and estimator"""
    phi_y = Encoder(j.y_size, len(entry['best_psi'][0]), tuple(entry['best_phi_y']))
    psi = Estimator(
        len(entry['best_psi']), len(entry['best_psi'][0]),
        tuple(tuple(row) for row in entry['best_psi'])
    )
    if entry.get('best_phi_x') is None:
        return eval_case2(j, phi_y, psi).p_correct
    phi_x = Encoder(j.x_size, psi.m_size, tuple(entry['best_phi_x']))
    return eval_case1(j, phi_x, phi_y, psi).p_correct


def _search_consistent(j: JointDist, report: RunReport) -> bool:
    for key, entry in report.search.items():
        if abs(_reevaluate(j, entry) - entry['best_value']) > REPORT_TOL:
            logger.error(f"Search result '{key}' does not re-evaluate to {entry['best_value']!r}")
            return False
    return True


class _InstanceProcessor(BaseProcessor):
    """Shared search logic for commands that take one instance"""

    def __init__(
        self,
        processor_type: ProcessorType = ProcessorType.EXACT,
        budget: int = DEFAULT_BUDGET,
        workers: int = 1,
        restarts: int = 20,
        seed: int = 0
    ):
        super().__init__(processor_type)
        self.budget = budget
        self.workers = workers
        self.restarts = restarts
        self.seed = seed

    @property
    def heuristic(self) -> bool:
        return self.processor_type == ProcessorType.HEURISTIC

    def _case2(self, j: JointDist, l_size: int) -> SearchResult:
        try:
            return exact_case2(j, l_size, self.budget, self.workers)
        except BudgetExceeded:
            if not self.heuristic:
                raise
            self.logger.info(f"Case 2 over budget; local search with {self.restarts} restarts")
            return local_search_case2(j, l_size, self.restarts, self.seed)

    def _case1(self, j: JointDist, m_size: int, l_size: int) -> Optional[SearchResult]:
        try:
            return exact_case1(j, m_size, l_size, self.budget, self.workers)
        except BudgetExceeded:
            if not self.heuristic:
                raise
            self.logger.warning("Case 1 over budget and has no local search; omitted")
            return None

    def _optima(self, j: JointDist, m_size: int, l_size: int, report: RunReport) -> None:
        case2 = self._case2(j, l_size)
        case1 = self._case1(j, m_size, l_size)
        report.search['case2'] = case2.to_dict()
        if case1 is not None:
            report.search['case1'] = case1.to_dict()
            # Local-search P2 is only a lower bound, so the ordering is asserted for exact runs
            if case2.method == 'exact':
                assert_case_ordering(j, case1.best_value, case2.best_value)
        report.case_optima = {
            'P1': case1.best_value if case1 is not None else None,
            'P2': case2.best_value,
            'P3': case3_value(j),
            'p_max': p_max(j),
        }


class AnalyzeProcessor(_InstanceProcessor):
    """Cases 1-3, MI and bounds for one instance (and its phi_y if given)"""

    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        instance: InstanceFile = input_data['instance']
        j = instance.joint()
        m_size, l_size = _sizes(instance, j, input_data.get('m_size'), input_data.get('l_size'))
        phi_y = _phi_y(instance, j)
        eta_grid = input_data.get('eta_grid') or DEFAULT_ETA_GRID

        report = RunReport(command='analyze', instance=_instance_meta(instance, j),
                           tool_version=__version__, seed=self.seed)
        self._optima(j, m_size, l_size, report)

        xs = induced_joint_xs(j, phi_y)
        report.mi_bits = {
            'phi_y': mutual_information(xs).bits,
            'identity': mutual_information(j).bits,
        }

        optimized = optimize_nu(j, phi_y)
        report.bounds.append({'kind': 'optimized', **optimized.to_dict()})
        nu = input_data.get('nu')
        if nu is not None:
            report.bounds.append({'kind': 'at_nu', **thm1_bound(j, phi_y, nu).to_dict()})

        p_correct = map_estimator_case2(xs)[1].p_correct
        for eta in eta_grid:
            report.bounds.append({
                'kind': 'spectrum',
                'eta': eta,
                'exact_pc': p_correct,
                'prop1_rhs': prop1_rhs(j, phi_y, 1, eta),
            })
        return {'report': report, 'joint': j}

    def validate(self, output_data: Dict[str, Any]) -> bool:
        report: RunReport = output_data['report']
        j: JointDist = output_data['joint']
        if abs(report.case_optima['P3'] - p_max(j)) > REPORT_TOL:
            return False
        return _search_consistent(j, report)


class SearchProcessor(_InstanceProcessor):
    """Exact (or, over budget with --heuristic, local-search) case optima"""

    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        instance: InstanceFile = input_data['instance']
        j = instance.joint()
        m_size, l_size = _sizes(instance, j, input_data.get('m_size'), input_data.get('l_size'))

        report = RunReport(command='search', instance=_instance_meta(instance, j),
                           tool_version=__version__, seed=self.seed)
        if self.heuristic and input_data.get('force_local_search'):
            case2 = local_search_case2(j, l_size, self.restarts, self.seed)
            report.search['case2'] = case2.to_dict()
            report.case_optima = {'P1': None, 'P2': case2.best_value,
                                  'P3': case3_value(j), 'p_max': p_max(j)}
        else:
            self._optima(j, m_size, l_size, report)
        return {'report': report, 'joint': j}

    def validate(self, output_data: Dict[str, Any]) -> bool:
        return _search_consistent(output_data['joint'], output_data['report'])


class BoundProcessor(_InstanceProcessor):
    """nu sweep and optimized MI bound for one phi_y, with plot rows"""

    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        instance: InstanceFile = input_data['instance']
        j = instance.joint()
        phi_y = _phi_y(instance, j)

        nu = input_data.get('nu')
        if nu is not None:
            reports = [thm1_bound(j, phi_y, nu)]
            if reports[0].cor_bound is None and not reports[0].degenerate_flag:
                self.logger.info(f"nu={nu} is outside the corollary interval; cor_bound left empty")
        else:
            reports = bound_sweep(j, phi_y, nu_grid(j, input_data.get('nu_grid') or 100))

        optimized = optimize_nu(j, phi_y)
        report = RunReport(command='bound', instance=_instance_meta(instance, j),
                           tool_version=__version__, seed=self.seed)
        report.mi_bits = {'phi_y': optimized.mi_bits}
        report.bounds = [{'kind': 'optimized', **optimized.to_dict()}]
        report.bounds.extend({'kind': 'grid', **r.to_dict()} for r in reports)

        rows = [{
            'nu': r.nu,
            'thm1_bound': r.thm1_bound,
            'cor_bound': r.cor_bound,
            'exact_pc': r.exact_pc,
            'p_max': r.p_max,
        } for r in reports]
        return {'report': report, 'joint': j, 'rows': rows, 'phi_y': phi_y}

    def validate(self, output_data: Dict[str, Any]) -> bool:
        j: JointDist = output_data['joint']
        phi_y: Encoder = output_data['phi_y']
        exact = map_estimator_case2(induced_joint_xs(j, phi_y))[1].p_correct
        for entry in output_data['report'].bounds:
            if entry.get('exact_pc') is not None and abs(entry['exact_pc'] - exact) > REPORT_TOL:
                return False
        return True


class VerifyProcessor(BaseProcessor):
    """Randomized and exhaustive sweeps over every checked inequality"""

    def __init__(self, workers: int = 1, budget: int = DEFAULT_BUDGET, progress: bool = False):
        super().__init__(ProcessorType.VERIFICATION)
        self.workers = workers
        self.budget = budget
        self.progress = progress

    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        seed = input_data.get('seed', 0)
        sweeps = run_all_sweeps(
            count=input_data.get('instances', 200),
            seed=seed,
            x_max=input_data.get('x_max', 3),
            y_max=input_data.get('y_max', 4),
            l_max=input_data.get('l_max', 3),
            m_size=input_data.get('m_size', 2),
            m_max=input_data.get('m_max', 2),
            eta_grid=input_data.get('eta_grid') or DEFAULT_ETA_GRID,
            nu_points=input_data.get('nu_points', 50),
            budget=self.budget,
            workers=self.workers,
            progress=self.progress,
        )
        report = RunReport(command='verify', tool_version=__version__, seed=seed)
        report.instance = {key: input_data.get(key) for key in ('instances', 'x_max', 'y_max', 'l_max')}
        report.verification = {name: sweep.counts() for name, sweep in sweeps.items()}
        return {'report': report, 'sweeps': sweeps}

    def validate(self, output_data: Dict[str, Any]) -> bool:
        sweeps = output_data['sweeps']
        counts = output_data['report'].verification
        return all(counts[name]['violations'] == sweep.violation_count for name, sweep in sweeps.items())
