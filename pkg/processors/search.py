"""
Encoder Search
Exact enumeration over set partitions (restricted-growth strings) and
seeded local search for the optimal correct probabilities of Cases 1-3.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import Pool
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .dist_core import JointDist, mutual_information, p_max
from .encoders import (
    Encoder,
    Estimator,
    constant_encoder,
    induced_joint_xs,
    map_estimator_case1,
    map_estimator_case2,
)
from .errors import BudgetExceeded, DimensionMismatch, VerificationViolation

logger = logging.getLogger(__name__)


DEFAULT_BUDGET = 10_000_000
BATCH_SIZE = 4096
ORDERING_TOL = 1e-12
# Minimum gain for a local-search move; keeps float noise from cycling
MOVE_TOL = 1e-15


@dataclass(frozen=True)
class SearchResult:
    """Best encoders/estimator found by a search"""
    best_value: float
    best_phi_x: Optional[Encoder]
    best_phi_y: Optional[Encoder]
    best_psi: Estimator
    method: str  # 'exact' | 'local-search'
    candidates_evaluated: int
    restarts: int = 0

    def to_dict(self) -> dict:
        return {
            'best_value': self.best_value,
            'best_phi_x': list(self.best_phi_x.map) if self.best_phi_x else None,
            'best_phi_y': list(self.best_phi_y.map) if self.best_phi_y else None,
            'best_psi': [list(row) for row in self.best_psi.table],
            'method': self.method,
            'candidates_evaluated': self.candidates_evaluated,
            'restarts': self.restarts,
        }


class CaseOptima(NamedTuple):
    p1: float
    p2: float
    p3: float


# ===== Partition enumeration =====

@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)"""
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def partition_count(n: int, k: int) -> int:
    """Number of set partitions of n elements into at most k blocks"""
    return sum(stirling2(n, j) for j in range(1, min(n, k) + 1))


def _rgs_completions(prefix: Tuple[int, ...], n: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Restricted-growth strings of length n, <= k blocks, starting with prefix, in lex order"""
    labels = list(prefix) + [0] * (n - len(prefix))
    blocks = max(prefix) + 1 if prefix else 0

    def extend(i: int, used: int):
        if i == n:
            yield tuple(labels)
            return
        for label in range(min(used + 1, k)):
            labels[i] = label
            yield from extend(i + 1, max(used, label + 1))

    yield from extend(len(prefix), blocks)


def restricted_growth_strings(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    if n < 1 or k < 1:
        raise DimensionMismatch(f"Need n >= 1 and k >= 1, got n={n}, k={k}")
    yield from _rgs_completions((), n, k)


def partitions_up_to_k(n: int, k: int) -> Iterator[Encoder]:
    """One canonical encoder per partition of {0..n-1} into at most k blocks"""
    for labels in restricted_growth_strings(n, k):
        yield Encoder(n, k, labels)


def _chunk_prefixes(n: int, k: int, workers: int) -> List[Tuple[int, ...]]:
    """Contiguous lexicographic chunks: enough prefixes to keep the pool busy"""
    if workers <= 1:
        return [()]
    for length in range(1, n + 1):
        prefixes = list(_rgs_completions((), length, k))
        if len(prefixes) >= 4 * workers or length == n:
            return prefixes
    return [()]


# ===== Batched objectives =====

def _induced_batch(p: np.ndarray, maps: np.ndarray, k: int) -> np.ndarray:
    """(B, |X|, k) induced joints; columns accumulate in y order for reproducibility"""
    batch = maps.shape[0]
    xs = np.zeros((batch, p.shape[0], k))
    rows = np.arange(batch)
    for y in range(p.shape[1]):
        xs[rows, :, maps[:, y]] += p[:, y]
    return xs


def _case2_values(p: np.ndarray, maps: np.ndarray, k: int) -> np.ndarray:
    return _induced_batch(p, maps, k).max(axis=1).sum(axis=1)


def _case1_values(p: np.ndarray, x_blocks: Sequence[np.ndarray], maps: np.ndarray, k: int) -> np.ndarray:
    xs = _induced_batch(p, maps, k)
    total = np.zeros(maps.shape[0])
    for members in x_blocks:
        total += xs[:, members, :].max(axis=1).sum(axis=1)
    return total


def _batches(stream: Iterator[Tuple[int, ...]], size: int = BATCH_SIZE) -> Iterator[np.ndarray]:
    while True:
        chunk = list(itertools.islice(stream, size))
        if not chunk:
            return
        yield np.asarray(chunk, dtype=np.intp)


def _best_in_stream(values_fn, stream) -> Tuple[float, Optional[Tuple[int, ...]], int]:
    """First-found maximum over a candidate stream (strict improvement only)"""
    best_value = -np.inf
    best_labels = None
    evaluated = 0
    for maps in _batches(stream):
        values = values_fn(maps)
        evaluated += len(values)
        i = int(np.argmax(values))
        if values[i] > best_value:
            best_value = float(values[i])
            best_labels = tuple(int(v) for v in maps[i])
    return best_value, best_labels, evaluated


def _case2_chunk(args) -> Tuple[float, Optional[Tuple[int, ...]], int]:
    p, prefix, n, k = args
    return _best_in_stream(lambda maps: _case2_values(p, maps, k), _rgs_completions(prefix, n, k))


def _case1_chunk(args) -> Tuple[float, Optional[Tuple[int, ...]], int]:
    p, x_labels, m_size, prefix, n, k = args
    x_blocks = [np.asarray(members) for members in Encoder(len(x_labels), m_size, x_labels).blocks()]
    return _best_in_stream(lambda maps: _case1_values(p, x_blocks, maps, k), _rgs_completions(prefix, n, k))


def _reduce(chunk_results) -> Tuple[float, Optional[Tuple[int, ...]], int]:
    """Combine chunk maxima in chunk order; matches the serial first-found rule"""
    best_value, best_labels, evaluated = -np.inf, None, 0
    for value, labels, count in chunk_results:
        evaluated += count
        if labels is not None and value > best_value:
            best_value, best_labels = value, labels
    return best_value, best_labels, evaluated


def _run_chunks(worker, tasks, workers: int):
    if workers <= 1 or len(tasks) == 1:
        return [worker(task) for task in tasks]
    with Pool(processes=workers) as pool:
        return pool.map(worker, tasks)


def _check_budget(candidates: int, budget: int) -> None:
    if candidates > budget:
        raise BudgetExceeded(candidates, budget)


# ===== Exact searches =====

def exact_case2(j: JointDist, l_size: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> SearchResult:
    """
    P_c,max^(2): maximize sum_s max_x p_XS(x, s) over every phi_y partition.

    Raises:
        BudgetExceeded: more partitions than the budget allows
    """
    n = j.y_size
    _check_budget(partition_count(n, l_size), budget)

    tasks = [(j.p, prefix, n, l_size) for prefix in _chunk_prefixes(n, l_size, workers)]
    _, labels, evaluated = _reduce(_run_chunks(_case2_chunk, tasks, workers))

    phi_y = Encoder(n, l_size, labels)
    psi, result = map_estimator_case2(induced_joint_xs(j, phi_y))
    logger.debug(f"exact_case2: {evaluated} partitions, best {result.p_correct:.12f}")
    return SearchResult(
        best_value=result.p_correct,
        best_phi_x=None,
        best_phi_y=phi_y,
        best_psi=psi,
        method='exact',
        candidates_evaluated=evaluated,
    )


def exact_case1(
    j: JointDist,
    m_size: int,
    l_size: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1
) -> SearchResult:
    """
    P_c,max^(1): maximize sum_{m,l} max_{x in cell m} p_XS(x, l)
    over phi_x partitions x phi_y partitions.
    """
    n = j.y_size
    _check_budget(partition_count(j.x_size, m_size) * partition_count(n, l_size), budget)

    prefixes = _chunk_prefixes(n, l_size, workers)
    x_partitions = list(restricted_growth_strings(j.x_size, m_size))
    tasks = [
        (j.p, x_labels, m_size, prefix, n, l_size)
        for x_labels in x_partitions
        for prefix in prefixes
    ]
    # x-major task order keeps the serial first-found winner
    chunk_results = _run_chunks(_case1_chunk, tasks, workers)
    paired = (
        (value, None if y_labels is None else (task[1], y_labels), count)
        for task, (value, y_labels, count) in zip(tasks, chunk_results)
    )
    best_value, best_pair, evaluated = _reduce(paired)

    phi_x = Encoder(j.x_size, m_size, best_pair[0])
    phi_y = Encoder(n, l_size, best_pair[1])
    psi, result = map_estimator_case1(j, phi_x, phi_y)
    return SearchResult(
        best_value=result.p_correct,
        best_phi_x=phi_x,
        best_phi_y=phi_y,
        best_psi=psi,
        method='exact',
        candidates_evaluated=evaluated,
    )


def exhaustive_raw_case2(j: JointDist, l_size: int) -> float:
    """Case-2 optimum over all |L|^|Y| raw encoder functions (oracle, small sizes only)"""
    stream = itertools.product(range(l_size), repeat=j.y_size)
    value, _, _ = _best_in_stream(lambda maps: _case2_values(j.p, maps, l_size), stream)
    return value


def best_mi_partition(j: JointDist, l_size: int, budget: int = DEFAULT_BUDGET) -> Tuple[Encoder, float]:
    """phi_y partition with the largest I(X; phi_y(Y)); first found on ties"""
    _check_budget(partition_count(j.y_size, l_size), budget)
    best, best_bits = None, -1.0
    for phi_y in partitions_up_to_k(j.y_size, l_size):
        bits = mutual_information(induced_joint_xs(j, phi_y)).bits
        if bits > best_bits:
            best, best_bits = phi_y, bits
    return best, best_bits


# ===== Local search =====

def _partition_value(p: np.ndarray, labels: Sequence[int], k: int) -> float:
    return float(_case2_values(p, np.asarray([labels], dtype=np.intp), k)[0])


def _completion_counts(n: int, k: int) -> List[List[int]]:
    """counts[r][u]: restricted-growth completions of r more entries with u blocks already open"""
    counts = [[1] * (k + 2)]
    for _ in range(n):
        prev = counts[-1]
        counts.append([u * prev[u] + (prev[u + 1] if u < k else 0) for u in range(k + 1)] + [0])
    return counts


def random_partition(
    rng: np.random.Generator,
    n: int,
    k: int,
    counts: Optional[List[List[int]]] = None
) -> Tuple[int, ...]:
    """Restricted-growth string drawn uniformly from the partitions of n items into <= k blocks"""
    counts = counts or _completion_counts(n, k)
    labels = [0]
    used = 1
    for i in range(1, n):
        remaining = n - i - 1
        p_new = counts[remaining][used + 1] / counts[remaining + 1][used] if used < k else 0.0
        if rng.random() < p_new:
            labels.append(used)
            used += 1
        else:
            labels.append(int(rng.integers(used)))
    return tuple(labels)


def _neighbours(labels: Tuple[int, ...], k: int) -> Iterator[Tuple[int, ...]]:
    """Move one element to another existing block or to a fresh block (<= k blocks)"""
    used = max(labels) + 1
    for i, current in enumerate(labels):
        targets = list(range(used)) + ([used] if used < k else [])
        for target in targets:
            if target == current:
                continue
            moved = list(labels)
            moved[i] = target
            yield Encoder(len(labels), k, tuple(moved)).canonical().map


def local_search_case2(
    j: JointDist,
    l_size: int,
    restarts: int = 20,
    seed: int = 0
) -> SearchResult:
    """
    Multi-restart best-improvement hill climbing over phi_y partitions.

    restarts=0 is treated as a single start. Deterministic given seed.
    """
    n = j.y_size
    starts = max(1, restarts)
    rng = np.random.default_rng(seed)
    counts = _completion_counts(n, l_size)
    best_labels, best_value = None, -np.inf
    evaluated = 0

    for _ in range(starts):
        labels = random_partition(rng, n, l_size, counts)
        value = _partition_value(j.p, labels, l_size)
        evaluated += 1
        while True:
            candidates = list(dict.fromkeys(_neighbours(labels, l_size)))
            if not candidates:
                break
            values = _case2_values(j.p, np.asarray(candidates, dtype=np.intp), l_size)
            evaluated += len(candidates)
            i = int(np.argmax(values))
            if values[i] <= value + MOVE_TOL:
                break
            labels, value = candidates[i], float(values[i])
        if value > best_value:
            best_labels, best_value = labels, value

    phi_y = Encoder(n, l_size, best_labels)
    psi, result = map_estimator_case2(induced_joint_xs(j, phi_y))
    return SearchResult(
        best_value=result.p_correct,
        best_phi_x=None,
        best_phi_y=phi_y,
        best_psi=psi,
        method='local-search',
        candidates_evaluated=evaluated,
        restarts=starts,
    )


# ===== Case ordering =====

def case3_value(j: JointDist) -> float:
    """Blind-guess optimum via the MAP estimator on constant encoders"""
    _, result = map_estimator_case1(j, constant_encoder(j.x_size), constant_encoder(j.y_size))
    return result.p_correct


def ordering_check(
    j: JointDist,
    m_size: int,
    l_size: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1
) -> CaseOptima:
    """
    Compute (P1, P2, P3) and check P1 >= P2 >= P3 = p_max.

    Raises:
        BudgetExceeded: propagated from the exact searches
        VerificationViolation: the ordering fails
    """
    p1 = exact_case1(j, m_size, l_size, budget, workers).best_value
    p2 = exact_case2(j, l_size, budget, workers).best_value
    return assert_case_ordering(j, p1, p2)


def assert_case_ordering(j: JointDist, p1: float, p2: float) -> CaseOptima:
    """Check P1 >= P2 >= P3 = p_max and return the three values"""
    p3 = case3_value(j)
    pm = p_max(j)
    if p1 < p2 - ORDERING_TOL or p2 < p3 - ORDERING_TOL or abs(p3 - pm) > ORDERING_TOL:
        raise VerificationViolation(
            f"Case ordering failed: P1={p1!r}, P2={p2!r}, P3={p3!r}, p_max={pm!r}"
        )
    return CaseOptima(p1, p2, p3)
