"""
Encoders and Estimators
Deterministic encoders, estimator tables, induced joints, exact correct
probabilities for the three estimation cases and MAP estimators.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np

from .dist_core import JointDist, _from_array, marginal_x
from .errors import DimensionMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Encoder:
    """Total function {0..domain_size-1} -> {0..range_size-1}, stored as an index tuple"""
    domain_size: int
    range_size: int
    map: Tuple[int, ...]

    def __post_init__(self):
        if self.domain_size < 1 or self.range_size < 1:
            raise DimensionMismatch(
                f"Encoder sizes must be positive (domain={self.domain_size}, range={self.range_size})"
            )
        if len(self.map) != self.domain_size:
            raise DimensionMismatch(f"Encoder map has {len(self.map)} entries, domain is {self.domain_size}")
        for position, label in enumerate(self.map):
            if not 0 <= label < self.range_size:
                raise DimensionMismatch(
                    f"Encoder label {label} at position {position} outside range {self.range_size}"
                )

    def __call__(self, value: int) -> int:
        return self.map[value]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.map, dtype=np.intp)

    def indicator(self) -> np.ndarray:
        """domain_size x range_size 0/1 matrix with a single 1 per row"""
        return np.eye(self.range_size)[self.as_array()]

    def blocks(self) -> list:
        """Fibers of the encoder, ordered by first occurrence"""
        fibers = {}
        for position, label in enumerate(self.map):
            fibers.setdefault(label, []).append(position)
        return list(fibers.values())

    def canonical(self) -> 'Encoder':
        """Relabel as a restricted-growth string (same partition)"""
        relabel = {}
        for label in self.map:
            if label not in relabel:
                relabel[label] = len(relabel)
        return Encoder(self.domain_size, self.range_size, tuple(relabel[label] for label in self.map))


@dataclass(frozen=True)
class Estimator:
    """Decision table psi(m, l) -> x"""
    m_size: int
    l_size: int
    table: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.table) != self.m_size or any(len(row) != self.l_size for row in self.table):
            raise DimensionMismatch(f"Estimator table is not {self.m_size}x{self.l_size}")

    def __call__(self, m: int, l: int) -> int:
        return self.table[m][l]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.intp).reshape(self.m_size, self.l_size)

    def check_x_size(self, x_size: int) -> None:
        for m, row in enumerate(self.table):
            for l, x in enumerate(row):
                if not 0 <= x < x_size:
                    raise DimensionMismatch(f"Estimator entry ({m},{l}) = {x} is not an X index below {x_size}")


@dataclass(frozen=True)
class EvalResult:
    """Correct / error probability of an (encoders, estimator) choice"""
    p_correct: float
    p_error: float

    @classmethod
    def from_correct(cls, p_correct: float) -> 'EvalResult':
        p_correct = float(min(1.0, max(0.0, p_correct)))
        return cls(p_correct=p_correct, p_error=1.0 - p_correct)


# ===== Encoder constructors =====

def identity_encoder(n: int) -> Encoder:
    return Encoder(n, n, tuple(range(n)))


def constant_encoder(n: int, range_size: int = 1) -> Encoder:
    return Encoder(n, range_size, (0,) * n)


def encoder_from_labels(labels: Sequence[int], range_size: int = None) -> Encoder:
    labels = tuple(int(label) for label in labels)
    if range_size is None:
        range_size = max(labels) + 1 if labels else 1
    return Encoder(len(labels), range_size, labels)


def is_refinement(fine: Encoder, coarse: Encoder) -> bool:
    """True if every block of `fine` lies inside one block of `coarse`"""
    if fine.domain_size != coarse.domain_size:
        raise DimensionMismatch("Encoders have different domains")
    image = {}
    for f_label, c_label in zip(fine.map, coarse.map):
        if image.setdefault(f_label, c_label) != c_label:
            return False
    return True


# ===== Induced joints and evaluation =====

def induced_joint_xs(j: JointDist, phi_y: Encoder) -> JointDist:
    """p_XS(x, s) = sum of p_XY(x, y) over y with phi_y(y) = s"""
    if phi_y.domain_size != j.y_size:
        raise DimensionMismatch(f"phi_y domain {phi_y.domain_size} != |Y| = {j.y_size}")
    xs = j.p @ phi_y.indicator()
    return _from_array(xs, j.x_labels, tuple(f"s{s}" for s in range(phi_y.range_size)))


def _check_case1_dims(j: JointDist, phi_x: Encoder, phi_y: Encoder, psi: Estimator = None) -> None:
    if phi_x.domain_size != j.x_size:
        raise DimensionMismatch(f"phi_x domain {phi_x.domain_size} != |X| = {j.x_size}")
    if phi_y.domain_size != j.y_size:
        raise DimensionMismatch(f"phi_y domain {phi_y.domain_size} != |Y| = {j.y_size}")
    if psi is not None:
        if psi.m_size != phi_x.range_size or psi.l_size != phi_y.range_size:
            raise DimensionMismatch(
                f"Estimator is {psi.m_size}x{psi.l_size}, encoders give "
                f"{phi_x.range_size}x{phi_y.range_size}"
            )
        psi.check_x_size(j.x_size)


def correct_mask(j: JointDist, phi_x: Encoder, phi_y: Encoder, psi: Estimator) -> np.ndarray:
    """Boolean |X| x |Y| table of 1[psi(phi_x(x), phi_y(y)) = x]"""
    decisions = psi.as_array()[np.ix_(phi_x.as_array(), phi_y.as_array())]
    return decisions == np.arange(j.x_size)[:, None]


def eval_case1(j: JointDist, phi_x: Encoder, phi_y: Encoder, psi: Estimator) -> EvalResult:
    """P_c = sum over (x, y) of p(x, y) 1[psi(phi_x(x), phi_y(y)) = x]"""
    _check_case1_dims(j, phi_x, phi_y, psi)
    return EvalResult.from_correct(float(j.p[correct_mask(j, phi_x, phi_y, psi)].sum()))


def eval_case2(j: JointDist, phi_y: Encoder, psi: Estimator) -> EvalResult:
    """Case 2: psi sees only phi_y(Y); psi must be 1 x |L|"""
    return eval_case1(j, constant_encoder(j.x_size), phi_y, psi)


def eval_case3(j: JointDist, guess: int) -> EvalResult:
    """Case 3: a fixed guess"""
    if not 0 <= guess < j.x_size:
        raise DimensionMismatch(f"Guess {guess} is not an X index below {j.x_size}")
    return EvalResult.from_correct(float(marginal_x(j)[guess]))


# ===== MAP estimators =====

def map_estimator_case2(xs: JointDist) -> Tuple[Estimator, EvalResult]:
    """
    psi(s) = argmax_x p_XS(x, s), smallest index on ties.

    Zero-mass columns get argmax p_X; they contribute nothing to P_c.
    """
    fallback = int(np.argmax(marginal_x(xs)))
    column_mass = xs.p.sum(axis=0)
    decisions = np.argmax(xs.p, axis=0)
    decisions = np.where(column_mass > 0, decisions, fallback)
    p_correct = float(xs.p.max(axis=0).sum())
    psi = Estimator(1, xs.y_size, (tuple(int(x) for x in decisions),))
    return psi, EvalResult.from_correct(p_correct)


def map_estimator_case1(j: JointDist, phi_x: Encoder, phi_y: Encoder) -> Tuple[Estimator, EvalResult]:
    """
    psi(m, l) = argmax over the phi_x-cell m of p_XS(x, l).

    Empty cells decide index 0 by convention.
    """
    _check_case1_dims(j, phi_x, phi_y)
    xs = induced_joint_xs(j, phi_y).p
    labels = phi_x.as_array()
    table = []
    p_correct = 0.0
    for m in range(phi_x.range_size):
        members = np.flatnonzero(labels == m)
        if members.size == 0:
            table.append((0,) * phi_y.range_size)
            continue
        cell = xs[members, :]
        table.append(tuple(int(members[i]) for i in np.argmax(cell, axis=0)))
        p_correct += float(cell.max(axis=0).sum())
    psi = Estimator(phi_x.range_size, phi_y.range_size, tuple(table))
    return psi, EvalResult.from_correct(p_correct)


def enumerate_estimators(m_size: int, l_size: int, x_size: int) -> Iterator[Estimator]:
    """Every psi: M x L -> X (x_size ** (m_size * l_size) tables; small sizes only)"""
    for flat in itertools.product(range(x_size), repeat=m_size * l_size):
        yield Estimator(
            m_size, l_size,
            tuple(tuple(flat[m * l_size:(m + 1) * l_size]) for m in range(m_size))
        )
