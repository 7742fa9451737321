"""
Finite Distribution Core
Joint tables, marginals, conditionals and information measures (all logs base 2)
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr

from .errors import DimensionMismatch, EmptyAlphabet, NegativeMass, NotNormalized

logger = logging.getLogger(__name__)


NORMALIZATION_TOL = 1e-9
NEGATIVE_CLAMP_TOL = 1e-12
# Slack used when a threshold test sits exactly on a log value
DENSITY_TOL = 1e-12

_LN2 = np.log(2.0)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class JointDist:
    """Joint probability table p(x, y) with rows indexed by X and columns by Y"""
    p: np.ndarray
    x_labels: Tuple[str, ...]
    y_labels: Tuple[str, ...]

    @property
    def x_size(self) -> int:
        return self.p.shape[0]

    @property
    def y_size(self) -> int:
        return self.p.shape[1]

    @property
    def total(self) -> float:
        return float(self.p.sum())

    def __repr__(self) -> str:
        return f"JointDist({self.x_size}x{self.y_size})"


@dataclass(frozen=True)
class CondDist:
    """
    Conditional distribution of the first coordinate given the second

    rows[s] is the distribution given s; rows for zero-marginal s are NaN
    and flagged False in support_mask.
    """
    rows: np.ndarray
    support_mask: np.ndarray

    @property
    def given_size(self) -> int:
        return self.rows.shape[0]

    @property
    def out_size(self) -> int:
        return self.rows.shape[1]

    def row(self, s: int) -> np.ndarray:
        if not self.support_mask[s]:
            raise KeyError(f"Conditional row {s} is undefined (zero marginal)")
        return self.rows[s]


@dataclass(frozen=True)
class InfoValue:
    """Non-negative information quantity in bits"""
    bits: float = field(default=0.0)

    def __post_init__(self):
        if not np.isfinite(self.bits) or self.bits < 0:
            raise ValueError(f"Information value must be finite and >= 0, got {self.bits!r}")

    def __float__(self) -> float:
        return float(self.bits)


def _default_labels(prefix: str, size: int) -> Tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(size))


def _from_array(p: np.ndarray, x_labels=None, y_labels=None) -> JointDist:
    """Wrap an already valid table without renormalizing it"""
    x_labels = tuple(x_labels) if x_labels is not None else _default_labels('x', p.shape[0])
    y_labels = tuple(y_labels) if y_labels is not None else _default_labels('y', p.shape[1])
    return JointDist(p=_frozen(p), x_labels=x_labels, y_labels=y_labels)


def make_joint(
    table,
    x_labels: Optional[Sequence[str]] = None,
    y_labels: Optional[Sequence[str]] = None
) -> JointDist:
    """
    Validate and build a joint distribution.

    Tiny negatives (>= -1e-12) are clamped to 0, then the table is
    renormalized once so it sums to 1 in working precision.

    Raises:
        EmptyAlphabet: no rows or no columns
        NegativeMass: an entry below -1e-12
        NotNormalized: total mass off by more than 1e-9
        DimensionMismatch: ragged table or label count mismatch
    """
    try:
        arr = np.array(table, dtype=float)
    except (TypeError, ValueError) as e:
        raise DimensionMismatch(f"Table is not a rectangular numeric array: {e}") from e

    if arr.ndim == 1 and arr.size == 0:
        raise EmptyAlphabet("Joint table has no rows")
    if arr.ndim != 2:
        raise DimensionMismatch(f"Joint table must be 2-D, got {arr.ndim}-D")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise EmptyAlphabet(f"Joint table has shape {arr.shape}")

    if not np.all(np.isfinite(arr)):
        raise NotNormalized(float('nan'))

    if arr.min() < -NEGATIVE_CLAMP_TOL:
        row, col = np.unravel_index(int(np.argmin(arr)), arr.shape)
        raise NegativeMass(float(arr[row, col]), (int(row), int(col)))
    arr = np.clip(arr, 0.0, None)

    total = float(arr.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(total)

    if x_labels is not None and len(x_labels) != arr.shape[0]:
        raise DimensionMismatch(f"{len(x_labels)} x_labels for {arr.shape[0]} rows")
    if y_labels is not None and len(y_labels) != arr.shape[1]:
        raise DimensionMismatch(f"{len(y_labels)} y_labels for {arr.shape[1]} columns")

    return _from_array(arr / total, x_labels, y_labels)


def transpose(j: JointDist) -> JointDist:
    """Swap the roles of X and Y"""
    return _from_array(j.p.T, j.y_labels, j.x_labels)


def marginal_x(j: JointDist) -> np.ndarray:
    return j.p.sum(axis=1)


def marginal_y(j: JointDist) -> np.ndarray:
    return j.p.sum(axis=0)


def p_max(j: JointDist) -> float:
    """Largest X-marginal probability; the blind-guess optimum"""
    return float(marginal_x(j).max())


def entropy(vector) -> float:
    """Shannon entropy in bits (0 log 0 = 0)"""
    return float(entr(np.asarray(vector, dtype=float)).sum() / _LN2)


def conditional_first_given_second(joint: JointDist) -> CondDist:
    """p(first | second) for a joint over First x Second"""
    column_mass = marginal_y(joint)
    support = column_mass > 0
    rows = np.full((joint.y_size, joint.x_size), np.nan)
    rows[support] = (joint.p[:, support] / column_mass[support]).T
    return CondDist(rows=_frozen(rows), support_mask=support.copy())


def conditional_x_given_s(xs: JointDist) -> CondDist:
    """p_{X|S}(x|s); rows for zero-mass s are masked"""
    return conditional_first_given_second(xs)


def information_density(xs: JointDist) -> np.ndarray:
    """log2( p_{X|S}(x|s) / p_X(x) ) on the support, NaN elsewhere"""
    px = marginal_x(xs)
    ps = marginal_y(xs)
    density = np.full(xs.p.shape, np.nan)
    support = xs.p > 0
    rows, cols = np.nonzero(support)
    density[rows, cols] = np.log2(xs.p[rows, cols] / (px[rows] * ps[cols]))
    return density


def mutual_information(xs: JointDist) -> InfoValue:
    """I(X;S) in bits, clamped at 0 against round-off"""
    density = information_density(xs)
    support = xs.p > 0
    bits = float(np.sum(xs.p[support] * density[support]))
    return InfoValue(bits=max(bits, 0.0))


def positive_density_mean(xs: JointDist) -> float:
    """E[max(d, 0)] in bits; Markov's inequality for the density tail holds against this"""
    density = information_density(xs)
    support = xs.p > 0
    return float(np.sum(xs.p[support] * np.maximum(density[support], 0.0)))


def relative_ic_spectrum_mass(xs: JointDist, nu: float) -> float:
    """p_XS-mass of the pairs whose information density is >= nu"""
    density = information_density(xs)
    support = xs.p > 0
    in_tail = support & (np.nan_to_num(density, nan=-np.inf) >= nu - DENSITY_TOL)
    return float(min(1.0, xs.p[in_tail].sum()))


def self_information_tail_mass(j: JointDist, threshold: float) -> float:
    """p_X{ log2(1/p_X(X)) < threshold } over the X-marginal support"""
    px = marginal_x(j)
    support = px > 0
    self_info = np.full(px.shape, np.inf)
    self_info[support] = -np.log2(px[support])
    return float(px[self_info < threshold - DENSITY_TOL].sum())
