"""
Instance and Report I/O
JSON instance files, JSON run reports, CSV plot series and seeded
Dirichlet instance generation.
"""

import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .dist_core import JointDist, make_joint
from .encoders import Encoder
from .errors import (
    DimensionMismatch,
    EmptyAlphabet,
    InstanceParseError,
    InstanceValidationError,
    NegativeMass,
    NotNormalized,
)

logger = logging.getLogger(__name__)


GENERATOR_NAME = "numpy.random.Generator(PCG64).dirichlet"
PLOT_CSV_HEADER = ['nu', 'thm1_bound', 'cor_bound', 'exact_pc', 'p_max']


@dataclass
class InstanceFile:
    """One joint distribution plus optional encoder and sizes"""
    x_labels: List[str]
    y_labels: List[str]
    pxy: List[List[float]]
    phi_y: Optional[List[int]] = None
    l_size: Optional[int] = None
    m_size: Optional[int] = None
    name: Optional[str] = None
    seed: Optional[int] = None

    def joint(self) -> JointDist:
        return make_joint(self.pxy, self.x_labels, self.y_labels)

    def encoder(self) -> Optional[Encoder]:
        if self.phi_y is None:
            return None
        range_size = self.l_size if self.l_size is not None else max(self.phi_y) + 1
        return Encoder(len(self.phi_y), range_size, tuple(self.phi_y))

    def to_dict(self) -> Dict[str, Any]:
        return {key: value for key, value in asdict(self).items() if value is not None}


@dataclass
class RunReport:
    """Everything one command run produced"""
    command: str
    instance: Dict[str, Any] = field(default_factory=dict)
    case_optima: Dict[str, Optional[float]] = field(default_factory=dict)
    mi_bits: Dict[str, float] = field(default_factory=dict)
    bounds: List[Dict[str, Any]] = field(default_factory=list)
    search: Dict[str, Any] = field(default_factory=dict)
    verification: Dict[str, Dict[str, int]] = field(default_factory=dict)
    wall_time_seconds: float = 0.0
    tool_version: str = ''
    seed: Optional[int] = None
    generator: str = GENERATOR_NAME

    @property
    def violations(self) -> int:
        return sum(counts.get('violations', 0) for counts in self.verification.values())

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# ===== Instances =====

def _require(data: Dict[str, Any], key: str):
    if key not in data:
        raise InstanceParseError(f"Instance is missing required field '{key}'")
    return data[key]


def _label_list(data: Dict[str, Any], key: str, default: List[str]) -> List[str]:
    labels = data.get(key, default)
    if not isinstance(labels, list):
        raise InstanceParseError(f"'{key}' must be a list, got {type(labels).__name__}")
    return [str(v) for v in labels]


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def instance_from_dict(data: Dict[str, Any]) -> InstanceFile:
    """Build and validate an InstanceFile from parsed JSON"""
    if not isinstance(data, dict):
        raise InstanceParseError("Instance file must contain a JSON object")

    pxy = _require(data, 'pxy')
    if not isinstance(pxy, list) or not all(isinstance(row, list) for row in pxy):
        raise InstanceParseError("'pxy' must be a list of rows")
    for r, row in enumerate(pxy):
        for c, value in enumerate(row):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InstanceValidationError(f"Non-numeric probability {value!r}", row=r, column=c)

    x_size = len(pxy)
    y_size = len(pxy[0]) if pxy else 0
    for r, row in enumerate(pxy):
        if len(row) != y_size:
            raise InstanceValidationError(f"Row has {len(row)} entries, expected {y_size}", row=r)

    x_labels = _label_list(data, 'x_labels', [f"x{i}" for i in range(x_size)])
    y_labels = _label_list(data, 'y_labels', [f"y{i}" for i in range(y_size)])
    phi_y = data.get('phi_y')
    if phi_y is not None and not isinstance(phi_y, list):
        raise InstanceParseError(f"'phi_y' must be a list of labels, got {type(phi_y).__name__}")

    instance = InstanceFile(
        x_labels=x_labels,
        y_labels=y_labels,
        pxy=[[float(v) for v in row] for row in pxy],
        phi_y=phi_y,
        l_size=data.get('l_size'),
        m_size=data.get('m_size'),
        name=data.get('name'),
        seed=data.get('seed'),
    )
    validate_instance(instance)
    return instance


def validate_instance(instance: InstanceFile) -> None:
    """
    Raises:
        InstanceValidationError: table or encoder invalid (with row/column locus when known)
    """
    try:
        instance.joint()
    except NegativeMass as e:
        raise InstanceValidationError(f"Negative probability {e.value!r}", row=e.locus[0], column=e.locus[1]) from e
    except NotNormalized as e:
        raise InstanceValidationError(f"pxy sums to {e.total!r}, expected 1") from e
    except (EmptyAlphabet, DimensionMismatch) as e:
        raise InstanceValidationError(str(e)) from e

    for key in ('l_size', 'm_size'):
        value = getattr(instance, key)
        if value is not None and (not _is_int(value) or value < 1):
            raise InstanceValidationError(f"'{key}' must be a positive integer, got {value!r}")

    if instance.phi_y is not None:
        if not isinstance(instance.phi_y, list):
            raise InstanceValidationError(f"phi_y must be a list of labels, got {instance.phi_y!r}")
        y_size = len(instance.pxy[0])
        if len(instance.phi_y) != y_size:
            raise InstanceValidationError(f"phi_y has {len(instance.phi_y)} entries, |Y| = {y_size}")
        for position, label in enumerate(instance.phi_y):
            if not _is_int(label) or label < 0:
                raise InstanceValidationError(f"phi_y entry {label!r} is not a label", column=position)
            if instance.l_size is not None and label >= instance.l_size:
                raise InstanceValidationError(
                    f"phi_y entry {label} must be below l_size {instance.l_size}", column=position
                )


def load_instance(path: Path) -> InstanceFile:
    """
    Load an instance file.

    Raises:
        InstanceParseError: unreadable or malformed JSON
        InstanceValidationError: content fails validation
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise InstanceParseError(f"Invalid JSON in {path}: {e.msg}", line=e.lineno, column=e.colno) from e
    except OSError as e:
        raise InstanceParseError(f"Cannot read {path}: {e}") from e

    instance = instance_from_dict(data)
    logger.info(f"Loaded instance: {path}")
    return instance


def save_instance(instance: InstanceFile, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(instance.to_dict(), f, ensure_ascii=False, indent=2)
    logger.info(f"Saved instance: {path}")
    return path


def gen_random(
    x_size: int,
    y_size: int,
    concentration: float = 1.0,
    seed: int = 0,
    name: Optional[str] = None
) -> InstanceFile:
    """Joint table from a symmetric Dirichlet over all x_size * y_size cells"""
    if x_size < 1 or y_size < 1:
        raise DimensionMismatch(f"Sizes must be >= 1, got {x_size}x{y_size}")
    if concentration <= 0:
        raise ValueError(f"concentration must be > 0, got {concentration!r}")

    rng = np.random.default_rng(seed)
    cells = rng.dirichlet(np.full(x_size * y_size, float(concentration)))
    table = (cells / cells.sum()).reshape(x_size, y_size)
    return InstanceFile(
        x_labels=[f"x{i}" for i in range(x_size)],
        y_labels=[f"y{i}" for i in range(y_size)],
        pxy=table.tolist(),
        name=name or f"dirichlet-{x_size}x{y_size}-seed{seed}",
        seed=seed,
    )


def gen_product(
    x_size: int,
    y_size: int,
    concentration: float = 1.0,
    seed: int = 0,
    name: Optional[str] = None
) -> InstanceFile:
    """Product-form instance p_X (x) p_Y with Dirichlet marginals (side information is useless)"""
    if x_size < 1 or y_size < 1:
        raise DimensionMismatch(f"Sizes must be >= 1, got {x_size}x{y_size}")
    rng = np.random.default_rng(seed)
    px = rng.dirichlet(np.full(x_size, float(concentration)))
    py = rng.dirichlet(np.full(y_size, float(concentration)))
    table = np.outer(px, py)
    return InstanceFile(
        x_labels=[f"x{i}" for i in range(x_size)],
        y_labels=[f"y{i}" for i in range(y_size)],
        pxy=(table / table.sum()).tolist(),
        name=name or f"product-{x_size}x{y_size}-seed{seed}",
        seed=seed,
    )


# ===== Reports =====

def save_report(report: RunReport, path: Path) -> Path:
    """Write the report as JSON; keys are sorted so reruns diff cleanly"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(report.to_dict(), f, ensure_ascii=False, indent=2, sort_keys=True)
    logger.info(f"Saved report: {path}")
    return path


def write_plot_csv(rows: List[Dict[str, Optional[float]]], path: Path) -> Path:
    """CSV with header nu,thm1_bound,cor_bound,exact_pc,p_max; missing values left empty"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=PLOT_CSV_HEADER)
        writer.writeheader()
        for row in rows:
            writer.writerow({
                key: ('' if row.get(key) is None else repr(float(row[key])))
                for key in PLOT_CSV_HEADER
            })
    logger.info(f"Saved plot data: {path}")
    return path
