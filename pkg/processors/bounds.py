"""
Correct-Probability Bounds
Set masses behind the guessing lemma, the spectrum bound on P_c, the
mutual-information bound and its (1 + nu) relaxation, nu optimization and
the term-by-term proof chain.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .dist_core import (
    DENSITY_TOL,
    JointDist,
    conditional_x_given_s,
    mutual_information,
    p_max,
    positive_density_mean,
    relative_ic_spectrum_mass,
    self_information_tail_mass,
)
from .encoders import (
    Encoder,
    Estimator,
    correct_mask,
    eval_case1,
    induced_joint_xs,
    map_estimator_case2,
    _check_case1_dims,
)
from .errors import DegenerateDistribution, NuOutOfRange, VerificationViolation

logger = logging.getLogger(__name__)


NU_EPS = 1e-9
NU_XATOL = 1e-10
GRID_POINTS = 1000
CHECK_TOL = 1e-9
DEFAULT_ETA_GRID = (0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class SetMasses:
    """Masses of D (high-posterior pairs), E (correct decisions) and D^c n E"""
    mass_D: float
    mass_E: float
    mass_Dc_and_E: float
    eta: float


@dataclass
class BoundReport:
    """Evaluated bounds for one encoder phi_y at one nu"""
    nu: float
    eta: float
    p_max: float
    mi_bits: float
    prop1_rhs: Optional[float]
    thm1_bound: float
    cor_bound: Optional[float]
    tail_bound: Optional[float] = None
    exact_pc: Optional[float] = None
    slack: Optional[float] = None
    degenerate_flag: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Prop1Check:
    eta: float
    lhs: float
    rhs: float
    ok: bool


@dataclass
class ProofChain:
    """Named terms of the chain that turns the spectrum bound into the MI bound"""
    self_info_tail: float
    spectrum_tail: float
    markov_term: float
    two_pow_neg_eta: float
    chain_sum: float
    prop1_rhs: float
    exact_pc: float
    positive_density_mean: float
    checks: Dict[str, bool] = field(default_factory=dict)


# ===== Helpers =====

def log_inv_p_max(j: JointDist) -> float:
    """Upper end of the nu interval, log2(1/p_max)"""
    return -math.log2(p_max(j))


def is_degenerate(j: JointDist) -> bool:
    return p_max(j) >= 1.0


def _high_posterior(xs: JointDist, m_size: int, eta: float) -> np.ndarray:
    """|X| x |S| mask of pairs with p_{X|S}(x|s) >= (1/|M|) 2^-eta on positive-mass s"""
    cond = conditional_x_given_s(xs)
    threshold = 2.0 ** (-eta) / m_size
    rows = np.nan_to_num(cond.rows, nan=-np.inf)
    return (rows >= threshold).T


# ===== Set masses and the spectrum bound =====

def set_masses(j: JointDist, phi_x: Encoder, phi_y: Encoder, psi: Estimator, eta: float) -> SetMasses:
    """
    Exact masses of D, E and D^c n E by summation over all (x, y), s = phi_y(y).

    D uses |M| = phi_x.range_size.
    """
    if eta <= 0:
        raise ValueError(f"eta must be > 0, got {eta!r}")
    _check_case1_dims(j, phi_x, phi_y, psi)

    xs = induced_joint_xs(j, phi_y)
    in_d = _high_posterior(xs, phi_x.range_size, eta)[:, phi_y.as_array()]
    in_e = correct_mask(j, phi_x, phi_y, psi)

    return SetMasses(
        mass_D=float(j.p[in_d].sum()),
        mass_E=float(j.p[in_e].sum()),
        mass_Dc_and_E=float(j.p[~in_d & in_e].sum()),
        eta=eta,
    )


def prop1_rhs(j: JointDist, phi_y: Encoder, m_size: int, eta: float) -> float:
    """
    p_SX{ log|M| >= log(1/p_{X|S}(X|S)) - eta } + 2^-eta.

    May exceed 1 (vacuous but valid).
    """
    if eta <= 0:
        raise ValueError(f"eta must be > 0, got {eta!r}")
    xs = induced_joint_xs(j, phi_y)
    in_d = _high_posterior(xs, m_size, eta) & (xs.p > 0)
    return float(xs.p[in_d].sum()) + 2.0 ** (-eta)


def verify_prop1(
    j: JointDist,
    phi_x: Encoder,
    phi_y: Encoder,
    psi: Estimator,
    eta_grid: Sequence[float] = DEFAULT_ETA_GRID
) -> List[Prop1Check]:
    """P_c(phi_x, phi_y, psi) against the spectrum bound at each eta, with |M| from phi_x"""
    lhs = eval_case1(j, phi_x, phi_y, psi).p_correct
    checks = []
    for eta in eta_grid:
        if eta <= 0:
            raise ValueError(f"eta grid must be positive, got {eta!r}")
        rhs = prop1_rhs(j, phi_y, phi_x.range_size, eta)
        checks.append(Prop1Check(eta=eta, lhs=lhs, rhs=rhs, ok=lhs <= rhs + CHECK_TOL))
    return checks


def prop1_max_rhs(j: JointDist, phi_y: Encoder, m_size: int, eta: float, p1_max: float) -> Prop1Check:
    """
    Case-1 optimum against the spectrum bound evaluated at one given phi_y.

    The bound's right side depends on phi_y; the result is reported for the
    phi_y passed in and is not asserted.
    """
    rhs = prop1_rhs(j, phi_y, m_size, eta)
    return Prop1Check(eta=eta, lhs=p1_max, rhs=rhs, ok=p1_max <= rhs + CHECK_TOL)


# ===== MI bounds =====

def _degenerate_report(j: JointDist, phi_y: Encoder, nu: float, strict: bool) -> BoundReport:
    report = BoundReport(
        nu=nu, eta=0.0, p_max=1.0,
        mi_bits=mutual_information(induced_joint_xs(j, phi_y)).bits,
        prop1_rhs=None, thm1_bound=1.0, cor_bound=1.0,
        exact_pc=1.0, slack=0.0, degenerate_flag=True,
    )
    if strict:
        raise DegenerateDistribution("p_max = 1: the nu interval is empty", report=report)
    logger.debug("Degenerate distribution (p_max = 1); reporting bound 1")
    return report


def _evaluate(j: JointDist, phi_y: Encoder, nu: float, with_exact: bool = True) -> BoundReport:
    xs = induced_joint_xs(j, phi_y)
    pm = p_max(j)
    upper = -math.log2(pm)
    mi = mutual_information(xs).bits
    eta = upper - nu

    thm1 = 2.0 ** nu * pm + mi / nu
    cor = (1.0 + nu) * pm + mi / nu if nu < min(1.0, upper) else None
    tail = 2.0 ** nu * pm + relative_ic_spectrum_mass(xs, nu)
    exact_pc = map_estimator_case2(xs)[1].p_correct if with_exact else None

    return BoundReport(
        nu=nu,
        eta=eta,
        p_max=pm,
        mi_bits=mi,
        prop1_rhs=prop1_rhs(j, phi_y, 1, eta) if eta > 0 else None,
        thm1_bound=thm1,
        cor_bound=cor,
        tail_bound=tail,
        exact_pc=exact_pc,
        slack=thm1 - exact_pc if exact_pc is not None else None,
    )


def thm1_bound(j: JointDist, phi_y: Encoder, nu: float, strict: bool = False) -> BoundReport:
    """
    2^nu p_max + I(X; phi_y(Y)) / nu for nu in (0, log2(1/p_max)).

    eta = log2(1/p_max) - nu is recorded. With p_max = 1 a flagged report
    with bound 1 is returned (strict=True raises DegenerateDistribution).

    Raises:
        NuOutOfRange: nu outside the open interval
    """
    if is_degenerate(j):
        return _degenerate_report(j, phi_y, nu, strict)
    upper = log_inv_p_max(j)
    if not 0 < nu < upper:
        raise NuOutOfRange(nu, upper)
    return _evaluate(j, phi_y, nu)


def cor_bound(j: JointDist, phi_y: Encoder, nu: float, strict: bool = False) -> BoundReport:
    """(1 + nu) p_max + I / nu for nu in (0, min{1, log2(1/p_max)})"""
    if is_degenerate(j):
        return _degenerate_report(j, phi_y, nu, strict)
    upper = min(1.0, log_inv_p_max(j))
    if not 0 < nu < upper:
        raise NuOutOfRange(nu, upper)
    return _evaluate(j, phi_y, nu)


def tail_bound(j: JointDist, phi_y: Encoder, nu: float) -> float:
    """2^nu p_max + p_SX{d >= nu}: the spectrum bound at eta = log2(1/p_max) - nu before Markov"""
    upper = log_inv_p_max(j)
    if not 0 < nu < upper:
        raise NuOutOfRange(nu, upper)
    xs = induced_joint_xs(j, phi_y)
    return 2.0 ** nu * p_max(j) + relative_ic_spectrum_mass(xs, nu)


def thm1_objective(pm: float, mi_bits: float):
    """f(nu) = 2^nu p_max + I / nu"""
    return lambda nu: 2.0 ** nu * pm + mi_bits / nu


def nu_interval(j: JointDist) -> tuple:
    """Clamped interval [eps, log2(1/p_max) - eps]; collapses to the midpoint when too narrow"""
    upper = log_inv_p_max(j)
    lo, hi = NU_EPS, upper - NU_EPS
    if hi <= lo:
        return upper / 2, upper / 2
    return lo, hi


def optimize_nu(j: JointDist, phi_y: Encoder, strict: bool = False) -> BoundReport:
    """
    Tightest MI bound over nu.

    f is strictly convex for I > 0, so bounded Brent (golden section with
    parabolic steps) to xatol 1e-10 finds the minimum; the result is then
    compared against a 1000-point grid and the smaller of the two is kept.
    For I = 0 the infimum sits at the left end and nu = eps is returned.
    """
    if is_degenerate(j):
        return _degenerate_report(j, phi_y, NU_EPS, strict)

    lo, hi = nu_interval(j)
    mi = mutual_information(induced_joint_xs(j, phi_y)).bits
    f = thm1_objective(p_max(j), mi)

    if mi <= 0.0 or lo == hi:
        return _evaluate(j, phi_y, lo)

    result = minimize_scalar(f, bounds=(lo, hi), method='bounded', options={'xatol': NU_XATOL})
    best_nu = float(result.x)

    grid = np.linspace(lo, hi, GRID_POINTS)
    values = f(grid)
    i = int(np.argmin(values))
    if values[i] < f(best_nu):
        logger.debug(f"Grid point nu={grid[i]:.6g} beat line search nu={best_nu:.6g}")
        best_nu = float(grid[i])
    return _evaluate(j, phi_y, best_nu)


def nu_grid(j: JointDist, points: int = 100) -> np.ndarray:
    """Log-spaced nu values inside the clamped open interval"""
    lo, hi = nu_interval(j)
    if lo == hi:
        return np.array([lo])
    start = max(lo, hi * 1e-4)
    return np.geomspace(start, hi, points)


def bound_sweep(j: JointDist, phi_y: Encoder, nu_values: Sequence[float]) -> List[BoundReport]:
    """Evaluate the MI bounds at each nu; degenerate instances give flagged rows"""
    if is_degenerate(j):
        return [_degenerate_report(j, phi_y, float(nu), strict=False) for nu in nu_values]
    return [_evaluate(j, phi_y, float(nu)) for nu in nu_values]


# ===== Proof chain =====

def proof_chain_terms(j: JointDist, phi_y: Encoder, eta: float, nu: float) -> ProofChain:
    """
    Evaluate every term of the chain

        P_c <= spectrum bound (|M| = 1)
            <= p_X{log 1/p_X < eta + nu} + p{d >= nu} + 2^-eta
            <= p_X{log 1/p_X < eta + nu} + I/nu + 2^-eta

    Valid steps are asserted. The last step uses Markov's inequality on the
    information density, which can be negative, so only the positive-part
    version p{d >= nu} <= E[max(d,0)]/nu is asserted; the I/nu comparison is
    recorded in checks['markov_step_holds'].

    Raises:
        VerificationViolation: a valid step failed
    """
    if eta <= 0 or nu <= 0:
        raise ValueError(f"eta and nu must be > 0, got eta={eta!r}, nu={nu!r}")

    xs = induced_joint_xs(j, phi_y)
    mi = mutual_information(xs).bits
    self_tail = self_information_tail_mass(j, eta + nu)
    spectrum = relative_ic_spectrum_mass(xs, nu)
    markov = mi / nu
    two_eta = 2.0 ** (-eta)
    rhs = prop1_rhs(j, phi_y, 1, eta)
    exact_pc = map_estimator_case2(xs)[1].p_correct
    positive_mean = positive_density_mean(xs)

    chain = ProofChain(
        self_info_tail=self_tail,
        spectrum_tail=spectrum,
        markov_term=markov,
        two_pow_neg_eta=two_eta,
        chain_sum=self_tail + markov + two_eta,
        prop1_rhs=rhs,
        exact_pc=exact_pc,
        positive_density_mean=positive_mean,
    )

    chain.checks['spectrum_bound'] = exact_pc <= rhs + CHECK_TOL
    chain.checks['split'] = rhs <= self_tail + spectrum + two_eta + CHECK_TOL
    chain.checks['markov_positive_part'] = spectrum <= positive_mean / nu + CHECK_TOL
    chain.checks['markov_step_holds'] = spectrum <= markov + CHECK_TOL

    upper = log_inv_p_max(j)
    if abs(eta + nu - upper) <= DENSITY_TOL:
        chain.checks['vanishing_tail'] = (
            self_tail == 0.0 and abs(two_eta - 2.0 ** nu * p_max(j)) <= DENSITY_TOL
        )

    failed = [name for name, ok in chain.checks.items() if not ok and name != 'markov_step_holds']
    if failed:
        raise VerificationViolation(f"Proof chain steps failed: {', '.join(failed)} ({chain})")
    return chain
