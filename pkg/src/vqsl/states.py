"""Initial two-qutrit states and entanglement diagnostics.

Kets are written with level labels (0 = ground, 1 and 2 excited); see
:func:`vqsl.qmat.ket` for the mapping onto matrix indices.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _tolerances as tol
from . import qmat
from .exceptions import ParamOutOfRange


class WernerVariant(enum.Enum):
    PSI0 = "psi0"
    PSI1 = "psi1"
    PSI1_SWAPPED = "psi1-swapped"


class Region(enum.Enum):
    SEPARABLE = "Separable"
    FREE_ENTANGLED = "FreeEntangled"
    BOUND_ENTANGLED = "BoundEntangled"


@dataclass(frozen=True)
class EntanglementRegion:
    label: Region
    parameter: float


_PAIRS = {
    WernerVariant.PSI0: ((0, 0), (1, 1), (2, 2)),
    WernerVariant.PSI1: ((0, 1), (1, 2), (2, 0)),
    WernerVariant.PSI1_SWAPPED: ((1, 0), (2, 1), (0, 2)),
}


def maximally_entangled(variant=WernerVariant.PSI0):
    variant = WernerVariant(variant)
    return sum(qmat.ket(*pair) for pair in _PAIRS[variant]) / math.sqrt(3.0)


def _check_unit_interval(name, value, lo, hi):
    if not (math.isfinite(value) and lo <= value <= hi):
        raise ParamOutOfRange(f"{name} out of [{lo:g},{hi:g}]: {value!r}")


def werner(p, variant=WernerVariant.PSI0):
    """(1 - p) I/9 + p |psi><psi| for one of the three maximally entangled kets."""
    _check_unit_interval("p", p, 0.0, 1.0)
    psi = maximally_entangled(variant)
    return (1.0 - p) * np.eye(9, dtype=complex) / 9.0 + p * qmat.projector(psi)


def shift_unitary():
    """Local shift I (x) S.

    ``S`` maps |0> -> |2>, |1> -> |0>, |2> -> |1>, so that the adjoint
    ``I (x) S^dagger`` carries psi0 onto psi1 = (|01> + |12> + |20>)/sqrt(3).
    """
    s = np.zeros((3, 3), dtype=complex)
    for src, dst in ((0, 2), (1, 0), (2, 1)):
        s += np.outer(qmat.ket(dst), qmat.ket(src))
    return qmat.tensor(np.eye(3), s)


def _sigma(pairs):
    return sum(qmat.projector(qmat.ket(*pair)) for pair in pairs) / 3.0


def horodecki(alpha):
    """2/7 |psi0><psi0| + alpha/7 sigma_+ + (5 - alpha)/7 sigma_-, alpha in [0, 5]."""
    _check_unit_interval("alpha", alpha, 0.0, 5.0)
    sigma_plus = _sigma(((0, 1), (1, 2), (2, 0)))
    sigma_minus = _sigma(((1, 0), (2, 1), (0, 2)))
    psi0 = qmat.projector(maximally_entangled(WernerVariant.PSI0))
    return 2.0 / 7.0 * psi0 + alpha / 7.0 * sigma_plus + (5.0 - alpha) / 7.0 * sigma_minus


def swap_parties(rho):
    return qmat.swap_subsystems(rho)


def partial_transpose_spectrum(rho):
    return qmat.hermitian_eigenvalues(qmat.partial_transpose_second(rho))


def negativity(rho):
    """Sum of the magnitudes of the negative partial-transpose eigenvalues."""
    vals = partial_transpose_spectrum(rho)
    neg = vals[vals < -tol.PPT_ATOL]
    return float(-neg.sum()) if neg.size else 0.0


def is_ppt(rho, atol=tol.PPT_ATOL):
    return bool(partial_transpose_spectrum(rho)[0] >= -atol)


WERNER_FAMILIES = ("werner", "werner-psi0", "werner-psi1", "werner-psi1-swapped")


def classify_region(family, param):
    """Entanglement region of a Werner (p) or Horodecki (alpha) state.

    Bound-entangled intervals of the Horodecki family are taken from the
    known classification; PPT alone cannot certify them.
    """
    if family in WERNER_FAMILIES:
        _check_unit_interval("p", param, 0.0, 1.0)
        label = Region.SEPARABLE if param <= 0.25 else Region.FREE_ENTANGLED
    elif family == "horodecki":
        _check_unit_interval("alpha", param, 0.0, 5.0)
        if param < 1.0 or param > 4.0:
            label = Region.FREE_ENTANGLED
        elif 2.0 <= param <= 3.0:
            label = Region.SEPARABLE
        else:
            label = Region.BOUND_ENTANGLED
    else:
        raise ParamOutOfRange(f"unknown state family {family!r}")
    return EntanglementRegion(label, float(param))


def family_state(family, param):
    """Density matrix for a sweep family label and its parameter."""
    if family == "horodecki":
        return horodecki(param)
    variants = {
        "werner": WernerVariant.PSI0,
        "werner-psi0": WernerVariant.PSI0,
        "werner-psi1": WernerVariant.PSI1,
        "werner-psi1-swapped": WernerVariant.PSI1_SWAPPED,
    }
    if family not in variants:
        raise ParamOutOfRange(f"unknown state family {family!r}")
    return werner(param, variants[family])
