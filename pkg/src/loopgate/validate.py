"""Cross-tier physics validation scans.

Two numerical hygiene checks on the gate (the 4x4 object after cavity
projection, which is what the library delivers):

* how fast the strong-driving approximation becomes exact as the classical
  drive r0 grows, measured as gate infidelity between the rotating-frame
  tier and the strong-driving tier, and
* how quickly reported gate quantities converge as the Fock truncation is
  enlarged.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import StepTooCoarseError, TruncationGuardError
from .evolve import alpha_trajectory
from .fock import FockSpace
from .gate import GateReport, gate_fidelity, gate_matrix
from .model import PulseSpec

# keep >= ~60 samples per fast 2*r0 oscillation
_STEP_RESOLUTION_LIMIT = 0.1

_CONVERGENCE_THRESHOLD = 1e-8


@dataclass(frozen=True)
class ScanRow:
    parameter_value: float
    infidelity: float
    diagonality_residual: float
    phase_error: float


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[ScanRow, ...]
    monotone_flag: bool
    kind: str

    def as_dicts(self) -> list[dict]:
        return [
            {
                "parameter_value": row.parameter_value,
                "infidelity": row.infidelity,
                "diagonality_residual": row.diagonality_residual,
                "phase_error": row.phase_error,
            }
            for row in self.rows
        ]


def _wrapped_phase_distance(a: float, b: float) -> float:
    return abs(math.remainder(a - b, 2 * math.pi))


def rwa_error_scan(
    pulse: PulseSpec,
    r0_values: list[float],
    space: FockSpace,
    dt: float,
) -> ValidationReport:
    """Rotating-frame gate versus strong-driving gate across classical drive strengths.

    The strong-driving gate does not depend on r0 and is computed once.
    monotone_flag records whether infidelity never increases along the scan.
    """
    values = [float(v) for v in r0_values]
    if not values:
        raise ValueError("r0_values must be nonempty")
    if any(v <= 0 for v in values):
        raise ValueError("r0_values must be positive")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("r0_values must be strictly ascending")
    if dt * max(values) >= _STEP_RESOLUTION_LIMIT:
        raise StepTooCoarseError(
            f"dt * max(r0) = {dt * max(values):.3g} >= {_STEP_RESOLUTION_LIMIT}; "
            "the 2*r0 oscillation would be unresolved and the comparison meaningless"
        )
    reference = gate_matrix(pulse, space, method="numeric_rwa", dt=dt)
    rows = []
    for r0 in values:
        driven = replace(pulse, r0=r0)
        rotating = gate_matrix(driven, space, method="numeric_rotating", dt=dt)
        rows.append(
            ScanRow(
                parameter_value=r0,
                infidelity=1.0 - gate_fidelity(rotating.matrix, reference.matrix),
                diagonality_residual=rotating.diagonality_residual,
                phase_error=_wrapped_phase_distance(
                    rotating.extracted_gamma, reference.extracted_gamma
                ),
            )
        )
    monotone = all(b.infidelity <= a.infidelity for a, b in zip(rows, rows[1:]))
    return ValidationReport(rows=tuple(rows), monotone_flag=monotone, kind="rwa")


def truncation_scan(pulse: PulseSpec, dims: list[int], dt: float) -> ValidationReport:
    """Gate-fidelity drift between consecutive Fock truncations.

    Row i reports |fidelity(dim_i) - fidelity(dim_{i-1})| in the infidelity
    column (0 for the first row) plus each gate's diagonality residual and
    the phase drift from the previous dim. monotone_flag records whether the
    final drift is below the convergence threshold.
    """
    dims = [int(d) for d in dims]
    if not dims:
        raise ValueError("dims must be nonempty")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("dims must be strictly ascending")
    excursion = float(np.abs(alpha_trajectory(pulse, "++", 4001).alphas).max())
    floor = 4.0 * excursion**2
    if any(d < floor for d in dims):
        raise TruncationGuardError(
            f"every dim must be >= 4 * max|alpha|^2 = {floor:.3g}; got {dims}"
        )
    reports: list[GateReport] = [
        gate_matrix(pulse, FockSpace(d), method="numeric_rwa", dt=dt) for d in dims
    ]
    rows = []
    for i, (d, rep) in enumerate(zip(dims, reports)):
        if i == 0:
            drift, phase_drift = 0.0, 0.0
        else:
            drift = abs(rep.fidelity - reports[i - 1].fidelity)
            phase_drift = _wrapped_phase_distance(
                rep.extracted_gamma, reports[i - 1].extracted_gamma
            )
        rows.append(
            ScanRow(
                parameter_value=float(d),
                infidelity=drift,
                diagonality_residual=rep.diagonality_residual,
                phase_error=phase_drift,
            )
        )
    converged = len(rows) < 2 or rows[-1].infidelity < _CONVERGENCE_THRESHOLD
    return ValidationReport(rows=tuple(rows), monotone_flag=converged, kind="truncation")
