"""Bounded null controls for the wave equation with exponential memory kernels.

The toolkit synthesizes per-mode controls from characteristic-root moment
problems, assembles a certified sup bound for the distributed control, and
verifies every claim against an independent time-domain integration.
"""

__version__ = "0.1.0"

from .charroots import (
    CharacteristicRoots,
    characteristic_polynomial,
    find_roots,
    lprime,
    residue_identity,
    root_asymptotics,
)
from .kernel import (
    ExponentialKernel,
    kernel_derivative,
    kernel_value,
    khat_derivative,
    khat_zeros,
    laplace_khat,
)
from .moments import (
    ModalControl,
    MomentSystem,
    build_moment_system,
    cauchy_determinant,
    determinant_diagnostics,
    eval_modal_control,
    gram_entry,
    modal_integral,
    moment_residuals,
    solve_modal_moments,
)
from .simulate import (
    SimulationTrace,
    forced_response_series,
    free_response_series,
    invariant_drift,
    simulate_mode,
)
from .spectrum import (
    InitialData,
    ModeBasis,
    generate_initial_data,
    interval_basis,
    sobolev_norm_sq,
    tail_majorant,
)
from .synthesis import (
    ControlPlan,
    eval_control_field,
    find_time_for_bound,
    synthesize,
)
from .verify import VerificationReport, predicted_defect, verify_plan

__all__ = [
    "CharacteristicRoots",
    "ControlPlan",
    "ExponentialKernel",
    "InitialData",
    "ModalControl",
    "ModeBasis",
    "MomentSystem",
    "SimulationTrace",
    "VerificationReport",
    "build_moment_system",
    "cauchy_determinant",
    "characteristic_polynomial",
    "determinant_diagnostics",
    "eval_control_field",
    "eval_modal_control",
    "find_roots",
    "find_time_for_bound",
    "forced_response_series",
    "free_response_series",
    "generate_initial_data",
    "gram_entry",
    "interval_basis",
    "invariant_drift",
    "kernel_derivative",
    "kernel_value",
    "khat_derivative",
    "khat_zeros",
    "laplace_khat",
    "lprime",
    "modal_integral",
    "moment_residuals",
    "predicted_defect",
    "residue_identity",
    "root_asymptotics",
    "simulate_mode",
    "sobolev_norm_sq",
    "solve_modal_moments",
    "synthesize",
    "tail_majorant",
    "verify_plan",
]
