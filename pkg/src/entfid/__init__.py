"""Two-qubit entanglement measures: concurrence, fully entangled fraction,
negativity and the maximal fidelity achievable by LOCC."""

from .channels import (
    FilterProtocolResult,
    KrausChannel,
    amplitude_damping,
    apply_channel,
    evolve_with_control,
    run_filter_protocol,
    verstraete_filter,
)
from .maf import SdpSolution, SolverConfig, maf_closed_damped, maf_closed_x_state, maf_sdp, maf_sdp_batch
from .measures import concurrence, fef, fef_bruteforce, measure_report, negativity, singlet_fraction
from .states import (
    BlochForm,
    bell_state,
    bloch_compose,
    bloch_decompose,
    damped_state,
    evolved_state,
    random_state,
    x_state,
)

__version__ = "0.1.0"
