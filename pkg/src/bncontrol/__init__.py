"""Source-target control of asynchronous Boolean networks.

Attractors and basins are computed on the explicit state space; one-step
controls (instantaneous, temporary, permanent) and attractor-based
sequential control paths (ASI, AST, ASP) are searched exhaustively within a
perturbation budget.
"""

from .dynamics import (
    Attractor,
    StateSet,
    StateSpaceTooLarge,
    attractors,
    reach,
    strong_basin,
    strong_basin_restricted,
    successors,
    weak_basin,
)
from .model import (
    BooleanNetwork,
    Control,
    ControlledNetwork,
    ParseError,
    apply_control,
    evaluate,
    flips_for,
    format_network,
    hamming,
    parse_network,
    restrict,
    state_from_string,
    state_to_string,
)
from .onestep import (
    ControlQuery,
    ControlSolution,
    Mode,
    is_valid_instantaneous,
    is_valid_permanent,
    is_valid_temporary,
    minimal_controls,
    minimal_oi,
    minimal_op,
    minimal_ot,
)
from .sequential import (
    ControlPath,
    SeqMode,
    SequentialQuery,
    comp_seq_inst,
    comp_seq_perm,
    comp_seq_temp,
    default_budget,
    perm_control_validation,
    sequential_paths,
    shortest,
)

__version__ = "0.1.0"
