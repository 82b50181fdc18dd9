"""Forward kinematics of the general Stewart-Gough platform."""

from ._sgpfk import (
    DegenerateInstanceError,
    Error,
    InputError,
    SingularParametrizationError,
    Solution,
    SolverFailureError,
    StructureError,
    cayley_rotation,
    forward_kinematics,
    generate_instance,
    inverse_cayley,
    leg_lengths,
    structure_info,
)

__all__ = [
    "DegenerateInstanceError",
    "Error",
    "InputError",
    "SingularParametrizationError",
    "Solution",
    "SolverFailureError",
    "StructureError",
    "cayley_rotation",
    "forward_kinematics",
    "generate_instance",
    "inverse_cayley",
    "leg_lengths",
    "real_poses",
    "structure_info",
]


def real_poses(solution):
    """Real roots of a Solution as a list of (p, t) pairs of real 3-vectors."""
    return [
        (solution.p[k].real.copy(), solution.t[k].real.copy())
        for k in range(len(solution))
        if solution.real[k]
    ]
