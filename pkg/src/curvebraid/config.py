"""Central tolerance / budget configuration.

All floating tolerances used across the pipeline live here so there is a
single tuning surface.  The defaults are what every acceptance run uses.
"""

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # root solving
    root_residual: float = 1e-10     # relative residual bound for accepted roots
    cluster: float = 1e-7            # roots closer than this form a multiple-root cluster
    max_iterations: int = 200        # Aberth iteration cap

    # geometry
    coincidence: float = 1e-6        # |Re w_i - Re w_j| below this counts as coinciding
    branch_dist: float = 1e-4        # minimum distance of paths/loops from branch points
    grid_step: float = 0.01          # B+ tracing grid step

    # tracking
    newton_max_iter: int = 12
    step_floor: float = 1e-9         # relative to path length; below this -> StepCollapse
    bisect_tol: float = 1e-9         # crossing-time bisection resolution

    # homomorphism counting
    hom_budget: int = 5_000_000      # backtracking node budget

    def with_overrides(self, **kw):
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


DEFAULT = Tolerances()


def thread_cap() -> int:
    """Parallelism cap for grid evaluation, from CURVEBRAID_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("CURVEBRAID_THREADS", "1")))
    except ValueError:
        return 1
