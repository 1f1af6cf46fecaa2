"""Exception hierarchy shared by all stages.

Every stage failure carries a machine-readable ``code`` so the CLI can
report which stage broke and map it to an exit code.
"""


class CurveBraidError(Exception):
    code = "error"


class InputError(CurveBraidError):
    code = "input-error"


class NumericalError(CurveBraidError):
    code = "numerical-error"


class NonConvergence(NumericalError):
    """Root iteration did not converge within the iteration cap."""

    code = "non-convergence"


class DegenerateLeadingCoeff(NumericalError):
    """Leading w-coefficient vanishes at this z; the fiber escapes to infinity."""

    code = "degenerate-leading-coeff"


class StepCollapse(NumericalError):
    """Continuation step shrank below the floor; path too close to a branch point."""

    code = "step-collapse"


class MatchingAmbiguity(NumericalError):
    """Two strands could not be told apart after a correction step."""

    code = "matching-ambiguity"


class TangentialCrossing(NumericalError):
    """Real parts touch without swapping: the path is not in generic position."""

    code = "tangential-crossing"


class NonSquarefree(InputError):
    """discriminant_w(f) vanishes identically: f has a repeated w-factor."""

    code = "non-squarefree"


class ResolutionFailure(NumericalError):
    """Arc chaining ambiguous at this grid step; refine the grid."""

    code = "resolution-failure"


class NonTransversal(NumericalError):
    """A loop or disc boundary meets an arc tangentially or hits a branch point."""

    code = "non-transversal"


class NonSimpleTerminal(InputError):
    """A branch point inside the disc is not a simple tangency."""

    code = "non-simple-terminal"


class NotAKnot(InputError):
    """Braid closure has more than one component."""

    code = "not-a-knot"


class BudgetExceeded(CurveBraidError):
    """Homomorphism search space exceeds the configured budget."""

    code = "budget-exceeded"


TooLarge = BudgetExceeded
