"""Exception types shared across the package."""


class QuadlabError(Exception):
    """Base class for all quadlab errors."""


# --- combinatorial map construction -------------------------------------

class NotInvolution(QuadlabError):
    """`opposite` is not a fixed-point-free involution."""


class NotPermutation(QuadlabError):
    """A table meant to be a permutation has duplicate or out-of-range ids."""


class Disconnected(QuadlabError):
    """The two permutations do not act transitively on the half-edges."""


class RootOutOfRange(QuadlabError):
    """Root half-edge id outside [0, half_edge_count)."""


class NotQuadrangulation(QuadlabError):
    """Map violates a quadrangulation invariant (face degrees, Euler, parity)."""


class NotPointed(QuadlabError):
    """Pointed vertex missing or inconsistent with the root edge origin."""


class MalformedInput(QuadlabError):
    """Unparseable serialized document; `position` locates the defect."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None
                         else f"{message} (position {position})")
        self.position = position


# --- trees ----------------------------------------------------------------

class EmptyTree(QuadlabError):
    """Requested a tree with zero edges."""


class SizeTooLarge(QuadlabError):
    """Input size exceeds a guard built into the operation."""


# --- metric ---------------------------------------------------------------

class IndexOutOfRange(QuadlabError):
    """Contour or vertex index outside its valid range."""


# --- surface --------------------------------------------------------------

class ResolutionZero(QuadlabError):
    """Mesh resolution must be a positive integer."""


# --- gh ---------------------------------------------------------------------

class NotCovering(QuadlabError):
    """Relation fails to cover one of the two point sets."""


# --- regularity -------------------------------------------------------------

class BudgetExceeded(QuadlabError):
    """Cycle enumeration would exceed its combinatorial work budget."""


class NotSimple(QuadlabError):
    """Cycle has a repeated vertex or repeated edge."""


class SplitFailed(QuadlabError):
    """Cutting along a cycle did not give exactly two dual components."""


# --- experiments --------------------------------------------------------------

class DegenerateFit(QuadlabError):
    """Not enough distinct sizes, or degenerate data, for a log-log fit."""


class MalformedCSV(QuadlabError):
    """CSV input empty or not matching the documented schema."""


class NoValidPair(QuadlabError):
    """No admissible ancestor/descendant contour pair in this sample."""


# --- internal consistency ------------------------------------------------------

class InvariantViolation(QuadlabError):
    """An internal invariant failed; indicates a bug, not bad input."""
