"""Exception types shared across the package."""


class CubikError(Exception):
    """Base class for all cubik errors."""


class InputFormatError(CubikError):
    """Malformed or non-canonical input file / CLI argument (exit code 2)."""


class BudgetExceededError(CubikError):
    """An internal search or solver budget was exhausted (exit code 3)."""


# -- complex construction ----------------------------------------------------

class NotAHypercubeError(CubikError):
    """A corner array does not describe an induced combinatorial hypercube."""


class BadGluingError(CubikError):
    """Two cubes intersect in something that is not a common face."""


class DanglingVertexError(CubikError):
    """A declared vertex appears in no cube."""


class OutOfRangeError(CubikError):
    """A local coordinate lies outside [0, 1]."""


class DimensionTooLargeError(CubikError):
    """Cube dimension exceeds the supported maximum (16)."""


# -- graphs and median machinery ---------------------------------------------

class UnknownVertexError(CubikError):
    """Vertex id not present in the graph."""


class GraphNotConnectedError(CubikError):
    """Operation requires a connected graph."""


class DisconnectedSetError(CubikError):
    """A vertex set that must induce a connected subgraph does not."""


class NotMedianError(CubikError):
    """Operation requires a median graph."""


class NotConvexError(CubikError):
    """Target vertex set is not convex."""


class NotCat0Error(CubikError):
    """Operation requires a CAT(0) complex."""


# -- hyperplanes / collapse ---------------------------------------------------

class NotTwoComponentsError(CubikError):
    """Removing a hyperplane's dual edges did not leave exactly two components."""


class TooLargeError(BudgetExceededError):
    """Exact search (e.g. chromatic number) exceeded its node budget."""


class NotExtremalError(CubikError):
    """Hyperplane does not bound an inclusion-minimal halfspace."""


class NotDisjointError(CubikError):
    """Hyperplanes (or their removed halfspaces) are not pairwise disjoint."""


class NotACuboidError(CubikError):
    """Vertex set fails the cuboid condition against some cube."""

    def __init__(self, message, cube=None):
        super().__init__(message)
        self.cube = cube


class OverlapError(CubikError):
    """Cuboids passed to an expansion step are not pairwise disjoint."""


class NotCollapsibleError(CubikError):
    """No usable decomposition was supplied or could be verified."""


# -- metric -------------------------------------------------------------------

class BrokenStringError(CubikError):
    """Consecutive string points do not share the stated carrier cube."""


class UnreachableError(CubikError):
    """The two points lie in different connected components."""


class BadParamsError(CubikError):
    """Invalid generator parameters."""
