"""Exception hierarchy.

The CLI maps the three families onto exit codes: invalid input (1),
geometric infeasibility (2), numerical non-convergence (3).
"""


class SasakitError(Exception):
    pass


# --- invalid input -----------------------------------------------------------

class InvalidDiagram(SasakitError, ValueError):
    """The toric diagram document or its normals are unusable."""


class MalformedInput(InvalidDiagram):
    pass


class NonPrimitiveNormal(InvalidDiagram):
    """``index`` is 0-based; messages and ``row`` count rows from 1."""

    def __init__(self, index: int, normal, divisor: int):
        self.index, self.row = index, index + 1
        self.normal, self.divisor = tuple(normal), divisor
        super().__init__(f"normal at row {self.row} {list(normal)} is not primitive (gcd {divisor})")


class NotPointed(InvalidDiagram):
    """The moment cone contains a line."""


class RankDeficient(NotPointed):
    """Normals do not span R^n; equivalently the cone contains a line."""


class EmptyInterior(InvalidDiagram):
    pass


class RedundantNormal(InvalidDiagram):
    """A normal does not define a facet of the cone."""


# --- geometric infeasibility ---------------------------------------------------

class GammaInconsistent(SasakitError):
    """No gamma with <lambda_j, gamma> = -1 for every j."""


class InfeasibleReeb(SasakitError, ValueError):
    pass


class NotOnSlice(InfeasibleReeb):
    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"<gamma, xi> + (m+1) = {residual} (not on the Reeb slice)")


class NotInterior(InfeasibleReeb):
    def __init__(self, ray_index: int, ray, pairing, message=None):
        self.ray_index, self.ray, self.pairing = ray_index, tuple(ray), pairing
        super().__init__(
            message or f"<xi, r_{ray_index}> = {pairing} <= 0 for ray {list(ray)}; "
            "xi is not in the interior of the dual cone"
        )


class InconsistentInputs(SasakitError, ValueError):
    pass


# --- polytopes ---------------------------------------------------------------

class PolytopeError(SasakitError, ValueError):
    pass


class Unbounded(PolytopeError):
    pass


class LowerDimensional(PolytopeError):
    pass


# --- numerics ----------------------------------------------------------------

class NumericalError(SasakitError, ArithmeticError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class MaxIterations(NumericalError):
    """Iteration budget exhausted; ``result`` carries the best iterate."""

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)
