class InvalidArgument(ValueError):
    """An argument violates an operation's precondition."""


class NonDiagonalState(ValueError):
    """A logical state has coherences between |alpha> and |-alpha>.

    Such states have no positive Gaussian-mixture Wigner representation
    in this model.
    """
