"""Exception types raised by the solver."""


class AdmissibilityError(ValueError):
    """A state has non-positive density or pressure.

    ``species`` names the offending fluid (``"ion"`` or ``"electron"``) and
    ``index`` is the flat position of the first bad entry in the batch, if
    known.
    """

    def __init__(self, message, species=None, index=None):
        super().__init__(message)
        self.species = species
        self.index = index


class StepFailure(RuntimeError):
    """A time step could not be completed (singular local solve or a stage
    produced an inadmissible state)."""

    def __init__(self, message, cell=None, time=None):
        super().__init__(message)
        self.cell = cell
        self.time = time
