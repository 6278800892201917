"""Exception hierarchy shared by every occamlab module.

The CLI maps each family to an exit code, so raise the most specific class.
"""


class OccamError(Exception):
    """Base class for all library errors."""


class InputFormatError(OccamError, ValueError):
    """Malformed input: wrong alphabet, bad length, unparsable file."""


class AlphabetError(InputFormatError):
    pass


class LengthError(InputFormatError):
    pass


class CodecError(InputFormatError):
    """Malformed witness bits or conditioning that does not match the encoder's."""


class InfeasibleError(OccamError):
    """Enumeration budget exceeded, no finite bound, or no intersection found."""


class NotRealizableError(OccamError):
    """The sample is not consistent with any hypothesis in the searched class."""


class StageFailure(OccamError):
    """A learner inside a reduction missed its error guarantee.

    This is the probabilistic gamma event of the construction, not a bug.
    """

    def __init__(self, stage, message):
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage
