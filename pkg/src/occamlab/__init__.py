"""Sample-complexity bounds from conditional description length, with learners,
witness codecs and Occam constructions that can all be checked at desk scale."""

from .bounds import (
    INFINITY,
    BoundInputs,
    GeneralForm,
    PolynomialForm,
    bound_report,
    finite_class_bound,
    inverse_compression,
    kc_bound,
    length_based_bound,
    vc_lower_bound,
    vc_upper_bound,
)
from .coding import WitnessCode, decode
from .core import (
    DnfFormula,
    ExceptionWrapped,
    FiniteDistribution,
    LabeledSample,
    Monomial,
    Oracle,
    SuperstringRep,
    ThresholdCircuit,
    ThresholdGate,
)
from .errors import (
    CodecError,
    InfeasibleError,
    InputFormatError,
    NotRealizableError,
    OccamError,
    StageFailure,
)
from .kernels import BACKEND

__version__ = "0.1.0"
