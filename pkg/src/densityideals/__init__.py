"""Exact computations with density ideals on the natural numbers.

Sets, weights and measure sequences are lazily generated and evaluated with
integer and ``Fraction`` arithmetic, so block boundaries at factorial scale
cost nothing until a query reaches them.
"""

from .errors import (CertificationError, ClassificationError, ConsistencyError, DegenerateInputError,
                     DensityIdealError, MissingCertificateWarning, PreconditionError, ScanBoundError,
                     SynthesisError, ValidationError)
from .sets import *  # noqa: F401,F403
from .weights import *  # noqa: F401,F403
from .measures import *  # noqa: F401,F403
from .indexmaps import *  # noqa: F401,F403
from .constructions import *  # noqa: F401,F403
from .probes import *  # noqa: F401,F403
from .gallery import *  # noqa: F401,F403
from . import descriptors

__version__ = "0.1.0"
