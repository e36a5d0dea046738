"""Maximum energy-concentration windows for overlap-add processing."""
from .exceptions import CalibrationError, InvalidArgumentError, SolverError
from .kernel import (
    ConcentrationKernel,
    ConcentrationReport,
    build_toeplitz,
    concentration_ratio,
    dpss_unconstrained,
)
from .optimizer import (
    ConstraintSet,
    SolveOptions,
    SolveTrace,
    design_low_overlap,
    design_ola_dpss,
    objective_and_gradient,
)
from .windows import (
    PbResidual,
    Window,
    bessel_i0,
    flat_extend,
    half_sine,
    kaiser,
    kbd,
    rectangular,
    validate_princen_bradley,
)

__version__ = "0.1.0"
