__version__ = '0.0.1'

from . import functionals
from .errors import HardyError, ValidationError, RegimeError, CapacityError, NumericError
from .lattice import LatticePoint, Domain
from .lattice_function import LatticeFunction
from .constants import HardyParams, ConstantReport, theorem_constant
from . import paths
from . import testfns
from . import verify
from . import optimizer
