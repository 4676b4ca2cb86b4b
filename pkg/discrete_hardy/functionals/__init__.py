from . import create_kernel

from .energy_variant import EnergyVariant, as_variant
from .reductions import pairwise_sum, tree_sum, abs_pow, set_threads
from .weighted_lhs import weighted_lhs
from .local_energy import local_energy, edge_list
from .fractional_energy import fractional_energy
from .annuli_energy import annuli_energy
