"""Extractable work from correlated translationally invariant quantum states."""

from .errors import (
    ConfigurationError,
    CorrworkError,
    DomainError,
    InvalidArgument,
    InvalidState,
    PartitionStrategyError,
    PreconditionError,
    ResourceError,
)
from .spectra import FamilySpectrum, Partition, SingleSiteSystem, decompose_state, family_shape, make_partition
from .thermo import GibbsPoint, HamiltonianSpectrum, beta_from_entropy, c_max, gibbs_point, thermal_at_entropy

__version__ = "0.1.0"
