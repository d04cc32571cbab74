"""Simulation of spatiotemporally modulated delay-filter circulators.

Modules:

* :mod:`circsim.spectra` - closed-form sideband spectra of switched paths
* :mod:`circsim.touchstone` - Touchstone v1 two-port I/O and group delay
* :mod:`circsim.filters` - brick-wall, parametric and tabulated filters
* :mod:`circsim.network` - topologies and the periodically switched solvers
* :mod:`circsim.timedomain` - sampled time-domain oracle
* :mod:`circsim.metrics` - IL, isolation, bandwidth, IMP and dispersion
* :mod:`circsim.cli` - command-line front end
"""

from .errors import (CircsimError, ConfigError, ConvergenceError, DegenerateError, GridError,
                     MismatchError, NotFoundError, ParseError, RangeError, RegimeError,
                     SingularError, UnknownParamError)
from .filters import BrickWall, Parametric, Tabulated
from .network import HarmonicSMatrix, Topology, differential, quad, single_path, solve, sweep
from .spectra import ClockSpec, HarmonicSpectrum, PathConfig
from .touchstone import NetworkData

__version__ = "0.1.0"

__all__ = [
    "BrickWall", "CircsimError", "ClockSpec", "ConfigError", "ConvergenceError",
    "DegenerateError", "GridError", "HarmonicSMatrix", "HarmonicSpectrum", "MismatchError",
    "NetworkData", "NotFoundError", "Parametric", "ParseError", "PathConfig", "RangeError",
    "RegimeError", "SingularError", "Tabulated", "Topology", "UnknownParamError",
    "differential", "quad", "single_path", "solve", "sweep",
]
