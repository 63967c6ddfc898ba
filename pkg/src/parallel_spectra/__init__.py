"""Hermitian and non-Hermitian lattice triples with a shared real spectrum.

The package builds ``{H, Hn, Hn^dagger}`` on tight-binding lattices, matches
their common real spectrum, certifies the superposition ``psi = phi + phi~``
state by state, and propagates all three with Dirac-norm bookkeeping.
"""

from .errors import *  # noqa: F401,F403
from .lattice import *  # noqa: F401,F403
from .spectral import *  # noqa: F401,F403
from .correspondence import *  # noqa: F401,F403
from .analytic import *  # noqa: F401,F403
from .dynamics import *  # noqa: F401,F403

__version__ = "0.1.0"
