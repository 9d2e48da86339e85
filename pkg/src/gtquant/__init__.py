"""Group-theoretic quantization of the plane and the punctured plane, with numerical checks.

Modules:

``algebra``     group law, Lie bracket and exponential of R^2 x| (SO(2) x R+),
                its universal cover, and the Heisenberg group of the plane
``phasespace``  group action, fundamental and Hamiltonian fields, momentum map
``hilbert``     log-polar and box grids, wavefunctions, band-limited test states
``operators``   the unitary representations and their generators
``verify``      property suites with recorded residuals
``cli``         ``python3 -m gtquant verify | spectrum | info``
"""

from . import algebra, hilbert, operators, phasespace, verify
from .algebra import AlgebraElement, GroupElement, Variant, bracket, exp, product
from .hilbert import GridSpec, Wavefunction
from .operators import RepConfig, ShiftMode
from .phasespace import PhasePoint
from .verify import SuiteConfig, run_all

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "GridSpec",
    "GroupElement",
    "PhasePoint",
    "RepConfig",
    "ShiftMode",
    "SuiteConfig",
    "Variant",
    "Wavefunction",
    "algebra",
    "bracket",
    "exp",
    "hilbert",
    "operators",
    "phasespace",
    "product",
    "run_all",
    "verify",
]
