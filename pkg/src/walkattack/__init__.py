"""Random-walk and quantum-walk models of key-search attacks.

Submodules
----------
markov   absorbing uniform walks: hitting, absorption, limits, Monte Carlo
qwalk    discrete-time Hadamard walk on the line
grover   statevector Grover search
ciphers  16-bit toy ciphers
attack   planning and running walk/Grover key searches
cli      command-line front end
"""

from . import attack, ciphers, grover, markov, qwalk
from .errors import BudgetExceeded, InvalidArgument, MultiplicityError, NumericalFailure

__version__ = "0.1.0"

__all__ = [
    "attack",
    "ciphers",
    "grover",
    "markov",
    "qwalk",
    "BudgetExceeded",
    "InvalidArgument",
    "MultiplicityError",
    "NumericalFailure",
]
