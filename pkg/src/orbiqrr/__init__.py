"""orbiqrr: exact computations in genus-zero twisted orbifold Gromov-Witten theory."""

__version__ = "0.1.0"
