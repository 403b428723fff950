"""Exact computations with coderivation representations of Lie superalgebras
on their symmetric algebra, and the PBW symbol / symmetrization maps."""
from .coeff import QQ, ZZ, NotInvertible, Residue, Ring
from .envelope import PBW, EnvElement, symbol, symmetrize
from .series import (
    BiTruncSeries,
    CapMismatch,
    TruncSeries,
    bernoulli_numbers,
    defect_general,
    defect_rep,
    phi_0,
    phi_c,
    solve_rep,
    theta_c,
)
from .superlie import LieElement, LieMorphism, SuperLieAlgebra, free_nilpotent, heisenberg, sl2, super_example, validate
from .symcoalg import Coderivation, SymElement, coderivation, commutator_defect, generic_field, pairing_field

__version__ = "0.1.0"
