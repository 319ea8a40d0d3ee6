"""Exact construction and verification of generalized twisted affine algebras."""

from .scalars import Scalar, ONE, ZERO, zeta, qvar, parse_scalar, format_scalar
from .groups import AbelianGroup, Character, Subgroup
from .lie import FinitePresentation, OrbitPresentation, check_axioms
from .affine import AffineElement, TwistedAffine, UntwistedAffine
from .algebras import (corrupted_sl2, gl_torus, gl_zk, gN_permutation, heisenberg, heisenberg1,
                       sl2_chevalley, sl3_diagonal, slN_shift)
from .vacuum import VacuumModule, build_basis
from .fields import (detect_gamma_locality, field_of, generator_field, permutation_field,
                     yE_product)
from .conformal import LoopAlgebra, TwistedLoop, affine_conformal_data, virasoro
from .config import ConfigError, parse_config, load_config
from .examples import list_examples, load_example

__version__ = "0.1.0"
