"""Walsh-Fourier linear systems and exact non-existence certificates for
circulant Hadamard matrices."""

from ._config import CONVENTION, CapExceeded
from .linalg import RankResult, SparseMatrix, kernel_basis, rank, solve_left
from .oracle import (SearchReport, brute_force_generators, circulant_matrix, is_circulant_hadamard,
                     periodic_autocorrelation, s_value, turyn_admissible)
from .symmetry import (OrbitTable, ReducedSystem, SymmetryGroup, apply_index_map, build_orbit_table,
                       d_class, reduce_system)
from .system import EquationRow, MtilingSystem, build_row, build_system, convolve, s_coefficients
from .walsh import (GroupElement, SignVector, WalshPolynomial, basis_element, evaluate_character,
                    matrix_fourier, walsh_transform, weight)
from .witness import (TridiagonalSystem, VerificationReport, WitnessCertificate, build_tridiagonal,
                      find_witness, symmetric_witness, tridiagonal_rank, verify_certificate)

__version__ = "0.1.0"
