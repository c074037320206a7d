"""Shilov boundaries for families of upper semi-continuous functions.

Exact computations on finite spaces, geometric face-set characterization
on convex polytopes in C^N, Levi-form analysis on smoothly bounded
domains, the supporting Wirtinger/regularized-maximum calculus, and a
box-counting dimension estimator for the resulting point clouds.
"""

from .boxdim import DimEstimate, box_count, box_dimension, product_dimension_check
from .cloud import PointCloud, cloud_from_csv, cloud_to_csv
from .errors import (
    ClassificationError, DomainError, EvaluationError, GluingError, InputError,
    NumericRankError, OracleViolation, ProfileError, SamplingError, ShilovError,
    UnderSampledError,
)
from .fields import FIELD_REGISTRY, ScalarField, complex_to_real, make_field, real_to_complex
from .finite import (
    BoundaryReport, Family, FiniteSpace, TabFunction, analyze, decreasing_limit_max,
    family_from_json, generates_topology, is_boundary, max_set, minimal_boundary,
    peak_points, shilov_boundary, union_shilov,
)
from .hessian import (
    HermitianSpectrum, bordered_matrix, complex_hessian, is_strictly_qpsh,
    qholo_rank, qpsh_index, wirtinger_gradients,
)
from .polytopes import (
    ExposureReport, Face, FaceLattice, Polytope, ShilovResult, build_polytope,
    classify_boundary_point, complex_dimension, face_lattice, foliation_planes,
    gamma_q, linear_exposure_oracle, nu_superlevel_is_open, polygon, product,
    regular_polygon, shilov_psh,
)
from .regmax import RegMaxParams, compose_reg_max, glue_peak, reg_max, reg_max_field
from .smooth import (
    DefiningDomain, FlaggedCloud, LeviReport, analyze_boundary, directed_hausdorff,
    foliation_direction, holomorphic_tangent_basis, levi_restricted, make_domain,
    sample_boundary, strict_q_set,
)

__version__ = "0.1.0"
