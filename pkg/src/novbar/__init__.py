"""Exact non-Archimedean singular value decompositions and barcodes.

The usual entry points::

    from novbar import NovikovField, QQ, ValueGroup, elementary, barcodes
    F = NovikovField(QQ, ValueGroup.parse("discrete:1/2"))
    verbose, concise = barcodes(elementary(F, "0", "1", 0))

Submodules hold the rest: ``novbar.filtered`` for orthogonality tools,
``novbar.generators`` for seeded random families, ``novbar.acceptance`` for
the self-test battery run by ``novbar verify``.
"""
from .exactnum import GF, INF, NEG_INF, QQ, ConfigurationError, GroundField, QuadReal, ValueGroup
from .novikov import NovikovField, NovikovScalar, valuation
from .filtered import FilteredSpace, filtration_spectrum, gram_schmidt, is_orthogonal, level
from .svd import LinearMap, SvdResult, boundary_depths, check_svd, dual_svd, extend_svd, svd, torsion_exponents
from .complex import (
    FilteredChainMap,
    FloerComplex,
    ValidationError,
    coefficient_extension,
    direct_sum,
    dual_complex,
    elementary,
    mapping_cone,
    mapping_cylinder,
    validate,
)
from .barcode import Bar, Barcode, barcodes, classical_oracle, dualize_barcode, project_barcode, spectral_invariant
from .distance import bottleneck_all, bottleneck_degree
from .ingest import load_barcode, load_complex, rips_complex, save_barcode, save_complex
from .kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "GF", "INF", "NEG_INF", "QQ", "ConfigurationError", "GroundField", "QuadReal", "ValueGroup",
    "NovikovField", "NovikovScalar", "valuation",
    "FilteredSpace", "filtration_spectrum", "gram_schmidt", "is_orthogonal", "level",
    "LinearMap", "SvdResult", "boundary_depths", "check_svd", "dual_svd", "extend_svd", "svd",
    "torsion_exponents",
    "FilteredChainMap", "FloerComplex", "ValidationError", "coefficient_extension", "direct_sum",
    "dual_complex", "elementary", "mapping_cone", "mapping_cylinder", "validate",
    "Bar", "Barcode", "barcodes", "classical_oracle", "dualize_barcode", "project_barcode",
    "spectral_invariant",
    "bottleneck_all", "bottleneck_degree",
    "load_barcode", "load_complex", "rips_complex", "save_barcode", "save_complex",
    "KERNEL_BACKEND",
]
