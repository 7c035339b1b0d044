"""Exact terminality analysis for Brauer pairs on SNC coordinate charts."""

from .charts import (Chart, Monomial, Stratum, blow_up, multiplicity,
                     new_affine_model, strata)
from .discrepancy import (BoundaryDivisor, DiscrepancyReport, ReportEntry,
                          WitnessStep, b_from_a, boundary_divisor,
                          brauer_discrepancy, classical_discrepancy,
                          weighted_infimum)
from .model import (BlowUp, CoverDegree, DivisorRegistry, ExtraComponent,
                    IndeterminateDegreeError, Model)
from .modelfile import (LoadResult, ModelFormatError, ModelSpec, build_model,
                        format_model, load_model, parse_model, save_model)
from .resolution import (CompositionCheck, EnumerationResult, FixupResult,
                         NonterminationError, RemarkReport, ResolutionTree,
                         TerminalityCertificate, UnsupportedTorsionError,
                         certify, check_composition, enumerate_divisors,
                         find_bad_strata, level_one_fixup, remark_model,
                         run_remark)
from .symbols import (ComplexCheck, DivisorRecord, KummerClass, SymbolMatrix,
                      check_complex, cover_degree, ramifies_on, residue,
                      transform)

__version__ = "0.1.0"

__all__ = [
    "BlowUp",
    "BoundaryDivisor",
    "Chart",
    "ComplexCheck",
    "CompositionCheck",
    "CoverDegree",
    "DiscrepancyReport",
    "DivisorRecord",
    "DivisorRegistry",
    "EnumerationResult",
    "ExtraComponent",
    "FixupResult",
    "IndeterminateDegreeError",
    "KummerClass",
    "LoadResult",
    "Model",
    "ModelFormatError",
    "ModelSpec",
    "Monomial",
    "NonterminationError",
    "RemarkReport",
    "ReportEntry",
    "ResolutionTree",
    "Stratum",
    "SymbolMatrix",
    "TerminalityCertificate",
    "UnsupportedTorsionError",
    "WitnessStep",
    "b_from_a",
    "blow_up",
    "boundary_divisor",
    "brauer_discrepancy",
    "build_model",
    "certify",
    "check_complex",
    "check_composition",
    "classical_discrepancy",
    "cover_degree",
    "enumerate_divisors",
    "find_bad_strata",
    "format_model",
    "level_one_fixup",
    "load_model",
    "multiplicity",
    "new_affine_model",
    "parse_model",
    "ramifies_on",
    "remark_model",
    "residue",
    "run_remark",
    "save_model",
    "strata",
    "transform",
    "weighted_infimum",
]
