"""Scalar function classes: series, measures, named families and sector sampling."""

from .measures import (DiscreteMeasure, HausdorffSpec, NPPlusRep, StieltjesTriple, cbf_deriv, cbf_eval,
                       cbf_to_hausdorff, hausdorff_coeffs, hausdorff_eval, hausdorff_one_minus,
                       hausdorff_tail, hausdorff_to_cbf, np_eval)
from .named import NamedFunction, named_coeffs, reference_angle, reference_table
from .sectors import SamplingConfig, SectorEstimate, disc_samples, min_covering_sector
from .series import (ConvexSeries, FunctionSpecError, SignedSeries, bold_h_deriv, bold_h_eval,
                     convex_eval, convex_one_minus)
from .spec import is_disc_function, spec_from_json

__all__ = [
    "DiscreteMeasure", "HausdorffSpec", "NPPlusRep", "StieltjesTriple", "cbf_deriv", "cbf_eval",
    "cbf_to_hausdorff", "hausdorff_coeffs", "hausdorff_eval", "hausdorff_one_minus", "hausdorff_tail",
    "hausdorff_to_cbf", "np_eval", "NamedFunction", "named_coeffs", "reference_angle", "reference_table",
    "SamplingConfig", "SectorEstimate", "disc_samples", "min_covering_sector", "ConvexSeries",
    "FunctionSpecError", "SignedSeries", "bold_h_deriv", "bold_h_eval", "convex_eval", "convex_one_minus",
    "is_disc_function", "spec_from_json",
]
