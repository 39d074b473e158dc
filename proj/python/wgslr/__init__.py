"""Weight of evidence for SNP genotype comparisons with sample-specific genotyping error."""

import json

from . import _core
from ._core import (
    Case,
    DegenerateInputError,
    DomainError,
    GenotypePriors,
    NumericError,
    ParseError,
    ScaledBeta,
    WEstimate,
    WoEResult,
    compute_ece,
    estimate_w,
    hwe_priors,
    woe_integrate_mc,
    woe_integrate_quad,
    woe_known,
    woe_plugin,
    woe_profile,
)


def run_study(config):
    """Run a study from a config mapping (same schema as the CLI's JSON file).

    Returns one dict per record.
    """
    return _core._run_study_json(json.dumps(config))


__all__ = [
    "Case",
    "DegenerateInputError",
    "DomainError",
    "GenotypePriors",
    "NumericError",
    "ParseError",
    "ScaledBeta",
    "WEstimate",
    "WoEResult",
    "compute_ece",
    "estimate_w",
    "hwe_priors",
    "run_study",
    "woe_integrate_mc",
    "woe_integrate_quad",
    "woe_known",
    "woe_plugin",
    "woe_profile",
]
