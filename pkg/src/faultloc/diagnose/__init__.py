"""Localization strategies, validation, and reporting."""

from .instance import Instance
from .localize import (brute_force_diagnoses, failing_tests,
                       localize_bugassist, localize_cfaults, localize_sniper,
                       validate_diagnosis)
from .report import Diagnosis, DiagnosisReport, make_diagnosis

__all__ = [
    "Diagnosis",
    "DiagnosisReport",
    "Instance",
    "brute_force_diagnoses",
    "failing_tests",
    "localize_bugassist",
    "localize_cfaults",
    "localize_sniper",
    "make_diagnosis",
    "validate_diagnosis",
]
