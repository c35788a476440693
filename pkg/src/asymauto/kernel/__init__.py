"""Kernels modulo asymptotic equality and closure operations."""

from .bases import base_closure
from .closure import FiniteMonoid, ap_restrict, coding, partial_sums, product
from .clustering import KernelAddress, cluster_kernel, kernel_element, pump_test, structure_extract
from .discrepancy import DISTINCT, EQUAL, INCONCLUSIVE, DiscrepancyReport, discrepancy_density, verdict_rule
from .exact import exact_kernel_dfao

__all__ = [
    "DISTINCT", "DiscrepancyReport", "EQUAL", "FiniteMonoid", "INCONCLUSIVE", "KernelAddress", "ap_restrict",
    "base_closure", "cluster_kernel", "coding", "discrepancy_density", "exact_kernel_dfao", "kernel_element",
    "partial_sums", "product", "pump_test", "structure_extract", "verdict_rule",
]
