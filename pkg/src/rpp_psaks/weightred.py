"""Lossy weight reduction.

Weights are divided by a quantum ``q = eps * beta / N`` and floored.  If
every weight is at most ``beta`` and every feasible solution uses at most
``N`` edge copies, then the reduced weights are at most ``N / eps`` and an
``alpha``-approximate solution under the reduced weights costs at most
``alpha * OPT + eps * beta`` under the original ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import connected_components, imbalanced_vertices
from .metric import MetricRpp


class WeightReductionError(ValueError):
    pass


@dataclass(frozen=True)
class WeightReduction:
    q: Fraction
    reduced: tuple[int, ...]
    beta: int
    N: int
    eps: Fraction

    def bound(self) -> Fraction:
        return Fraction(self.N) / self.eps


def quantum(beta: int, N: int, eps) -> Fraction:
    eps = Fraction(eps)
    if eps <= 0:
        raise WeightReductionError("eps must be positive")
    if N < 1:
        raise WeightReductionError("N must be at least 1")
    if beta < 0:
        raise WeightReductionError("beta must be non-negative")
    if beta == 0:
        # all weights are zero; any positive quantum maps them to zero
        return Fraction(1)
    return eps * beta / N


def reduce_weights(weights, beta: int, N: int, eps) -> WeightReduction:
    """Floor every weight to a multiple of the quantum ``eps * beta / N``."""
    eps = Fraction(eps)
    q = quantum(beta, N, eps)
    ws = [int(w) for w in weights]
    for w in ws:
        if w < 0:
            raise WeightReductionError(f"negative weight {w}")
        if w > beta:
            raise WeightReductionError(f"weight {w} exceeds beta={beta}")
    reduced = tuple((w * q.denominator) // q.numerator for w in ws)
    return WeightReduction(q, reduced, int(beta), int(N), eps)


def psaks_weight_params(kernel: MetricRpp) -> tuple[int, int]:
    """``beta = w(R) + w(T)`` and ``N = |R| + b/2 + 2c - 2`` for a kernel."""
    from .solver import connecting_set

    _, b = imbalanced_vertices(kernel.required)
    _, c = connected_components(kernel.required)
    beta = kernel.required.total_weight + connecting_set(kernel).total_weight
    N = len(kernel.required) + b // 2 + 2 * c - 2
    return beta, max(N, 1)


def reduce_matrix(dist: np.ndarray, q: Fraction) -> np.ndarray:
    """Elementwise ``floor(dist / q)`` in exact integer arithmetic."""
    d = np.asarray(dist, dtype=object)
    out = np.array((d * q.denominator) // q.numerator, dtype=np.int64)
    out.setflags(write=False)
    return out
