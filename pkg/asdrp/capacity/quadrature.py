#############################################################################
# quadrature.py
#
# composite Gauss-Legendre rules for expectations under a uniform law,
# used for the log-uniform input magnitudes
#
# Sat Oct 17 2026
#############################################################################

import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.special import roots_legendre

from asdrp.errors import QuadratureError

logger = logging.getLogger(__name__)

BASE_NODES = 64
MAX_NODES = 1024
PANEL_WIDTH = 4.0
NORMALISATION_TOL = 1e-10
CONVERGENCE_TOL = 1e-8


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and probability weights (summing to 1) for E[f(U)], U ~ Uniform[a, b]."""
    nodes: np.ndarray
    weights: np.ndarray

    def expect(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def uniform_rule(a: float, b: float, n_nodes: int = BASE_NODES) -> QuadratureRule:
    """
    `n_nodes` Gauss-Legendre points on each panel of width <= PANEL_WIDTH
    covering [a, b]. Raises QuadratureError if the weights do not integrate
    the constant 1 to within NORMALISATION_TOL.
    """
    if b < a:
        raise ValueError(f"empty interval [{a}, {b}]")
    if b == a:
        return QuadratureRule(nodes=np.array([a]), weights=np.array([1.0]))

    x, w = roots_legendre(n_nodes)
    panels = max(1, math.ceil((b - a) / PANEL_WIDTH))
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel() / (b - a)

    deviation = abs(math.fsum(weights) - 1.0)
    if deviation > NORMALISATION_TOL:
        raise QuadratureError(f"rule on [{a}, {b}] integrates 1 to within {deviation:.3g}")
    return QuadratureRule(nodes=nodes, weights=weights)


def converged_rule(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = CONVERGENCE_TOL,
) -> Tuple[QuadratureRule, float]:
    """
    Double the node count from BASE_NODES until E[f(U)] moves by less than
    `tol`; return the finer rule and its value.
    """
    n_nodes = BASE_NODES
    rule = uniform_rule(a, b, n_nodes)
    value = rule.expect(f(rule.nodes))
    while n_nodes < MAX_NODES:
        finer = uniform_rule(a, b, 2 * n_nodes)
        finer_value = finer.expect(f(finer.nodes))
        if abs(finer_value - value) < tol:
            logger.debug("quadrature on [%g, %g] settled at %d nodes/panel", a, b, 2 * n_nodes)
            return finer, finer_value
        n_nodes, rule, value = 2 * n_nodes, finer, finer_value
    raise QuadratureError(f"no convergence to {tol:g} on [{a}, {b}] with {MAX_NODES} nodes/panel")
