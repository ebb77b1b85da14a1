"""Lossy kernelization and approximation for the undirected Rural Postman Problem."""
from ._kernels import BACKEND
from .graph import ClosedWalk, EdgeMultiset, RppInstance, WeightedMultigraph
from .kernelizer import kernelize, kernelize_metric
from .lifting import easy_dispatch, lift_solution
from .metric import MetricInstance, MetricRpp, expand_walk, metric_close
from .solver import approx_32, lower_bound, verify_ee
from .trace import KernelTrace

__all__ = [
    "BACKEND",
    "ClosedWalk",
    "EdgeMultiset",
    "KernelTrace",
    "MetricInstance",
    "MetricRpp",
    "RppInstance",
    "WeightedMultigraph",
    "approx_32",
    "easy_dispatch",
    "expand_walk",
    "kernelize",
    "kernelize_metric",
    "lift_solution",
    "lower_bound",
    "metric_close",
    "verify_ee",
]
__version__ = "0.1.0"
