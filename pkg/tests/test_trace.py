import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import closed
from rpp_psaks.generators import clustered_instance
from rpp_psaks.kernelizer import kernelize_metric
from rpp_psaks.trace import (
    AddedMatching,
    DeletedVertices,
    Extraction,
    KernelTrace,
    StrippedCycle,
    TraceFormatError,
    WeightQuantum,
    dumps,
    loads,
)

SAMPLE = KernelTrace(
    eps=Fraction(1, 2), eps1=Fraction(1, 4), eps2=Fraction(1, 4), gamma=Fraction(7, 3),
    terminals=(0, 2, 5, 9),
    steps=[
        AddedMatching(((0, 2, 4),)),
        StrippedCycle(((0, 2, 4), (0, 2, 4))),
        Extraction(5, "b1", ((2, 5, 1), (5, 9, 2)), ((2, 9, 3),)),
        Extraction(9, "a", ((2, 9, 3),), ()),
        DeletedVertices((5, 9)),
        WeightQuantum(Fraction(3, 2), 30, 20, (4, 1, 0)),
    ],
    kernel_labels=(0, 2),
    gamma_bound="max",
)


def test_round_trip_sample():
    text = dumps(SAMPLE)
    assert text.startswith("rpp-psaks-trace 1\n") and text.endswith("end\n")
    assert "extract 9 a removed 2:9:3 added\n" in text
    assert loads(text) == SAMPLE


def test_infinite_gamma():
    t = KernelTrace(Fraction(1), Fraction(1), Fraction(0), None, (3,), [], (3,))
    assert "gamma inf" in dumps(t)
    assert loads(dumps(t)).gamma is None


@given(st.integers(0, 100_000), st.booleans())
def test_round_trip_real_traces(seed, weight_reduce):
    _, p = closed(clustered_instance(random.Random(seed)))
    _, trace = kernelize_metric(p, Fraction(1, 3), weight_reduce=weight_reduce)
    assert loads(dumps(trace)) == trace


@pytest.mark.parametrize("text, msg", [
    ("", "header"),
    ("rpp-psaks-trace 2\n", "version"),
    ("rpp-psaks-trace 1\neps 1\n", "missing"),
    ("rpp-psaks-trace 1\neps 1\neps1 1\neps2 0\ngamma inf\nterminals 0\nkernel 0\n", "truncated"),
    ("rpp-psaks-trace 1\neps x\neps1 1\neps2 0\ngamma inf\nterminals\nkernel\nend\n", "rational"),
    ("rpp-psaks-trace 1\nbogus 1\n", "unknown"),
    ("rpp-psaks-trace 1\nstrip 0:1\n", "edge token"),
    ("rpp-psaks-trace 1\nextract 3 z removed added\n", "malformed"),
    ("rpp-psaks-trace 1\nweights 1 2\n", "without quantum"),
    ("rpp-psaks-trace 1\ndelete 1 q\n", "integer"),
    ("rpp-psaks-trace 1\neps 1\neps1 1\neps2 0\ngamma inf\nterminals\nkernel\nend\nend\n", "after 'end'"),
])
def test_malformed(text, msg):
    with pytest.raises(TraceFormatError, match=msg):
        loads(text)
