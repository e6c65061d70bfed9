"""Shared fixture builders for the test suite."""

import numpy as np
import pytest

from semiweyl.fields import (
    Chart,
    ConnectionField,
    MetricField,
    OneFormField,
    ScalarField,
    eta_tensor_id,
    g_tensor_vector,
)
from semiweyl.structures import Structure
from semiweyl.tensor import gradient, levi_civita
from semiweyl.verdicts import RunConfig


def plane_chart(lo=0.3, hi=1.2):
    return Chart(("x", "y"), (lo, lo), (hi, hi))


def swmt_structure(chart=None, g=None, eta_comps=("y", "sin(x)")):
    """The canonical semi-Weyl family: Levi-Civita plus (one-form) x identity."""
    chart = chart or plane_chart()
    g = g or MetricField.from_expressions(chart, [["1", "0"], ["0", "x*x"]])
    eta = OneFormField.from_expressions(chart, list(eta_comps))
    conn = levi_civita(g).add_tensor(eta_tensor_id(chart, eta))
    return Structure(chart, g, eta, conn)


def smt_structure(chart=None):
    """Conformal metric with the gradient-shifted flat connection."""
    chart = chart or plane_chart(0.2, 1.0)
    g = MetricField.from_expressions(chart, [["exp(x*y)", "0"], ["0", "exp(x*y)"]])
    df = OneFormField.from_expressions(chart, ["y", "x"])
    conn = ConnectionField.flat(chart).add_tensor(eta_tensor_id(chart, df))
    eta = OneFormField.from_expressions(chart, ["0", "0"])
    return Structure(chart, g, eta, conn)


def conformally_flat_structure(chart=None, psi_expr="0.3*x + 0.2*x*y + 0.1*y"):
    chart = chart or plane_chart(0.2, 1.0)
    g = MetricField.euclidean(chart)
    psi = ScalarField.from_expression(chart, psi_expr)
    conn = ConnectionField.flat(chart).add_tensor(g_tensor_vector(g, gradient(g, psi)))
    minus_dpsi = OneFormField(
        chart,
        lambda p, order: np.array([-psi.jet(p, order + 1).partial(i) for i in range(chart.dim)], dtype=object),
    )
    return Structure(chart, g, minus_dpsi, conn), psi


def euclidean3_chart():
    return Chart(("x", "y", "z"), (-1.5, -1.5, -1.5), (1.5, 1.5, 1.5))


def ambient_swmt_3d(eta_comps=("0.2*y", "0.1*z", "0.15*x")):
    chart = euclidean3_chart()
    g = MetricField.euclidean(chart)
    eta = OneFormField.from_expressions(chart, list(eta_comps))
    conn = ConnectionField.flat(chart).add_tensor(eta_tensor_id(chart, eta))
    return Structure(chart, g, eta, conn)


def minkowski_structure(dim=3, eta_comps=None):
    names = ("t", "x", "y", "z")[:dim]
    chart = Chart(names, (-2.0,) * dim, (2.0,) * dim)
    g = MetricField.from_diagonal(chart, ["0 - 1"] + ["1"] * (dim - 1))
    eta_comps = eta_comps or (["0.2*x", "0.1*t"] + ["0.15*t"] * (dim - 2))
    eta = OneFormField.from_expressions(chart, eta_comps)
    conn = ConnectionField.flat(chart).add_tensor(eta_tensor_id(chart, eta))
    return Structure(chart, g, eta, conn)


def sphere_embedding(ambient_chart):
    from semiweyl.hypersurfaces import EmbeddingMap

    dom = Chart(("u", "v"), (0.4, 0.4), (1.2, 1.2))
    return EmbeddingMap(dom, ambient_chart, ["cos(u)*sin(v)", "sin(u)*sin(v)", "cos(v)"])


def null_cone_embedding(ambient_chart):
    from semiweyl.hypersurfaces import EmbeddingMap

    dom = Chart(("u", "v"), (0.5, 0.3), (1.5, 1.2))
    return EmbeddingMap(dom, ambient_chart, ["u", "u*cos(v)", "u*sin(v)"])


@pytest.fixture
def config():
    return RunConfig(samples=80, seed=0, tol=1e-8, min_valid_points=40)


@pytest.fixture
def tight_config():
    return RunConfig(samples=80, seed=0, tol=1e-10, min_valid_points=40)
