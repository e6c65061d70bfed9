"""Truncated Taylor (jet) arithmetic up to third order.

A ``Jet`` carries the value of a smooth function at a point together with
its partial derivatives up to a fixed order (0 to 3).  Arithmetic on jets
implements the product and chain rules exactly, so any quantity assembled
from jets carries exact derivatives of the assembly.  Linear solves with
jet-valued matrices propagate derivatives through the solution
(differentiating ``A(x) s(x) = b(x)`` order by order).
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "Jet",
    "JetOrderError",
    "EvaluationDomainError",
    "jet_solve",
    "jet_matinv",
    "jet_det",
    "jet_compose",
    "constant_jets",
    "values_of",
]


class JetOrderError(ValueError):
    """Requested derivative order not carried by the operand."""


class EvaluationDomainError(ArithmeticError):
    """Evaluation hit a point outside the domain of a primitive
    (division by zero, log/sqrt of a non-positive value)."""


class Jet:
    """Value plus partial derivatives up to ``order`` in ``n`` variables."""

    __slots__ = ("n", "order", "value", "grad", "hess", "third")

    def __init__(self, n, order, value, grad=None, hess=None, third=None):
        if not 0 <= order <= 3:
            raise JetOrderError(f"jet order must be in 0..3, got {order}")
        self.n = n
        self.order = order
        self.value = float(value)
        self.grad = grad if grad is not None else (np.zeros(n) if order >= 1 else None)
        self.hess = hess if hess is not None else (np.zeros((n, n)) if order >= 2 else None)
        self.third = third if third is not None else (np.zeros((n, n, n)) if order >= 3 else None)

    # -- constructors -----------------------------------------------------

    @staticmethod
    def constant(c, n, order):
        return Jet(n, order, c)

    @staticmethod
    def coordinate(value, index, n, order):
        j = Jet(n, order, value)
        if order >= 1:
            j.grad[index] = 1.0
        return j

    # -- basic queries -----------------------------------------------------

    def is_finite(self):
        ok = math.isfinite(self.value)
        if ok and self.order >= 1:
            ok = bool(np.all(np.isfinite(self.grad)))
        if ok and self.order >= 2:
            ok = bool(np.all(np.isfinite(self.hess)))
        if ok and self.order >= 3:
            ok = bool(np.all(np.isfinite(self.third)))
        return ok

    def partial(self, i):
        """Jet of ``d/dx_i`` of this function, one order lower."""
        if self.order < 1:
            raise JetOrderError("partial() needs a jet of order >= 1")
        return Jet(
            self.n,
            self.order - 1,
            self.grad[i],
            self.hess[i].copy() if self.order >= 2 else None,
            self.third[i].copy() if self.order >= 3 else None,
        )

    def truncate(self, order):
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order {self.order} -> {order}")
        return Jet(
            self.n,
            order,
            self.value,
            self.grad if order >= 1 else None,
            self.hess if order >= 2 else None,
            self.third if order >= 3 else None,
        )

    def __repr__(self):
        return f"Jet(value={self.value!r}, order={self.order}, n={self.n})"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.n != self.n:
                raise ValueError("jet dimension mismatch")
            if other.order != self.order:
                o = min(self.order, other.order)
                return self.truncate(o), other.truncate(o)
            return self, other
        return self, Jet.constant(float(other), self.n, self.order)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(
            a.n,
            a.order,
            a.value + b.value,
            a.grad + b.grad if a.order >= 1 else None,
            a.hess + b.hess if a.order >= 2 else None,
            a.third + b.third if a.order >= 3 else None,
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet(
            self.n,
            self.order,
            -self.value,
            -self.grad if self.order >= 1 else None,
            -self.hess if self.order >= 2 else None,
            -self.third if self.order >= 3 else None,
        )

    def __sub__(self, other):
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        o = a.order
        value = a.value * b.value
        grad = hess = third = None
        if o >= 1:
            grad = a.value * b.grad + b.value * a.grad
        if o >= 2:
            hess = (
                a.value * b.hess
                + b.value * a.hess
                + np.outer(a.grad, b.grad)
                + np.outer(b.grad, a.grad)
            )
        if o >= 3:
            third = a.value * b.third + b.value * a.third
            for u, v in ((a, b), (b, a)):
                third = third + (
                    np.einsum("i,jk->ijk", u.grad, v.hess)
                    + np.einsum("j,ik->ijk", u.grad, v.hess)
                    + np.einsum("k,ij->ijk", u.grad, v.hess)
                )
        return Jet(a.n, o, value, grad, hess, third)

    __rmul__ = __mul__

    def compose_scalar(self, derivs):
        """Chain rule through a univariate function.

        ``derivs`` holds the outer function's value and derivatives at
        ``self.value``, up to ``self.order``.
        """
        o = self.order
        f0 = derivs[0]
        grad = hess = third = None
        if o >= 1:
            f1 = derivs[1]
            grad = f1 * self.grad
        if o >= 2:
            f2 = derivs[2]
            g = self.grad
            hess = f1 * self.hess + f2 * np.outer(g, g)
        if o >= 3:
            f3 = derivs[3]
            g = self.grad
            h = self.hess
            third = (
                f1 * self.third
                + f2
                * (
                    np.einsum("i,jk->ijk", g, h)
                    + np.einsum("j,ik->ijk", g, h)
                    + np.einsum("k,ij->ijk", g, h)
                )
                + f3 * np.einsum("i,j,k->ijk", g, g, g)
            )
        return Jet(self.n, o, f0, grad, hess, third)

    def reciprocal(self):
        v = self.value
        if v == 0.0 or not math.isfinite(v):
            raise EvaluationDomainError("division by zero")
        return self.compose_scalar(
            (1.0 / v, -1.0 / v**2, 2.0 / v**3, -6.0 / v**4)[: self.order + 1]
        )

    def __truediv__(self, other):
        a, b = self._coerce(other)
        return a * b.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k):
        k = int(k)
        v = self.value
        if k == 0:
            return Jet.constant(1.0, self.n, self.order)
        if k < 0 and v == 0.0:
            raise EvaluationDomainError("zero raised to a negative power")
        derivs = []
        c = 1.0
        for r in range(self.order + 1):
            e = k - r
            derivs.append(c * (v**e if (e >= 0 or v != 0.0) else 0.0))
            c *= k - r
        return self.compose_scalar(derivs)

    # -- elementary functions -------------------------------------------------

    def exp(self):
        e = math.exp(self.value)
        return self.compose_scalar((e,) * (self.order + 1))

    def log(self):
        v = self.value
        if v <= 0.0:
            raise EvaluationDomainError("log of a non-positive value")
        return self.compose_scalar(
            (math.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3)[: self.order + 1]
        )

    def sin(self):
        s, c = math.sin(self.value), math.cos(self.value)
        return self.compose_scalar((s, c, -s, -c)[: self.order + 1])

    def cos(self):
        s, c = math.sin(self.value), math.cos(self.value)
        return self.compose_scalar((c, -s, -c, s)[: self.order + 1])

    def sqrt(self):
        v = self.value
        if v < 0.0 or (v == 0.0 and self.order >= 1):
            raise EvaluationDomainError("sqrt of a negative value")
        r = math.sqrt(v)
        derivs = [r]
        if self.order >= 1:
            derivs.append(0.5 / r)
        if self.order >= 2:
            derivs.append(-0.25 / r**3)
        if self.order >= 3:
            derivs.append(0.375 / r**5)
        return self.compose_scalar(derivs)


# -- array helpers ----------------------------------------------------------


def constant_jets(values, n, order):
    """Object array of constant jets with the shape of ``values``."""
    values = np.asarray(values, dtype=float)
    out = np.empty(values.shape, dtype=object)
    for idx in np.ndindex(values.shape):
        out[idx] = Jet.constant(values[idx], n, order)
    return out


def values_of(jets):
    """Float array of the values of an object array of jets."""
    jets = np.asarray(jets, dtype=object)
    out = np.empty(jets.shape, dtype=float)
    for idx in np.ndindex(jets.shape):
        out[idx] = jets[idx].value
    return out


def _grads_of(jets, n):
    jets = np.asarray(jets, dtype=object)
    out = np.empty(jets.shape + (n,), dtype=float)
    for idx in np.ndindex(jets.shape):
        out[idx] = jets[idx].grad
    return out


def _hess_of(jets, n):
    jets = np.asarray(jets, dtype=object)
    out = np.empty(jets.shape + (n, n), dtype=float)
    for idx in np.ndindex(jets.shape):
        out[idx] = jets[idx].hess
    return out


def _third_of(jets, n):
    jets = np.asarray(jets, dtype=object)
    out = np.empty(jets.shape + (n, n, n), dtype=float)
    for idx in np.ndindex(jets.shape):
        out[idx] = jets[idx].third
    return out


def jet_solve(A, b, singular_tol=None):
    """Solve ``A s = b`` with jet entries, propagating derivatives.

    ``A`` is a (k, k) object array of jets, ``b`` a (k,) or (k, m) object
    array of matching order and variable count.  Raises
    :class:`EvaluationDomainError` when the value-level matrix is singular.
    """
    A = np.asarray(A, dtype=object)
    b = np.asarray(b, dtype=object)
    probe = A[0, 0]
    n, order = probe.n, probe.order
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    k, m = b.shape

    A0 = values_of(A)
    try:
        lu = np.linalg.inv(A0)
    except np.linalg.LinAlgError as exc:
        raise EvaluationDomainError("singular frame in jet solve") from exc
    cond_scale = np.max(np.abs(A0)) * np.max(np.abs(lu))
    if singular_tol is not None and cond_scale > 1.0 / singular_tol:
        raise EvaluationDomainError("ill-conditioned frame in jet solve")

    b0 = values_of(b)
    s0 = lu @ b0

    sg = sh = st = None
    if order >= 1:
        Ag = _grads_of(A, n)  # (k,k,n)
        bg = _grads_of(b, n)  # (k,m,n)
        rhs = bg - np.einsum("ija,jm->ima", Ag, s0)
        sg = np.einsum("ij,jma->ima", lu, rhs)  # (k,m,n)
    if order >= 2:
        Ah = _hess_of(A, n)
        bh = _hess_of(b, n)
        rhs = (
            bh
            - np.einsum("ijab,jm->imab", Ah, s0)
            - np.einsum("ija,jmb->imab", Ag, sg)
            - np.einsum("ijb,jma->imab", Ag, sg)
        )
        sh = np.einsum("ij,jmab->imab", lu, rhs)
    if order >= 3:
        At = _third_of(A, n)
        bt = _third_of(b, n)
        rhs = (
            bt
            - np.einsum("ijabc,jm->imabc", At, s0)
            - np.einsum("ijab,jmc->imabc", Ah, sg)
            - np.einsum("ijac,jmb->imabc", Ah, sg)
            - np.einsum("ijbc,jma->imabc", Ah, sg)
            - np.einsum("ija,jmbc->imabc", Ag, sh)
            - np.einsum("ijb,jmac->imabc", Ag, sh)
            - np.einsum("ijc,jmab->imabc", Ag, sh)
        )
        st = np.einsum("ij,jmabc->imabc", lu, rhs)

    out = np.empty((k, m), dtype=object)
    for i in range(k):
        for j in range(m):
            out[i, j] = Jet(
                n,
                order,
                s0[i, j],
                sg[i, j] if order >= 1 else None,
                sh[i, j] if order >= 2 else None,
                st[i, j] if order >= 3 else None,
            )
    return out[:, 0] if squeeze else out


def jet_matinv(A):
    """Inverse of a jet-valued square matrix."""
    A = np.asarray(A, dtype=object)
    k = A.shape[0]
    probe = A[0, 0]
    eye = constant_jets(np.eye(k), probe.n, probe.order)
    return jet_solve(A, eye)


def jet_det(A):
    """Determinant of a jet-valued square matrix by cofactor expansion."""
    A = np.asarray(A, dtype=object)
    k = A.shape[0]
    if k == 1:
        return A[0, 0]
    if k == 2:
        return A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    total = None
    for j in range(k):
        minor = np.delete(np.delete(A, 0, axis=0), j, axis=1)
        term = A[0, j] * jet_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def jet_compose(outer, inner):
    """Chain rule: ``outer`` is a jet in the m image variables, ``inner`` a
    length-m object array of jets in the source variables.  Returns the jet
    of the composition in the source variables."""
    inner = np.asarray(inner, dtype=object)
    m = inner.shape[0]
    probe = inner[0]
    n, order = probe.n, min(probe.order, outer.order)

    value = outer.value
    grad = hess = third = None
    if order >= 1:
        J = _grads_of(inner, n)  # (m, n)
        og = outer.grad[:m]
        grad = og @ J
    if order >= 2:
        H = _hess_of(inner, n)  # (m, n, n)
        oh = outer.hess[:m, :m]
        hess = np.einsum("ab,ai,bj->ij", oh, J, J) + np.einsum("a,aij->ij", og, H)
    if order >= 3:
        T = _third_of(inner, n)
        ot = outer.third[:m, :m, :m]
        third = (
            np.einsum("abc,ai,bj,ck->ijk", ot, J, J, J)
            + np.einsum("ab,aij,bk->ijk", oh, H, J)
            + np.einsum("ab,aik,bj->ijk", oh, H, J)
            + np.einsum("ab,ajk,bi->ijk", oh, H, J)
            + np.einsum("a,aijk->ijk", og, T)
        )
    return Jet(n, order, value, grad, hess, third)
