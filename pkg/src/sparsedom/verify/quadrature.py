"""Explicit constants: the K_phi integrals, C_eps, beta_{m,l1,l2} and K(w).

The K_phi integrand is evaluated in log space.  With ``t = exp(u)`` every
factor is written through the deficit ``D(u) = u - log A^{-1}(e^u)`` and the
excess ``E(x) = log(A(e^x) / e^x)``, so no two large logarithms are ever
subtracted.  The range ``u >= 1`` is mapped once more by ``u = exp(v)`` and
integrated over doubling windows ``[2^k, 2^(k+1)]`` in ``v``; consecutive
window contributions give the Cauchy test and a geometric tail estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from ..young import YoungFunction, make_young

__all__ = [
    "QuadratureResult",
    "Phi",
    "phi_family",
    "kphi_log_integrand",
    "k_phi",
    "c_eps",
    "a_index",
    "alpha_rk",
    "beta_const",
    "k_weight",
]

OFFSET_NOTE = "c_n: dimensional offset, not computed"
_V_MAX = 512.0  # u = exp(v) stays finite up to v ~ 709
_DIRECT_U = 30.0  # below this, u - log A^{-1}(e^u) loses nothing


@dataclass(frozen=True)
class QuadratureResult:
    """Value of one improper integral over [1, inf).

    The truncation point is ``T_max = exp(exp(v_max))``.  ``value`` includes
    the geometric tail estimate ``tail``; ``converged`` iff
    ``tail <= 1e-6 * value``.  Divergent integrals carry ``value = nan``.
    """

    value: float
    v_max: float
    tail: float
    converged: bool
    divergent: bool = False
    partial: float = math.nan
    windows: tuple[float, ...] = ()
    beta: float = 0.0
    offset: str = OFFSET_NOTE

    @property
    def t_max(self) -> float:
        try:
            return math.exp(math.exp(self.v_max))
        except OverflowError:
            return math.inf

    @property
    def total(self) -> float:
        """beta + integral (the c_n offset is not included)."""
        return self.beta + self.value


def Phi(i: float) -> YoungFunction:
    """Phi_i(t) = t log^i(e + t)."""
    return make_young("llog", alpha=float(i))


def phi_family(m: int, l1: int, l2: int, eps: float) -> YoungFunction:
    """phi_(l1,l2)(t) = t log^(m-l1+l2)(e+t) log^(1+eps)(e+log(e+t)).

    With l1 = l2 = m this is phi_(m,m) = t log^m(e+t) log^(1+eps)(e+log(e+t)).
    """
    _check_indices(m, l1, l2)
    return make_young("llog_loglog", alpha=float(m - l1 + l2), beta=1.0 + float(eps))


def _check_indices(m: int, l1: int, l2: int) -> None:
    if not (0 <= l2 <= l1 <= m):
        raise ValueError(f"need 0 <= l2 <= l1 <= m, got m={m}, l1={l1}, l2={l2}")


def _deficit(A: YoungFunction, u: float) -> float:
    """u - log A^{-1}(e^u)."""
    if A.log_inv is not None or A.excess is None or u <= _DIRECT_U:
        return u - float(A.log_inverse(u))
    E = float(A.log_excess(u))
    if E == 0.0:
        return 0.0
    # D = E(u - D); g(D) = D - E(u - D) is increasing and changes sign on [0, E(u)]
    a, b = sorted((0.0, E))
    return optimize.brentq(lambda d: d - float(A.log_excess(u - d)), a, b,
                           xtol=1e-14 * max(1.0, abs(E)), rtol=4 * np.finfo(float).eps)


def _log_L(u: float) -> float:
    # log log(e + e^u)
    return math.log(float(np.logaddexp(1.0, u)))


def kphi_log_integrand(phi: YoungFunction, A: YoungFunction, m: int, l1: int, l2: int,
                       Phi_: YoungFunction | None = None):
    """Return ``g(u) = log(F(e^u) e^u)`` for the K_phi integrand F(t) dt.

    (m, m) branch: F(t) = phi^-1(t) A(log^2(e+t)) / (t^2 log^3(e+t)).
    Other branches: F(t) = phi^-1(Phi^-1_(l1-l2)(t)) A(log^(2l1+1)(e+t)) / (t^2 log^(l1+2)(e+t)).
    """
    _check_indices(m, l1, l2)
    if l1 == l2 == m:
        def g(u):
            lL = _log_L(u)
            return -_deficit(phi, u) - lL + float(A.log_excess(2.0 * lL))
        return g
    if l1 == l2:
        raise ValueError("the (l1, l1) branch with l1 < m is not part of the family")
    P = Phi_ if Phi_ is not None else Phi(l1 - l2)

    def g(u):
        lL = _log_L(u)
        dP = _deficit(P, u)
        return (-dP - _deficit(phi, u - dP) + (l1 - 1) * lL
                + float(A.log_excess((2 * l1 + 1) * lL)))
    return g


def k_phi(phi: YoungFunction, A: YoungFunction, m: int, l1: int, l2: int,
          Phi_: YoungFunction | None = None, beta: float = 0.0,
          rtol: float = 1e-10, v_max: float = _V_MAX) -> QuadratureResult:
    """Integral part of K_phi over [1, inf); ``beta`` is carried alongside.

    Divergence: the window contributions fail to decrease over three
    consecutive doublings (Cauchy criterion on the partial integrals).
    """
    g = kphi_log_integrand(phi, A, m, l1, l2, Phi_)

    def head(u):
        return math.exp(g(u))

    def body(v):
        u = math.exp(v)
        return math.exp(g(u) + v)

    quad_kw = dict(epsabs=0.0, epsrel=rtol, limit=200)
    parts = [integrate.quad(head, 0.0, 1.0, **quad_kw)[0]]
    windows: list[float] = []
    a, b = 0.0, 1.0
    grow = 0
    tail = math.inf
    while True:
        I = integrate.quad(body, a, b, **quad_kw)[0]
        windows.append(I)
        parts.append(I)
        total = math.fsum(parts)
        if len(windows) >= 3:
            prev = windows[-2]
            grow = grow + 1 if I >= prev else 0
            if grow >= 3:
                return QuadratureResult(math.nan, b, math.inf, False, True, total,
                                        tuple(windows), beta)
            q = I / prev if prev > 0 else 0.0
            tail = I * q / (1.0 - q) if q < 1 else math.inf
            if tail <= 1e-12 * total:
                break
        if b >= v_max:
            break
        a, b = b, min(2.0 * b, v_max)
    value = total + (tail if math.isfinite(tail) else 0.0)
    converged = math.isfinite(tail) and tail <= 1e-6 * value
    return QuadratureResult(value, b, tail, converged, False, total, tuple(windows), beta)


def c_eps(eps: float, m: int = 0) -> float:
    """C_eps = e log^m(2e) log^(1+eps)(e + log 2e) + 2^(1+eps) (1 + 1/eps)^(1+eps).

    ``m = 0`` gives the weak-type corollary constant; ``m >= 1`` the constant
    of the pointwise comparison of the loglog and log maximal operators.
    """
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    if m < 0:
        raise ValueError("m must be non-negative")
    l2e = math.log(2 * math.e)
    return (math.e * l2e**m * math.log(math.e + l2e) ** (1 + eps)
            + 2 ** (1 + eps) * (1 + 1 / eps) ** (1 + eps))


def _check_r(r: float, l1: int) -> None:
    if not (r > 1 and 1 < r ** (2 * l1) < 4 <= r ** (2 * l1 + 1)):
        raise ValueError(f"r={r} outside 1 < r^(2 l1) < 4 <= r^(2 l1 + 1) for l1={l1}")


def a_index(r: float, n: int = 1) -> int:
    """Smallest a >= 0 with exp(r^(k-1)/(2^n e) - 1) >= e^2 for every k > a."""
    target = 3.0 * 2.0**n * math.e  # r^(k-1) >= 3 * 2^n * e
    a = 0
    while r**a < target:
        a += 1
    return a


def alpha_rk(r: float, k: int, n: int = 1) -> float:
    """alpha_{r,k} = min(1, exp(1 - r^k / (2^n e)))."""
    return min(1.0, math.exp(1.0 - r**k / (2.0**n * math.e)))


def beta_const(m: int, l1: int, l2: int, r: float, A: YoungFunction | None = None,
               phi: YoungFunction | None = None, n: int = 1, eps: float = 0.5,
               terms: int | None = None, Phi_: YoungFunction | None = None) -> float:
    """beta_{m,l1,l2} = sum_{k=1}^{a} r^(l2 k) A(4^k) phi^-1(x_k) / (4^k x_k),
    x_k = Phi^-1_(l1-l2)(1 / alpha_{r,k}).

    Defaults: A = Phi_(m-l1), phi = phi_(l1,l2) at ``eps``.  ``terms``
    overrides the upper summation index a_{n,l1}.
    """
    _check_indices(m, l1, l2)
    if not l2 < l1:
        raise ValueError("beta is defined for l2 < l1")
    _check_r(r, l1)
    A = A if A is not None else Phi(m - l1)
    phi = phi if phi is not None else phi_family(m, l1, l2, eps)
    P = Phi_ if Phi_ is not None else Phi(l1 - l2)
    a = a_index(r, n) if terms is None else int(terms)
    if a < 0:
        raise ValueError("terms must be non-negative")
    out = []
    for k in range(1, a + 1):
        log_inv_alpha = max(0.0, r**k / (2.0**n * math.e) - 1.0)
        lx = float(P.log_inverse(log_inv_alpha))
        lphi = float(phi.log_inverse(lx))
        lk4 = k * math.log(4.0)
        out.append(math.exp(l2 * k * math.log(r) + float(A.log_eval(lk4)) + lphi - lk4 - lx))
    return math.fsum(out)


def k_weight(weak: float, n: int) -> float:
    """K(w) = max(e, exp(2 / (tau_n [w]_weak))) with tau_n = 2^n."""
    if not weak > 0:
        raise ValueError("weak A_inf constant must be positive")
    return max(math.e, math.exp(2.0 / (2.0**n * weak)))
