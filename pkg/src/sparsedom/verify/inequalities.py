"""Weighted inequalities for commutators: Fefferman-Stein weak type,
Coifman-Fefferman strong type and the pointwise sharp-function bound.

Each check evaluates both sides on the grid and returns a
:class:`~sparsedom.report.CheckReport`; the implicit dimensional constants
are replaced by the fitted constant max LHS/RHS.
"""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from ..fields import ScalarField, Weight, bmo_norm, distribution
from ..kernels import CommutatorSpec, Kernel, commutator_apply
from ..maximal import m_delta, m_sharp_delta, maximal, orlicz_maximal
from ..report import CheckReport
from ..weights import a1_constant, fujii_wilson, weak_ainfty
from ..young import YoungFunction, make_young
from .quadrature import Phi, c_eps, k_weight

__all__ = [
    "FS_VARIANTS",
    "normalize_symbols",
    "default_lambdas",
    "weak_type_fs",
    "compatibility_constant",
    "coifman_fefferman",
    "sharp_maximal_check",
]

FS_VARIANTS = ("loglog", "log_eps", "weak", "a1")


def normalize_symbols(spec: CommutatorSpec, mode: str = "shifted") -> CommutatorSpec:
    """Rescale every symbol to unit BMO norm (constant symbols are left alone)."""
    out = []
    for b in spec.b:
        nb = bmo_norm(b, mode)
        out.append(b / nb if nb > 0 else b)
    return CommutatorSpec(tuple(out), spec.sigma)


def default_lambdas(top: float, count: int = 32) -> np.ndarray:
    """``count`` log-spaced heights over [1e-3, 10] * top."""
    top = top if top > 0 else 1.0
    return top * np.logspace(-3.0, 1.0, count)


def _fsum_cells(v: np.ndarray, vol: float) -> float:
    return math.fsum(np.ravel(v).tolist()) * vol


def weak_type_fs(K: Kernel, spec: CommutatorSpec, f: ScalarField, w: Weight,
                 eps: float = 0.5, variant: str = "loglog",
                 lambdas: np.ndarray | None = None, phi: YoungFunction | None = None,
                 mode: str = "shifted", count: int = 32) -> CheckReport:
    """w({|T_b f| > lambda}) against the weighted Fefferman-Stein right-hand sides.

    Symbols are normalized to unit BMO norm.  Without ``lambdas`` the sweep is
    ``default_lambdas(max |T_b f|, count)``.  With Phi_m(t) = t log^m(e+t) and
    I(lambda) = sum_cells Phi_m(|f|/lambda) W,

        loglog   RHS = (1/eps) I,  W = M_{L(log L)^m (log log L)^(1+eps)} w  (or M_phi w)
        log_eps  RHS = (C_eps/eps) I,  W = M_{L(log L)^(m+eps)} w
        weak     RHS = K(w) [w]_weak^m log(e + [w]_weak) I,  W = M w
        a1       RHS = K(w) [w]_A1 [w]_weak^m log(e + [w]_weak) I,  W = w

    The fitted constant (max LHS/RHS) is the constant in front of the
    displayed right-hand side, prefactor included.
    """
    if variant not in FS_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {FS_VARIANTS}")
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    spec = normalize_symbols(spec, mode)
    m = spec.m
    Tf = commutator_apply(K, spec, f)
    top = float(np.abs(Tf.values).max())
    lams = default_lambdas(top, count) if lambdas is None else np.asarray(lambdas, float)
    if np.any(lams <= 0):
        raise ValueError("lambda sweep must be positive")
    extra = {"eps": eps, "m": m, "variant": variant, "max_Tf": top}
    if variant == "loglog":
        A = phi if phi is not None else make_young("llog_loglog", alpha=float(m), beta=1.0 + eps)
        W = orlicz_maximal(w, A, mode).values
        pref = 1.0 / eps
    elif variant == "log_eps":
        W = orlicz_maximal(w, Phi(m + eps), mode).values
        pref = c_eps(eps) / eps
    else:
        weak = weak_ainfty(w, mode)
        Kw = k_weight(weak, w.grid.n)
        pref = Kw * weak**m * math.log(math.e + weak)
        extra.update(weak=weak, K_w=Kw)
        if variant == "weak":
            W = maximal(w, mode).values
        else:
            a1 = a1_constant(w, mode)
            pref *= a1
            extra["a1"] = a1
            W = w.values
    extra["prefactor"] = pref
    Pm = Phi(m)
    af = np.abs(f.values)
    vol = f.grid.cell_volume
    lhs = np.array([distribution(Tf, w, float(lam)) for lam in lams])
    rhs = np.array([pref * _fsum_cells(Pm(af / lam) * W, vol) for lam in lams])
    return CheckReport(f"weak_type_fs[{variant}]", lhs, rhs, params={"lambda": lams},
                       notes=f"m={m}, eps={eps!r}", extra=extra)


def compatibility_constant(A: YoungFunction, B: YoungFunction, m: int,
                           probe: np.ndarray | None = None) -> float:
    """Fitted c in B^-1(t) log(1+t)^m <= c A^-1(t) over t >= 1 (C(t) = e^t - 1)."""
    if not A.finite:
        raise ValueError("A must be a finite Young function")
    t = np.logspace(0.0, 12.0, 512) if probe is None else np.asarray(probe, float)
    lt = np.log(t)
    with np.errstate(divide="ignore"):
        num = np.asarray(B.log_inverse(lt)) + m * np.log(np.log1p(t))
    den = np.asarray(A.log_inverse(lt))
    return float(np.exp(num - den).max())


def coifman_fefferman(K: Kernel, spec: CommutatorSpec, f: ScalarField, w: Weight, p: float,
                      B: YoungFunction | None = None, A: YoungFunction | None = None,
                      mode: str = "shifted") -> CheckReport:
    """Strong-type bounds of T_b f in L^p(w) by M_B f, in two constant shapes.

    Row ``power``: int |T_b f|^p w vs prod ||b_s||^p [w]^(mp) [w]^max(1,p) int (M_B f)^p w.
    Row ``norm``:  ||T_b f||_{L^p(w)} vs prod ||b_s|| [w]^(m+1) ||M_B f||_{L^p(w)}.
    [w] is the Fujii-Wilson constant; B defaults to t log^m(e+t), compatible
    with A(t) = t.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    m = spec.m
    B = B if B is not None else Phi(m)
    A = A if A is not None else make_young("power", r=1.0)
    compat = compatibility_constant(A, B, m)
    bnorm = math.prod(bmo_norm(b, mode) for b in spec.b)
    fw = fujii_wilson(w, mode)
    Tf = commutator_apply(K, spec, f)
    MB = orlicz_maximal(f, B, mode)
    vol = f.grid.cell_volume
    wv = w.values
    lhs_p = _fsum_cells(np.abs(Tf.values) ** p * wv, vol)
    mb_p = _fsum_cells(MB.values**p * wv, vol)
    rhs_p = bnorm**p * fw ** (m * p) * fw ** max(1.0, p) * mb_p
    lhs_n = lhs_p ** (1.0 / p)
    rhs_n = bnorm * fw ** (m + 1) * mb_p ** (1.0 / p)
    if mb_p == 0 and lhs_p > 0:
        raise ValueError("M_B f vanishes while T_b f does not")
    return CheckReport(
        "coifman_fefferman",
        np.array([lhs_p, lhs_n]),
        np.array([rhs_p, rhs_n]),
        params={"shape": np.array(["power", "norm"]), "p": np.array([p, p])},
        notes=f"m={m}, p={p!r}, B={B.label}",
        extra={"p": p, "m": m, "fw": fw, "bmo": bnorm, "compat_c": compat, "B": B.label},
    )


def sharp_maximal_check(K: Kernel, spec: CommutatorSpec, f: ScalarField, delta: float = 0.25,
                        eps: float = 0.5, B: YoungFunction | None = None,
                        mode: str = "shifted") -> CheckReport:
    """Pointwise M#_delta(T_b f) against

        sum_{j<m} sum_{|sigma|=j} ||b_sigma'|| M_eps(T_{b_sigma} f) + ||b|| M_B f.
    """
    if not 0 < delta < eps < 1:
        raise ValueError("need 0 < delta < eps < 1")
    m = spec.m
    B = B if B is not None else Phi(m)
    norms = [bmo_norm(b, mode) for b in spec.b]
    lhs = m_sharp_delta(commutator_apply(K, spec, f), delta, mode).values
    rhs = math.prod(norms) * orlicz_maximal(f, B, mode).values
    terms = 1
    for j in range(m):
        for sigma in combinations(range(m), j):
            coef = math.prod(norms[i] for i in range(m) if i not in sigma)
            Ts = commutator_apply(K, spec.subset(sigma), f)
            rhs = rhs + coef * m_delta(Ts, eps, mode).values
            terms += 1
    return CheckReport(
        "sharp_maximal",
        lhs.ravel(),
        rhs.ravel(),
        params={"cell": np.arange(lhs.size)},
        notes=f"m={m}, delta={delta!r}, eps={eps!r}, B={B.label}",
        extra={"terms": terms, "m": m, "delta": delta, "eps": eps},
    )
