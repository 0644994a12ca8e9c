"""Sparse domination of commutators by stopping cubes, and sparse operators.

:func:`build_sparse_family` runs the stopping-time recursion at a dyadic cube
Q0: at each node Q the exceptional set E collects the cells where a pattern
function (b - <b>_{3Q})^S f is large, or where its local grand maximal
truncation is large, both relative to its Luxemburg norm over 3Q.  The
threshold alpha doubles from 1 until |E| <= 2^-(n+2) |Q|; the maximal dyadic
cubes with |P cap E| > 2^-(n+1) |P| become the children of Q, and
E_Q = Q minus their union.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .dyadic import Cube, Grid, SparseFamily, cz_stopping, verify_sparse
from .fields import ScalarField, bump, log_singular
from .kernels import (CommutatorSpec, Kernel, commutator_apply, grand_local_window,
                      hormander_constant, make_kernel, operator_norm)
from .report import CheckReport, ratios
from .young import (CertificateNotFound, YClassCertificate, YoungFunction, certify_y_class,
                    luxemburg, make_young, tabulate)

__all__ = [
    "SparseBuildError",
    "NodeRecord",
    "SparseDominationReport",
    "default_certificate",
    "sparse_constant",
    "build_sparse_family",
    "sparse_eval",
    "sparse_sum",
    "domination_check",
    "domination_report",
    "default_corpus",
]


class SparseBuildError(RuntimeError):
    """The exceptional-set threshold could not be met below the alpha cap."""


@dataclass(frozen=True)
class NodeRecord:
    cube: Cube
    alpha: float
    e_cells: int
    children: tuple[Cube, ...]
    child_e_cells: tuple[int, ...]

    @property
    def p_cells(self) -> int:
        return sum(P.n_cells for P in self.children)


@dataclass
class SparseDominationReport:
    family: SparseFamily
    lattices: dict[int, SparseFamily]
    nodes: list[NodeRecord]
    C_T: float
    certificate: YClassCertificate
    H_conj: tuple[float, float]
    T_norm: float

    @property
    def depth(self) -> int:
        top = self.nodes[0].cube.level if self.nodes else 0
        return max((nd.cube.level - top for nd in self.nodes), default=0)

    @property
    def alphas(self) -> list[float]:
        return [nd.alpha for nd in self.nodes]

    @property
    def alpha_max(self) -> float:
        return max(self.alphas, default=1.0)

    def exceptional(self) -> list[tuple[int, int, int]]:
        """(level, |E| in cells, |Q| in cells) per recursion node."""
        return [(nd.cube.level, nd.e_cells, nd.cube.n_cells) for nd in self.nodes]

    def selection_ok(self) -> bool:
        """Exact cell-count checks at every node: sum |P_j| <= |Q|/2, |E| <= 2^-(n+2)|Q|,
        and 2^-(n+1) < |P_j cap E| / |P_j| <= 1/2 for every selected P_j."""
        for nd in self.nodes:
            Q = nd.cube
            n = Q.n
            if 2 * nd.p_cells > Q.n_cells:
                return False
            if nd.e_cells * 2 ** (n + 2) > Q.n_cells:
                return False
            for P, e in zip(nd.children, nd.child_e_cells):
                if not (e * 2 ** (n + 1) > P.n_cells and 2 * e <= P.n_cells):
                    return False
        return True

    def verify(self):
        return verify_sparse(self.family, 0.5)

    def lattice_eta(self) -> dict[int, float]:
        return {j: fam.measured_eta() for j, fam in sorted(self.lattices.items())}

    def summary(self) -> dict:
        return {
            "cubes": len(self.family),
            "depth": self.depth,
            "alpha_max": self.alpha_max,
            "C_T": self.C_T,
            "T_norm": self.T_norm,
            "H_conj": max(self.H_conj),
            "sparse_ok": bool(self.verify()),
            "selection_ok": self.selection_ok(),
            "min_lattice_eta": min(self.lattice_eta().values(), default=1.0),
        }


# ---------------------------------------------------------------------------
# constants


def default_certificate(A: YoungFunction) -> YClassCertificate:
    """First Y(p0, p1) membership found among the natural candidates for A."""
    cands = []
    if A.name == "power":
        r = float(A.params["r"])
        cands.append((r, r))
    cands += [(1.0, 1.0), (1.0, 2.0), (1.0, 4.0)]
    for p0, p1 in cands:
        try:
            return certify_y_class(A, p0, p1)
        except CertificateNotFound:
            continue
    raise CertificateNotFound(f"{A.label}: no Y(p0, p1) certificate among {cands}")


def sparse_constant(K: Kernel, grid: Grid, A: YoungFunction,
                    cert: YClassCertificate | None = None):
    """C_T = max(c_p0, c_p1) (H_{Abar} + ||T||), dimensional prefactor dropped.

    Returns ``(C_T, cert, (H_1, H_2), ||T||)``.
    """
    cert = default_certificate(A) if cert is None else cert
    conj = A.conjugate() if A.kind == "finite" else None
    if conj is None:
        raise ValueError("C_T needs a finite Young function A")
    if conj.conjugate_form == "numeric":
        conj = tabulate(conj)
    H = hormander_constant(K, grid, conj)
    nrm = operator_norm(K, grid)
    return max(cert.c_p0, cert.c_p1) * (max(H) + nrm), cert, H, nrm


# ---------------------------------------------------------------------------
# construction


def _patterns(m: int):
    return [S for k in range(m + 1) for S in itertools.combinations(range(m), k)]


def build_sparse_family(K: Kernel, spec: CommutatorSpec, f: ScalarField, Q0: Cube,
                        A: YoungFunction, C_T: float | None = None,
                        cert: YClassCertificate | None = None,
                        max_alpha: float = 2.0**20) -> SparseDominationReport:
    """Stopping-time construction of a 1/2-sparse family F inside Q0.

    Requires supp f in 3Q0 and 3Q0 inside the root.  Nodes are processed
    level by level in canonical index order.
    """
    grid = f.grid
    if Q0.lattice != 0:
        raise ValueError("Q0 must be a standard dyadic cube")
    R0 = Q0.dilate3()
    if not R0.inside():
        raise ValueError("3Q0 leaves the root domain")
    if np.any(f.values[~R0.mask()] != 0):
        raise ValueError("f must be supported in 3Q0")
    if C_T is None:
        C_T, cert, H, nrm = sparse_constant(K, grid, A, cert)
    else:
        cert = default_certificate(A) if cert is None else cert
        H, nrm = (math.nan, math.nan), math.nan
    n = grid.n
    bs = spec.fields()
    pats = _patterns(len(bs))
    fam = SparseFamily(grid, 0.5)
    nodes: list[NodeRecord] = []
    height = 2.0 ** -(n + 1)
    frontier = [Q0]
    while frontier:
        nxt: list[Cube] = []
        for Q in sorted(frontier, key=lambda c: c.index):
            if Q.base_side == 1:
                fam.add(Q)
                nodes.append(NodeRecord(Q, 1.0, 0, (), ()))
                continue
            R = Q.dilate3()
            fw = f.values[R.slices]
            bw = [b[R.slices] for b in bs]
            cs = [float(b.mean()) for b in bw]
            inner = tuple(slice(a - r, a - r + Q.side_cells) for a, r in zip(Q.lo, R.lo))
            ratio = np.zeros((Q.side_cells,) * n)
            for S in pats:
                g = fw.copy()
                for s in S:
                    g = g * (bw[s] - cs[s])
                tau = float(luxemburg(g.ravel(), A))
                if tau == 0.0:
                    continue
                np.maximum(ratio, np.abs(g[inner]) / tau, out=ratio)
                gm = grand_local_window(K, g, Q)[inner]
                np.maximum(ratio, gm / (C_T * tau), out=ratio)
            alpha = 1.0
            limit = Q.n_cells  # compare |E| * 2^(n+2) <= |Q| in integers
            while int((ratio > alpha).sum()) * 2 ** (n + 2) > limit:
                alpha *= 2.0
                if alpha > max_alpha:
                    raise SparseBuildError(
                        f"alpha above {max_alpha:g} at cube {Q}; kernel/corpus mismatch")
            E = ratio > alpha
            Efull = np.zeros(grid.shape)
            Efull[Q.slices] = E
            kids = cz_stopping(Efull, Q, height)
            EQ = np.ones((Q.side_cells,) * n, dtype=bool)
            kid_e = []
            for P in kids:
                loc = tuple(slice(a - q, b - q) for a, b, q in zip(P.lo, P.hi, Q.lo))
                EQ[loc] = False
                kid_e.append(int(E[loc].sum()))
            fam.add(Q, EQ)
            nodes.append(NodeRecord(Q, alpha, int(E.sum()), tuple(kids), tuple(kid_e)))
            nxt.extend(kids)
        frontier = nxt
    lattices: dict[int, SparseFamily] = {}
    for Q, EQ in fam:
        R = Q.dilate3()
        big = np.zeros((R.side_cells,) * n, dtype=bool)
        loc = tuple(slice(a - r, a - r + Q.side_cells) for a, r in zip(Q.lo, R.lo))
        big[loc] = EQ
        lattices.setdefault(R.lattice, SparseFamily(grid, 0.5 / 3**n)).add(R, big)
    return SparseDominationReport(fam, dict(sorted(lattices.items())), nodes, float(C_T), cert,
                                  tuple(float(h) for h in H), float(nrm))


# ---------------------------------------------------------------------------
# sparse operators


def sparse_eval(S: SparseFamily, A: YoungFunction, spec: CommutatorSpec, f: ScalarField,
                gamma) -> ScalarField:
    """sum_{Q in S} prod_{gamma_s = 1} |b_s(x) - <b_s>_Q|
    * ||prod_{gamma_s = 0} (b_s - <b_s>_Q) f||_{A,Q} chi_Q(x)."""
    bs = spec.fields()
    gamma = tuple(int(x) for x in gamma)
    if len(gamma) != len(bs):
        raise ValueError(f"gamma has length {len(gamma)}, expected m = {len(bs)}")
    grid = S.grid
    out = np.zeros(grid.shape)
    groups: dict[tuple[int, int], list[Cube]] = {}
    for Q in S.cubes:
        groups.setdefault((Q.lattice, Q.level), []).append(Q)
    for key in sorted(groups):
        cubes = groups[key]
        F = np.stack([Q.restrict(f.values).ravel() for Q in cubes])
        inner = F.copy()
        outer = np.ones_like(F)
        for s, b in enumerate(bs):
            B = np.stack([Q.restrict(b).ravel() for Q in cubes])
            D = B - B.mean(axis=1, keepdims=True)
            if gamma[s]:
                outer = outer * np.abs(D)
            else:
                inner = inner * D
        norms = luxemburg(inner, A)
        vals = outer * norms[:, None]
        for Q, v in zip(cubes, vals):
            out[Q.slices] += v.reshape((Q.side_cells,) * grid.n)
    return ScalarField(grid, out)


def sparse_sum(report: SparseDominationReport, A: YoungFunction, spec: CommutatorSpec,
               f: ScalarField) -> ScalarField:
    """sum_j sum_gamma A^gamma_{A, S_j}(b, f)."""
    m = len(spec.fields())
    total = np.zeros(f.grid.shape)
    for j, S in report.lattices.items():
        for gamma in itertools.product((0, 1), repeat=m):
            total += sparse_eval(S, A, spec, f, gamma).values
    return ScalarField(f.grid, total)


def domination_check(K: Kernel, spec: CommutatorSpec, f: ScalarField, A: YoungFunction,
                     report: SparseDominationReport, Q0: Cube | None = None) -> CheckReport:
    """|T_b f(x)| against the sparse sum at every cell of Q0."""
    Q0 = report.family.cubes[0] if Q0 is None else Q0
    lhs = np.abs(commutator_apply(K, spec, f).values)[Q0.slices].ravel()
    rhs = sparse_sum(report, A, spec, f).values[Q0.slices].ravel()
    cells = np.arange(Q0.n_cells)
    return CheckReport("sparse_domination", lhs, rhs, params={"cell": cells},
                       notes=f"C_T = {report.C_T!r}; constant excludes C_T")


def domination_report(K: Kernel, spec: CommutatorSpec, f: ScalarField, A: YoungFunction,
                      report: SparseDominationReport | None = None,
                      Q0: Cube | None = None) -> float:
    """sup over cells of Q0 of |T_b f| / (sparse sum); 0/0 counts as 0, x/0 as inf."""
    if report is None:
        if Q0 is None:
            raise ValueError("need Q0 or a built report")
        report = build_sparse_family(K, spec, f, Q0, A)
    rep = domination_check(K, spec, f, A, report, Q0)
    r = ratios(rep.lhs, rep.rhs)
    return float(r.max()) if r.size else 0.0


# ---------------------------------------------------------------------------
# default corpus


@dataclass
class Corpus:
    grid: Grid
    kernel: Kernel
    spec: CommutatorSpec
    f: ScalarField
    Q0: Cube
    A: YoungFunction
    extra: dict = field(default_factory=dict)


SYMBOL_CENTERS = (0.4, 0.3, 0.45)


def default_corpus(depth: int, m: int = 0, n: int = 1, kernel: str | None = None,
                   young: YoungFunction | None = None) -> Corpus:
    """Root [0,1)^n, Q0 = [1/4,1/2)^n, f a cos^2 bump filling 3Q0,
    b_i = log|x - x_i| (BMO), Hilbert-type kernel in 1D, cos(2 theta)/|x|^2 in 2D."""
    grid = Grid(n, depth)
    Q0 = Cube(0, 2, (1,) * n, grid)
    f = bump(grid, center=(0.375,) * n, radius=0.375)
    if m > len(SYMBOL_CENTERS):
        raise ValueError(f"default corpus has at most {len(SYMBOL_CENTERS)} symbols")
    bs = tuple(log_singular(grid, x0=(c,) * n if n > 1 else c) for c in SYMBOL_CENTERS[:m])
    K = make_kernel(kernel or ("hilbert" if n == 1 else "homogeneous2d"))
    A = young if young is not None else make_young("llog", alpha=1.0)
    return Corpus(grid, K, CommutatorSpec(bs), f, Q0, A)
