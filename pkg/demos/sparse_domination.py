"""Sparse domination of a commutator [b, H] on the default corpus.

Builds the stopping family at Q0 = [1/4, 1/2), prints the recursion log and
the constant sup |T_b f| / (sparse sum) at two depths.

Run:  python demos/sparse_domination.py
"""
import time

from sparsedom.sparse import build_sparse_family, default_corpus, domination_report

for m in (0, 1, 2):
    print(f"--- m = {m} symbol(s) b_i = log|x - x_i|, Hilbert kernel, A = t log(e+t)")
    for J in (9, 11):
        t0 = time.perf_counter()
        c = default_corpus(J, m)
        rep = build_sparse_family(c.kernel, c.spec, c.f, c.Q0, c.A)
        dom = domination_report(c.kernel, c.spec, c.f, c.A, rep)
        s = rep.summary()
        print(f"J={J:>2}: {s['cubes']} cubes, depth {s['depth']}, alpha_max {s['alpha_max']:g}, "
              f"C_T {s['C_T']:.3f}, sparse {s['sparse_ok']}, domination {dom:.4f} "
              f"({time.perf_counter() - t0:.1f}s)")
    # the recursion log of the finer build
    for nd in rep.nodes:
        print(f"    level {nd.cube.level:>2} index {nd.cube.index}: alpha={nd.alpha:g} "
              f"|E|={nd.e_cells} |P|={nd.p_cells} of |Q|={nd.cube.n_cells}")
