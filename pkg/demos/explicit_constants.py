"""The explicit constants: C_eps, beta_{m,l1,l2} and the K_phi integrals.

K_phi is an improper integral over [1, inf) whose integrand decays only
through iterated logarithms; it is evaluated in log-log variables over
doubling windows, and a window sum that stops shrinking is reported as
divergent.

Run:  python demos/explicit_constants.py
"""
from sparsedom.verify import Phi, beta_const, c_eps, k_phi, phi_family
from sparsedom.young import make_young

print("C_eps (blows up like 2 / eps^(1+eps))")
for eps in (1.0, 0.5, 0.25, 0.125, 0.0625):
    print(f"  eps={eps:<7} m=0: {c_eps(eps):10.4f}   m=1: {c_eps(eps, 1):10.4f}")

print("\nbeta_{m,l1,l2} at eps = 1/2")
for m, l1, l2, r in ((1, 1, 0, 1.6), (2, 1, 0, 1.6), (2, 2, 0, 1.35), (2, 2, 1, 1.35)):
    print(f"  m={m} l1={l1} l2={l2} r={r}: {beta_const(m, l1, l2, r, eps=0.5):.10f}")

print("\nK_phi integral, phi = t log(e+t) log^(1+eps)(e + log(e+t)), A = t log(e+t)")
for eps in (0.5, 0.25, 0.125, 0.0625):
    res = k_phi(phi_family(1, 1, 1, eps), Phi(1), 1, 1, 1)
    print(f"  eps={eps:<7} {res.value:.12f}  eps*K={eps * res.value:.6f}  tail={res.tail:.1e}")

res = k_phi(make_young("power", r=1.0), Phi(0), 0, 0, 0)
print(f"\nphi(t) = t, m = 0: divergent={res.divergent}, partial sum {res.partial:.3f} "
      f"up to log log t = {res.v_max:g}, windows {[round(x, 3) for x in res.windows]}")
