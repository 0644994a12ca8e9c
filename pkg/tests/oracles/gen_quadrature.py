"""Regenerate the frozen high-precision values used by test_quadrature.py.

Everything here is evaluated with mpmath at 40 digits straight from the
defining formulas (inverses by root-finding on the Young function itself),
independently of the log-space deficit machinery in the package.

    python tests/oracles/gen_quadrature.py           # everything
    python tests/oracles/gen_quadrature.py branch    # off-diagonal K_phi only
"""
import mpmath as mp

mp.mp.dps = 40
E = mp.e


def Phi(i):
    return lambda t: t * mp.log(E + t) ** i


def phi(alpha, beta):
    return lambda t: t * mp.log(E + t) ** alpha * mp.log(E + mp.log(E + t)) ** beta


def inv(F, x):
    """F^{-1}(x) for increasing F, solved in log t."""
    if x == 0:
        return mp.mpf(0)
    lx = mp.log(x)
    s = mp.findroot(lambda s: mp.log(F(mp.exp(s))) - lx, lx)
    return mp.exp(s)


def c_eps(eps, m=0):
    l2e = mp.log(2 * E)
    return E * l2e**m * mp.log(E + l2e) ** (1 + eps) + 2 ** (1 + eps) * (1 + 1 / eps) ** (1 + eps)


def beta(m, l1, l2, r, eps, n=1):
    r = mp.mpf(r)
    a = 0
    while r**a < 3 * 2**n * E:
        a += 1
    A, ph, P = Phi(m - l1), phi(m - l1 + l2, 1 + eps), Phi(l1 - l2)
    tot = mp.mpf(0)
    for k in range(1, a + 1):
        alpha = min(mp.mpf(1), mp.exp(1 - r**k / (2**n * E)))
        x = inv(P, 1 / alpha)
        tot += r ** (l2 * k) * A(mp.mpf(4) ** k) * inv(ph, x) / (mp.mpf(4) ** k * x)
    return tot


def kphi_mm(m, eps):
    """int_1^inf phi^-1(t) Phi_m(log^2(e+t)) / (t^2 log^3(e+t)) dt.

    Evaluated in u = log t (and u = exp(v) beyond u = 1) at 100 digits, so
    t itself never has to be formed; phi^-1(e^u) = e^(u - d) with d the fixed
    point of d = log(phi(e^(u-d)) / e^(u-d)).
    """
    with mp.workdps(100):
        beta = 1 + mp.mpf(eps)

        def log_lE(s):  # log(e + e^s) without forming e^s for large s
            return s + mp.log1p(mp.exp(1 - s)) if s > 1 else mp.log(E + mp.exp(s))

        def F_u(u):  # F(t) t, t = e^u
            d = mp.mpf(0)
            for _ in range(200):
                L = log_lE(u - d)
                nd = m * mp.log(L) + beta * mp.log(mp.log(E + L))
                if abs(nd - d) < mp.mpf(10) ** -90:
                    break
                d = nd
            L = log_lE(u)
            return mp.exp(-d) * Phi(m)(L**2) / L**3

        head = mp.quad(F_u, [0, 1])
        body = mp.quad(lambda v: F_u(mp.exp(v)) * mp.exp(v),
                       [0, 1, 2, 4, 8, 16, 32, 64, 128, 256])
        return head + body


def kphi_branch(m, l1, l2, eps):
    """int_1^inf phi^-1(Phi_(l1-l2)^-1(t)) Phi_(m-l1)(log^(2l1+1)(e+t)) / (t^2 log^(l1+2)(e+t)) dt."""
    with mp.workdps(100):
        alpha, beta, i = m - l1 + l2, 1 + mp.mpf(eps), l1 - l2

        def log_lE(s):
            return s + mp.log1p(mp.exp(1 - s)) if s > 1 else mp.log(E + mp.exp(s))

        def deficit(u, excess):
            d = mp.mpf(0)
            for _ in range(400):
                nd = excess(u - d)
                if abs(nd - d) < mp.mpf(10) ** -90:
                    break
                d = nd
            return d

        def F_u(u):
            d1 = deficit(u, lambda s: i * mp.log(log_lE(s)))
            x = u - d1  # log Phi^-1(e^u)
            d2 = deficit(x, lambda s: alpha * mp.log(log_lE(s))
                         + beta * mp.log(mp.log(E + log_lE(s))))
            L = log_lE(u)
            # phi^-1(Phi^-1(t)) / t = e^(-d1 - d2); never form x - u, u reaches e^256
            return mp.exp(-d1 - d2) * Phi(m - l1)(L ** (2 * l1 + 1)) / L ** (l1 + 2)

        head = mp.quad(F_u, [0, 1])
        body = mp.quad(lambda v: F_u(mp.exp(v)) * mp.exp(v),
                       [0, 1, 2, 4, 8, 16, 32, 64, 128, 256])
        return head + body


if __name__ == "__main__":
    import sys
    if sys.argv[1:] == ["branch"]:
        for args in ((2, 1, 0), (3, 2, 1)):
            print(f"    {args}: {mp.nstr(kphi_branch(*args, mp.mpf(0.5)), 15)},", flush=True)
        sys.exit()
    print("c_eps")
    for eps in (1, 0.5, 0.25, 0.125):
        for m in (0, 1, 2):
            print(f"    ({eps!r}, {m}): {mp.nstr(c_eps(mp.mpf(eps), m), 20)},")
    print("beta")
    for args in ((1, 1, 0, 1.6), (2, 1, 0, 1.6), (2, 2, 0, 1.35), (2, 2, 1, 1.35)):
        print(f"    {args}: {mp.nstr(beta(*args, eps=mp.mpf(0.5)), 20)},")
    print("k_phi (m, m) branch, m = 1")
    for eps in (0.5, 0.25, 0.125, 0.0625):
        print(f"    {eps!r}: {mp.nstr(kphi_mm(1, mp.mpf(eps)), 15)},")
    print("k_phi (l1, l2) branch")
    for args in ((2, 1, 0), (3, 2, 1)):
        print(f"    {args}: {mp.nstr(kphi_branch(*args, mp.mpf(0.5)), 15)},")
