"""High-precision reference values, produced by gen_quadrature.py (mpmath)."""

C_EPS = {
    (1, 0): 21.987955458276731109, (1, 1): 26.138489901499782509, (1, 2): 33.16595559185983439,
    (0.5, 0): 19.612040529652847563, (0.5, 1): 23.01892967368510208,
    (0.5, 2): 28.78729442238359924,
    (0.25, 0): 22.235864196417889868, (0.25, 1): 25.322497178315961745,
    (0.25, 2): 30.548621109040018851,
    (0.125, 0): 30.072005766459852284, (0.125, 1): 33.009983415518163847,
    (0.125, 2): 37.98441198856938053,
}

# beta_{m,l1,l2} at eps = 1/2, keyed by (m, l1, l2, r)
BETA = {
    (1, 1, 0, 1.6): 3.69131773501713666,
    (2, 1, 0, 1.6): 14.646590513308113125,
    (2, 2, 0, 1.35): 6.2138677446512451483,
    (2, 2, 1, 1.35): 33.536242805472245997,
}

# K_phi integral, (m, m) branch with m = 1, keyed by eps
KPHI_MM1 = {0.5: 1.79508102722161, 0.25: 1.97394733246029, 0.125: 2.07412742503889,
            0.0625: 2.12727170789418}

# K_phi integral, l2 < l1 branch at eps = 1/2, keyed by (m, l1, l2)
KPHI_BRANCH = {(2, 1, 0): 3.54508146838283, (3, 2, 1): 12.6437284649971}
