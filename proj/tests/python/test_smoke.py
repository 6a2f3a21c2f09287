import math
import os
import sys

_mod_dir = os.environ.get("PINLAB_MODULE_DIR")
if _mod_dir:
    sys.path.insert(0, os.path.dirname(_mod_dir))
    src = os.environ.get("PINLAB_SOURCE_DIR")
    if src:
        sys.path.insert(0, os.path.join(src, "python"))
    sys.path.insert(0, _mod_dir)

try:
    import _pinlab as pl
except ImportError:  # installed package layout
    import pinlab as pl

EULER_GAMMA = 0.5772156649015329


def test_step_law_and_kernels():
    law = pl.step_law("default")
    rep = pl.validate_step_law(law)
    assert rep.accepted
    assert rep.variance == 1.0
    kt = pl.build_kernel_table(law, 200)
    assert kt.p0[0] == 1.0
    assert abs(kt.K[1] - kt.p0[1]) < 1e-14
    # first-return identity
    n = 150
    s = sum(kt.K[j] * kt.p0[n - j] for j in range(1, n + 1))
    assert abs(s - kt.p0[n]) < 1e-12


def test_continuum_kernels():
    assert abs(pl.heat_kernel(1.0, 0.0) - 1.0 / math.sqrt(2 * math.pi)) < 1e-15
    assert pl.heat_kernel(0.0, 0.0) == 1.0
    assert pl.bm_no_hit(0.5, -0.5) == 0.0
    q = pl.bm_first_hit(0.5, 0.5)
    assert abs(q - 0.5 * math.exp(-0.25) / (math.sqrt(2 * math.pi) * 0.5**1.5)) < 1e-14
    phi = pl.test_fn("gaussian_bump")
    g = pl.pairing(phi, phi, 1.0)
    closed = 0.25 * math.sqrt(2 * math.pi / 1.5)
    assert abs(g - closed) < 1e-7


def test_dickman_and_gtheta():
    assert abs(pl.dickman_density(1.0, 0.5) - math.exp(-EULER_GAMMA)) < 1e-12
    assert pl.dickman_cdf(1.0, 1.0) < 1.0
    g1 = pl.g_theta(0.0, 0.5)
    g2 = pl.g_theta(1.0, 0.5)
    assert g2 > g1 > 0


def test_critical_window_and_chaos():
    law = pl.step_law("default")
    kt = pl.build_return_table(law, 2000)
    dis = pl.disorder_law("gaussian")
    w = pl.solve_critical_beta(dis, 2000, 0.0, kt.R[2000])
    assert w.residual < 1e-14
    target = 1.0 / kt.R[2000]
    assert abs(w.beta - math.sqrt(math.log1p(target))) < 1e-12

    ktK = pl.build_kernel_table(law, 300)
    field = pl.zeta_field(dis, w.beta, 0, 300, 42)
    z = pl.chaos_eval(field, 300, ktK)
    assert z > 0
    # zero disorder -> partition function 1
    zf = pl.zeta_field(dis, 0.0, 0, 300, 42)
    assert abs(pl.chaos_eval(zf, 300, ktK) - 1.0) < 1e-12


def test_polymer_and_ubar():
    law = pl.step_law("default")
    N = 500
    kt = pl.build_return_table(law, N)
    phi = pl.test_fn("gaussian_bump")
    pk = pl.build_polymer_kernels(law, N, phi, phi)
    dis = pl.disorder_law("gaussian")
    zf = pl.zeta_field(dis, 0.0, 0, N, 1)
    assert abs(pl.polymer_integral(zf, pk, kt) - pk.c) < 1e-14
    ub = pl.build_ubar(N, 0.25, kt)
    assert ub.vals[0] == 0.25
    m2 = pl.exact_second_moment(pk, ub)
    assert m2 >= pk.c * pk.c


def test_she_surface():
    rho = pl.Mollifier()
    r = pl.r_of_t(rho, 100.0)
    assert abs(2 * math.pi * 100.0 * r - 1) < 0.05
    v0 = pl.vartheta_from_theta(0.0, rho)
    v1 = pl.vartheta_from_theta(1.0, rho)
    assert abs((v1 - v0) - 1.0 / (2 * math.pi)) < 1e-12


def test_meso_grid_and_enumeration():
    grid = pl.make_meso_grid(1024, 1.0 / 8, 2, 3)
    assert grid.M == 8 and grid.L == 128
    tuples = pl.enumerate_no_triple(16, 2, 3)
    assert [2] in tuples
    for t in tuples:
        assert all(2 <= i <= 14 for i in t)
