"""Half-plane angle/Green function checks against frozen values and a
finite-difference oracle."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starquant.errors import DomainError
from starquant.halfplane import (TWO_PI, AngleGradient, UHPoint, angle_phi,
                                 dphi, dphi_arrays, dphi_ground_x_array,
                                 dphi_target_arrays, green_psi)

# frozen expected values
PHI_I_2I = 0.0                    # collinear above w: angle closes up
PHI_I_0 = math.pi                 # straight under z
DPHI_I_0 = (-2.0, 0.0, 2.0, 0.0)  # derived: Im/Re of (2i)/(-1) and mirror
PSI_I_2I = math.log(1.0 / 3.0)


def _wrap_diff(a, b):
    """Difference of two angles continued across the 2*pi branch."""
    return ((a - b) + math.pi) % TWO_PI - math.pi


def _dphi_oracle(z, w, h=1e-6):
    """Central finite differences of angle_phi, branch-continued."""
    def d(dz, dw):
        return _wrap_diff(angle_phi(z + dz, w + dw), angle_phi(z - dz, w - dw)) / (2 * h)
    return (d(h, 0), d(1j * h, 0), d(0, h), d(0, 1j * h))


interior = st.tuples(st.floats(-3, 3), st.floats(0.05, 3)).map(lambda t: complex(t[0], t[1]))


class TestAnglePhi:
    def test_above_on_axis(self):
        assert angle_phi(1j, 2j) == pytest.approx(PHI_I_2I, abs=1e-14)

    def test_ground_below(self):
        assert angle_phi(1j, 0) == pytest.approx(PHI_I_0, rel=1e-14)

    def test_boundary_z_limit(self):
        # as z approaches the real axis the angle closes to 0 mod 2*pi
        for x, w in [(0.3, 1 + 1j), (-2.0, 0.5j), (1.5, -1 + 0.25j)]:
            val = angle_phi(complex(x, 1e-9), w)
            assert min(val, TWO_PI - val) < 1e-6

    @given(z=interior, w=interior)
    @settings(max_examples=100)
    def test_range(self, z, w):
        if z in (w, w.conjugate()):
            return
        assert 0.0 <= angle_phi(z, w) < TWO_PI

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            angle_phi(1j, 1j)
        with pytest.raises(DomainError):
            angle_phi(1j, -1j)  # w = conj(z) is below the axis
        with pytest.raises(DomainError):
            angle_phi(0.5, 1j)  # z on the boundary
        with pytest.raises(DomainError):
            angle_phi(1j, complex(0, -0.5))


class TestDphi:
    def test_frozen_value(self):
        g = dphi(1j, 0)
        assert isinstance(g, AngleGradient)
        assert (g.d_zx, g.d_zy, g.d_wx, g.d_wy) == pytest.approx(DPHI_I_0, abs=1e-14)

    def test_against_finite_differences(self):
        pairs = [(1j, 0.5 + 0.25j), (0.3 + 2j, -1 + 1j), (-0.7 + 0.6j, 0.4 + 1.3j),
                 (2j, 1j * 0.3 + 1.0), (0.1 + 0.35j, -0.2 + 0.8j)]
        for z, w in pairs:
            g = dphi(z, w)
            num = _dphi_oracle(z, w)
            assert (g.d_zx, g.d_zy, g.d_wx, g.d_wy) == pytest.approx(num, rel=1e-5, abs=1e-5)

    def test_translation_invariance(self):
        # d/dx_z + d/dx_w = 0 exactly
        g = dphi(0.7 + 1.2j, -0.4 + 0.9j)
        assert g.d_zx + g.d_wx == 0.0

    def test_neumann_on_boundary(self):
        # |d_wy| <= tol * |d_wx| once the target sits on the axis
        for z in (1j, 0.4 + 0.8j, -1.5 + 2.2j):
            for wx in (0.0, 0.7, -2.3):
                g = dphi(z, complex(wx, 1e-7))
                assert abs(g.d_wy) <= 1e-5 * abs(g.d_wx)
            g0 = dphi(z, complex(0.7, 0.0))
            assert g0.d_wy == 0.0

    def test_pole_growth(self):
        # 1/|eps| divergence approaching coincidence
        z = 0.5 + 1j
        norms = []
        for k in range(4, 9):
            eps = 10.0 ** -k
            g = dphi(z, z + eps)
            norms.append(math.hypot(g.d_zx, g.d_zy))
        for a, b in zip(norms, norms[1:]):
            assert b / a == pytest.approx(10.0, rel=0.05)

    def test_closedness_mixed_partials(self):
        # d(dphi) = 0: cross partials of the coefficients agree to O(h^2)
        z, w = 0.3 + 0.9j, -0.5 + 0.7j
        h = 1e-5

        def coeffs(zz, ww):
            g = dphi(zz, ww)
            return np.array([g.d_zx, g.d_zy, g.d_wx, g.d_wy])

        # partial of each coefficient along each of the four directions
        dirs = [(h, 0), (1j * h, 0), (0, h), (0, 1j * h)]
        jac = np.empty((4, 4))
        for j, (dz, dw) in enumerate(dirs):
            jac[:, j] = (coeffs(z + dz, w + dw) - coeffs(z - dz, w - dw)) / (2 * h)
        assert np.allclose(jac, jac.T, atol=1e-6)

    def test_self_wedge_vanishes(self):
        g = dphi(0.2 + 1.4j, 0.9 + 0.5j)
        row = (g.d_zx, g.d_zy)
        assert row[0] * row[1] - row[1] * row[0] == 0.0


class TestGreenPsi:
    def test_frozen_value(self):
        assert green_psi(1j, 2j) == pytest.approx(PSI_I_2I, rel=1e-14)

    @given(z=interior, w=interior)
    @settings(max_examples=100)
    def test_symmetric_and_nonpositive(self, z, w):
        if z == w:
            return
        a, b = green_psi(z, w), green_psi(w, z)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
        assert a <= 0.0

    def test_dirichlet_boundary(self):
        assert green_psi(1j, 0.7) == 0.0
        assert abs(green_psi(0.4 + 1.1j, complex(-0.3, 1e-12))) < 1e-11

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            green_psi(1j, 1j)
        with pytest.raises(DomainError):
            green_psi(0.5, 0.7)
        with pytest.raises(DomainError):
            green_psi(1j, complex(0, -1))


class TestVectorKernels:
    def test_match_scalar(self):
        z = np.array([1j, 0.3 + 0.9j, -0.5 + 2j])
        w = np.array([0.5 + 0.25j, -1 + 1j, 0.4 + 1.3j])
        dzx, dzy = dphi_arrays(z, w)
        dwx, dwy = dphi_target_arrays(z, w)
        for k in range(3):
            g = dphi(complex(z[k]), complex(w[k]))
            assert (dzx[k], dzy[k], dwx[k], dwy[k]) == pytest.approx(
                (g.d_zx, g.d_zy, g.d_wx, g.d_wy), rel=1e-14)

    def test_ground_kernel(self):
        z = np.array([1j, 0.3 + 0.9j])
        t = 0.25
        dwx = dphi_ground_x_array(z, t)
        for k in range(2):
            g = dphi(complex(z[k]), t)
            assert dwx[k] == pytest.approx(g.d_wx, rel=1e-14)


class TestUHPoint:
    def test_interior_flag(self):
        assert UHPoint(0.0, 1.0).interior
        assert not UHPoint(0.5, 0.0).interior

    def test_below_axis_rejected(self):
        with pytest.raises(DomainError):
            UHPoint(0.0, -0.1)

    def test_accepted_by_functions(self):
        assert angle_phi(UHPoint(0, 1), UHPoint(0, 2)) == pytest.approx(0.0, abs=1e-14)
