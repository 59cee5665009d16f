"""Conformal classification and the polynomial ansatz solver."""

from collections import Counter

import pytest
import sympy as sp

from hidsym.algebra import lie_bracket, match_linear_combination
from hidsym.conformal import (
    AnsatzError,
    ConformalVector,
    NotCKV,
    VectorClass,
    classify,
    conformal_rescale_check,
    solve_ckv_ansatz,
)
from hidsym.expr import Tri, surely_zero
from hidsym.geometry import Chart, Metric
from hidsym.liesym import SymmetryGenerator

t, x, y, z, R, s = sp.symbols("t x y z R s")


@pytest.fixture(scope="module")
def m4():
    return Metric(Chart([t, x, y, z]), sp.diag(1, -1, -1, -1))


@pytest.fixture(scope="module")
def lrs():
    Rs = sp.exp(s * sp.log(R))
    return Metric(Chart([t, R, z, y]), sp.diag(-1, 1, Rs, Rs))


class TestClassify:
    def test_lrs_gradient_kv(self, lrs):
        cv = classify([1, 0, 0, 0], lrs)
        assert isinstance(cv, ConformalVector)
        assert cv.klass is VectorClass.KV
        assert cv.gradient.state is Tri.ZERO
        assert cv.norm_sign == -1  # timelike

    def test_lrs_homothety(self, lrs):
        S = (2 - s) / 2
        cv = classify([t, R, S * z, S * y], lrs)
        assert cv.klass is VectorClass.HV
        assert cv.psi == 1
        assert cv.gradient.state is Tri.NONZERO  # non-gradient for generic s

    def test_lrs_s2_special_ckv(self):
        g = Metric(Chart([t, R, z, y]), sp.diag(-1, 1, R**2, R**2))
        cv = classify([(t**2 + R**2) / 2, t * R, 0, 0], g)
        assert cv.klass is VectorClass.SP_CKV
        assert cv.psi == t

    def test_not_ckv(self, m4):
        res = classify([t**2, 0, 0, 0], m4)
        assert isinstance(res, NotCKV)

    def test_scaling_property(self, m4):
        xi = [sp.Rational(1, 2) * (t**2 + x**2 + y**2 + z**2), t * x, t * y, t * z]
        cv = classify(xi, m4)
        cv3 = classify([3 * c for c in xi], m4)
        assert cv3.klass is cv.klass is VectorClass.SP_CKV
        assert surely_zero(cv3.psi - 3 * cv.psi)


class TestAnsatz:
    def test_m4_conformal_algebra_partition(self, m4):
        cvs = solve_ckv_ansatz(m4, 2)
        assert len(cvs) == 15
        counts = Counter(cv.klass for cv in cvs)
        assert counts[VectorClass.KV] == 10
        assert counts[VectorClass.HV] == 1
        assert counts[VectorClass.SP_CKV] == 4
        assert counts[VectorClass.PROPER_CKV] == 0
        grad_kvs = [cv for cv in cvs if cv.klass is VectorClass.KV
                    and cv.gradient.state is Tri.ZERO]
        rotations = [cv for cv in cvs if cv.klass is VectorClass.KV
                     and cv.gradient.state is Tri.NONZERO]
        assert len(grad_kvs) == 4 and len(rotations) == 6
        hv = next(cv for cv in cvs if cv.klass is VectorClass.HV)
        assert hv.gradient.state is Tri.ZERO

    def test_m3_lorentzian_dimension(self):
        g = Metric(Chart([t, x, y]), sp.diag(1, -1, -1))
        assert len(solve_ckv_ansatz(g, 2)) == 10

    def test_e2_degree1(self):
        g = Metric(Chart([x, y]), sp.eye(2))
        cvs = solve_ckv_ansatz(g, 1)
        assert len(cvs) == 4  # brute-force dimension check
        counts = Counter(cv.klass for cv in cvs)
        assert counts[VectorClass.KV] == 3 and counts[VectorClass.HV] == 1

    def test_every_returned_vector_reclassifies(self, m4):
        for cv in solve_ckv_ansatz(m4, 2):
            again = classify(cv.xi, m4)
            assert isinstance(again, ConformalVector)
            assert again.klass is cv.klass

    def test_closure_under_bracket_m3(self):
        g = Metric(Chart([t, x, y]), sp.diag(1, -1, -1))
        cvs = solve_ckv_ansatz(g, 2)
        chart = g.chart
        gens = [SymmetryGenerator(chart, cv.xi) for cv in cvs]
        basis = [list(cv.xi) for cv in cvs]
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                Z = lie_bracket(gens[i], gens[j])
                sol = match_linear_combination(list(Z.xi), basis)
                assert sol is not None, (i, j)
                assert all(c.is_Rational for c in sol)

    def test_non_polynomial_metric_rejected(self, lrs):
        with pytest.raises(AnsatzError):
            solve_ckv_ansatz(lrs, 2)

    def test_degree_cap(self, m4):
        with pytest.raises(AnsatzError):
            solve_ckv_ansatz(m4, 5)


class TestRescale:
    def test_kv_becomes_homothety_of_frw(self):
        eta = Metric(Chart([t, x, y]), sp.diag(1, -1, -1))
        chk = conformal_rescale_check([1, 0, 0], eta, sp.exp(t))
        assert chk.psi_base == 0 and chk.class_base is VectorClass.KV
        assert chk.psi_scaled == 1 and chk.class_scaled is VectorClass.HV

    def test_constant_rescale_preserves_kv(self):
        eta = Metric(Chart([x, y]), sp.eye(2))
        chk = conformal_rescale_check([y, -x], eta, sp.Integer(3))
        assert chk.psi_base == 0 and chk.psi_scaled == 0

    def test_homothety_rescale_direct(self):
        eta = Metric(Chart([t, x, y]), sp.diag(1, -1, -1))
        chk = conformal_rescale_check([t, x, y], eta, sp.exp(t))
        # direct Lie derivative gives psi = 1 + t for N = e^t, xi = H
        assert surely_zero(chk.psi_scaled - (1 + t))
