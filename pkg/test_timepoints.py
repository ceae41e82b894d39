from fractions import Fraction

import pytest

from conftest import make_instance, random_instances
from etsched.errors import BudgetExceeded, PointNotInTheta
from etsched.timepoints import (
    GAMMA, OMEGA, PHI, THETA, build_gamma, build_omega, build_phi, build_points, build_theta,
    gamma_table, phi_size,
)

F = Fraction


def test_omega():
    assert list(build_omega(make_instance((0, 4, 1), (1, 2, 1)))) == [0, 1, 2, 4]
    assert list(build_omega(make_instance((0, 1, 1)))) == [0, 1]
    assert list(build_omega(make_instance((0, 2, 1), (0, 2, 1)))) == [0, 2]


def test_phi_small_cases():
    assert list(build_phi(make_instance((0, 1, 1)))) == [0, 1]
    assert list(build_phi(make_instance((0, 2, 2)))) == [0, F(1, 2), 1, F(3, 2), 2]


def test_phi_matches_generator_definition():
    inst = make_instance((0, 3, 1), (1, 2, 2))
    L, P = inst.span, inst.total_work
    literal = {F(s) + F(h * l, i)
               for s in range(L + 1) for l in range(1, L + 1)
               for i in range(1, P + 1) for h in range(i + 1)
               if F(s) + F(h * l, i) <= L}
    phi = build_phi(inst)
    assert set(phi) == literal
    assert len(phi) == phi_size(L, P)


def test_phi_provenance_reproduces_points():
    phi = build_phi(make_instance((0, 3, 2), (1, 3, 1)))
    for point, (s, l, i, h) in phi.provenance.items():
        assert F(s) + F(h * l, i) == point


def test_phi_cap():
    with pytest.raises(BudgetExceeded):
        build_phi(make_instance((0, 4, 3)), cap=10)


def test_theta_examples():
    assert list(build_theta(make_instance((0, 2, 1), (0, 2, 1)))) == [0, 1, 2]
    assert list(build_theta(make_instance((0, 1, 1)))) == [0, 1]
    assert list(build_theta(make_instance((0, 2, 1), (2, 3, 1)))) == [0, 1, F(3, 2), 2, F(5, 2), 3]


def test_theta_provenance_reproduces_points():
    theta = build_theta(make_instance((0, 3, 1), (1, 5, 1), (2, 4, 1)))
    for point, (a, b, i, h) in theta.provenance.items():
        assert F(a) + F(h * (b - a), i) == point


def test_gamma_examples(two_unit_jobs):
    assert list(build_gamma(F(0), two_unit_jobs)) == [1, 2]
    assert list(build_gamma(F(1), two_unit_jobs)) == [2]
    assert list(build_gamma(F(2), two_unit_jobs)) == []


def test_gamma_rejects_points_outside_theta(two_unit_jobs):
    with pytest.raises(PointNotInTheta):
        build_gamma(F(1, 3), two_unit_jobs)


def test_gamma_table_matches_single_builds():
    inst = make_instance((0, 3, 1), (1, 4, 1))
    table = gamma_table(inst)
    assert set(table) == set(build_theta(inst))
    for point, successors in table.items():
        assert successors == build_gamma(point, inst).points


def test_build_points_dispatch(two_unit_jobs):
    assert build_points(OMEGA, two_unit_jobs).kind == OMEGA
    assert build_points(PHI, two_unit_jobs).kind == PHI
    assert build_points(THETA, two_unit_jobs).kind == THETA
    assert list(build_points(GAMMA, two_unit_jobs, F(0))) == [1, 2]
    with pytest.raises(PointNotInTheta):
        build_points(GAMMA, two_unit_jobs)


@pytest.mark.parametrize("inst", random_instances(25, seed=11, max_n=4, max_time=5, max_work=2))
def test_structure_of_generated_sets(inst):
    omega, phi, theta = build_omega(inst), build_phi(inst), build_theta(inst)
    assert set(omega) <= set(phi)
    assert set(omega) <= set(theta)
    for points in (omega, phi, theta):
        assert list(points) == sorted(set(points))
        assert all(0 <= p <= inst.span for p in points)
    n = inst.n
    assert len(theta) <= len(omega) ** 2 * n * (n + 1) // 2 + len(omega)
    for point, successors in gamma_table(inst).items():
        assert all(s in theta and s > point for s in successors)
