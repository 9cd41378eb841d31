import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heconet.config import DEFAULT_TOLERANCES
from heconet.leontief import (NonProductiveEconomyError, SquareEio,
                              coefficients_from_flows, leontief_inverse,
                              solve, spectral_radius)

from conftest import ECONOMY_M_MINUS, ECONOMY_Y
from oracles import eig_radius, neumann_output


def test_coefficients_one_sector():
    a = coefficients_from_flows(np.array([[2.0]]), np.array([4.0]))
    assert np.array_equal(a, [[0.5]])


def test_coefficients_reject_nonpositive_output():
    with pytest.raises(ValueError, match="sector 1"):
        coefficients_from_flows(np.ones((2, 2)), np.array([3.0, 0.0]))
    with pytest.raises(ValueError):
        coefficients_from_flows(np.ones((1, 1)), np.array([-2.0]))


def test_spectral_radius_against_eigenvalues():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = rng.integers(1, 6)
        a = rng.random((n, n)) * rng.random()
        assert spectral_radius(a) == pytest.approx(eig_radius(a), abs=1e-8)


def test_spectral_radius_periodic_structure():
    # permutation-like matrix: power iteration needs the +I shift
    a = np.array([[0.0, 0.9], [0.9, 0.0]])
    assert spectral_radius(a) == pytest.approx(0.9, abs=1e-9)


def test_inverse_identity_for_zero_coefficients():
    assert np.allclose(leontief_inverse(np.zeros((3, 3))), np.eye(3))


def test_inverse_known_two_sector():
    a = np.array([[0.2, 0.3], [0.4, 0.1]])
    b = leontief_inverse(a)
    assert np.allclose(b @ (np.eye(2) - a), np.eye(2), atol=1e-12)
    assert np.all(b >= 0)


def test_nonproductive_rejected():
    with pytest.raises(NonProductiveEconomyError) as err:
        leontief_inverse(np.array([[1.0]]))
    assert err.value.radius >= 1.0
    with pytest.raises(NonProductiveEconomyError):
        leontief_inverse(np.array([[0.5, 0.6], [0.6, 0.5]]))


def test_productivity_margin_boundary():
    with pytest.raises(NonProductiveEconomyError):
        leontief_inverse(np.array([[1.0 - 5e-10]]))
    b = leontief_inverse(np.array([[1.0 - 1e-6]]))
    assert b[0, 0] == pytest.approx(1e6, rel=1e-6)


def test_solve_passthrough_economy():
    eio = SquareEio(a=np.zeros((3, 3)), f=np.eye(3))
    y = np.array([1.0, 2.0, 3.0])
    x, phi = solve(eio, y)
    assert np.allclose(x, y)
    assert np.allclose(phi, y)


def test_solve_three_sector_collapse():
    # one-technology-per-sector economy: columns 1, 2, 4 of the
    # six-technology coefficient block
    cols = [0, 1, 3]
    a = ECONOMY_M_MINUS[:3][:, cols]
    f = ECONOMY_M_MINUS[3:][:, cols]
    eio = SquareEio(a=a, f=f, labels=("man", "cons", "ag"),
                    factor_labels=("capital", "water"))
    x, phi = solve(eio, ECONOMY_Y)
    b = leontief_inverse(a)
    assert np.allclose(x, b @ ECONOMY_Y, atol=1e-10)
    assert np.allclose(x, neumann_output(a, ECONOMY_Y), atol=1e-8)
    assert np.allclose(phi, f @ x, atol=1e-12)


def test_solve_validates_demand():
    eio = SquareEio(a=np.zeros((2, 2)), f=np.ones((1, 2)))
    with pytest.raises(ValueError):
        solve(eio, np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        solve(eio, np.array([1.0, 2.0, 3.0]))


def test_square_eio_validation():
    with pytest.raises(ValueError):
        SquareEio(a=np.zeros((2, 3)), f=np.zeros((1, 2)))
    with pytest.raises(ValueError):
        SquareEio(a=np.full((1, 1), -0.1), f=np.zeros((1, 1)))
    with pytest.raises(ValueError):
        SquareEio(a=np.zeros((2, 2)), f=np.zeros((1, 3)))
    with pytest.raises(ValueError):
        SquareEio(a=np.zeros((2, 2)), f=np.zeros((1, 2)), labels=("only-one",))


def test_square_eio_defaults_and_readonly():
    eio = SquareEio(a=np.zeros((2, 2)), f=np.zeros((1, 2)))
    assert eio.labels == ("s1", "s2")
    assert eio.factor_labels == ("f1",)
    with pytest.raises(ValueError):
        eio.a[0, 0] = 1.0


def test_caller_array_not_mutated():
    a = np.zeros((2, 2))
    SquareEio(a=a, f=np.zeros((1, 2)))
    a[0, 0] = 0.5         # must stay writable: constructor copies
    assert a[0, 0] == 0.5


@given(st.integers(1, 4), st.floats(0.05, 0.85), st.integers(0, 2 ** 31 - 1))
@settings(max_examples=40, deadline=None)
def test_solve_matches_series_on_random_productive(n, target, seed):
    rng = np.random.default_rng(seed)
    a = rng.random((n, n))
    rho = eig_radius(a)
    if rho > 0:
        a *= target / rho
    y = rng.random(n) * 5
    eio = SquareEio(a=a, f=np.ones((1, n)))
    x, phi = solve(eio, y)
    assert np.allclose(x, neumann_output(a, y, terms=2000), atol=1e-6)
    assert phi[0] == pytest.approx(float(np.sum(x)), abs=1e-9)
