"""Radial densities and Renyi entropies of Steinhaus sums."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from steinhaus.entropy import (
    GridSpec,
    radial_density,
    renyi_gaussian,
    renyi_pair,
    renyi_steinhaus,
    verify_renyi_upper,
)
from steinhaus.errors import DomainError
from steinhaus.verifier import Verdict

ORDERS = (0.25, 0.5, 0.75, 1.0)


def equal(n):
    return np.full(n, n**-0.5)


@pytest.mark.parametrize(
    "a",
    [equal(2), [0.8, 0.6], equal(3), [0.7, 0.5, 0.3], equal(4), [0.6, 0.5, 0.4, 0.3, 0.2], equal(8)],
    ids=["eq2", "pair", "eq3", "three", "eq4", "five", "eq8"],
)
def test_density_mass_positivity_and_second_moment(a):
    d = radial_density(a)
    assert d.mass_error <= 1e-6
    assert np.all(d.values >= 0)
    assert d.second_moment == pytest.approx(float(np.sum(np.square(a))), abs=1e-5)
    assert d.inner_radius - 1e-12 <= np.min(d.grid) and np.max(d.grid) <= d.tail_radius + 1e-12


def test_density_matches_histogram():
    a = np.array([0.6, 0.5, 0.4, 0.3])
    d = radial_density(a)
    rng = np.random.default_rng(4)
    z = np.exp(2j * np.pi * rng.random((400_000, a.size))) @ a
    r = np.abs(z)
    edges = np.linspace(0.2, 1.6, 8)
    counts, _ = np.histogram(r, edges)
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        inside = (d.grid >= lo) & (d.grid < hi)
        prob = float(np.sum(d.area_weights[inside] * d.values[inside]))
        assert abs(c / r.size - prob) < 5 * np.sqrt(prob / r.size) + 5e-3


@settings(max_examples=20)
@given(st.floats(0.1, 1.0), st.floats(0.1, 1.0), st.sampled_from(ORDERS))
def test_pair_closed_form_against_grid(a1, a2, p):
    d = radial_density([a1, a2])
    if p == 1:
        grid = -d.integrate(lambda f, r: f * np.log(f))
    else:
        grid = np.log(d.integrate(lambda f, r: f**p)) / (1 - p)
    assert renyi_pair(a1, a2, p) == pytest.approx(grid, abs=1e-6)


@pytest.mark.parametrize("a", [[0.8, 0.6], equal(3), [0.6, 0.5, 0.4, 0.3, 0.2]])
def test_renyi_nonincreasing_in_order(a):
    d = radial_density(a)
    h = [renyi_steinhaus(a, p, density=d) for p in (0.0, 0.25, 0.5, 0.75, 1.0)]
    assert np.all(np.diff(h) <= 1e-9)


def test_order_zero_is_log_support_area():
    rng = np.random.default_rng(9)
    for a in ([0.8, 0.6], [0.9, 0.3, 0.3], [0.5, 0.5, 0.5, 0.5]):
        a = np.asarray(a) / np.linalg.norm(a)
        r = np.abs(np.exp(2j * np.pi * rng.random((200_000, a.size))) @ a)
        R = a.sum()
        r_in = max(0.0, 2 * a.max() - R)
        assert r.max() <= R + 1e-12 and r.min() >= r_in - 1e-12
        assert r.max() > R - 0.05 and r.min() < r_in + 0.05
        assert renyi_steinhaus(a, 0.0) == pytest.approx(np.log(np.pi * (R * R - r_in * r_in)), rel=1e-14)


def test_gaussian_closed_form_limits():
    assert renyi_gaussian(1.0) == pytest.approx(np.log(np.pi * np.e), rel=1e-15)
    assert renyi_gaussian(1 - 1e-7) == pytest.approx(renyi_gaussian(1.0), abs=1e-6)
    assert renyi_gaussian(0.0) == np.inf
    assert renyi_gaussian(0.5) == pytest.approx(np.log(4 * np.pi), rel=1e-15)


def test_gaussian_against_plane_integration():
    f = lambda y, x: (np.exp(-(x * x + y * y)) / np.pi) ** 0.5  # noqa: E731
    val, err = integrate.dblquad(f, -14.0, 14.0, -14.0, 14.0, epsabs=1e-13, epsrel=1e-13)
    assert abs(2 * np.log(val) - renyi_gaussian(0.5)) <= 1e-6


def test_domain_errors():
    with pytest.raises(DomainError):
        renyi_steinhaus([1.0], 0.5)
    with pytest.raises(DomainError):
        radial_density([1.0])
    with pytest.raises(DomainError):
        renyi_steinhaus(equal(2), 1.5)
    with pytest.raises(DomainError):
        renyi_pair(0.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        GridSpec(order=0)


def test_gaussian_dominates_and_gap_shrinks():
    r = verify_renyi_upper([equal(n) for n in (2, 4, 8, 16)], ORDERS)
    assert r.verdict is Verdict.VERIFIED
    ent = r.extra["entropies"]
    for p in ORDERS:
        gaps = [renyi_gaussian(p) - row[p] for row in ent]
        assert np.all(np.diff(gaps) < 0)
        assert gaps[-1] > 0


@settings(max_examples=10)
@given(st.lists(st.floats(0.1, 1.0), min_size=2, max_size=5))
def test_gaussian_dominance_random(a):
    a = np.asarray(a) / np.linalg.norm(a)
    d = radial_density(a) if a.size > 2 else None
    for p in ORDERS:
        assert renyi_steinhaus(a, p, density=d) <= renyi_gaussian(p) + 1e-4
