"""The acceptance battery, one test per criterion.

Each criterion runs at its pinned tolerance and runtime budget and prints
its own pass/fail line; ``mixedsums verify --full`` runs the same battery
from the command line.  The rational-angle contrast is a documented
expected failure (strict xfail): the measured ratio rises at the x = r
endpoint instead of falling.
"""

import pytest

from mixedsums import acceptance


def _check(result):
    print(result.line())
    assert result.passed, f"{result.cid} failed: {result.details}"
    assert result.within_budget, f"{result.cid} overran its budget: {result.runtime:.1f}s > {result.budget}s"


def test_second_moment_exactness():
    _check(acceptance.second_moment_exactness())


def test_poisson_identity():
    _check(acceptance.poisson_identity())


def test_fourth_moment_bridge():
    _check(acceptance.fourth_moment_bridge())


def test_quadruple_folding_injectivity():
    _check(acceptance.quadruple_folding_injectivity())


def test_product_congruence_counts():
    _check(acceptance.product_congruence_counts())


def test_pigeonhole_box():
    _check(acceptance.pigeonhole_box())


def test_surface_sweep_stability():
    _check(acceptance.surface_sweep_stability())


def test_first_moment_window():
    _check(acceptance.first_moment_window())


@pytest.mark.xfail(
    strict=True,
    reason="at x = r the sum collapses to a few fixed-modulus phasors with "
    "character-driven phases, so the measured ratio rises (~0.89 -> ~0.95) "
    "instead of falling; the suppression regime needs x and r/x to grow together",
)
def test_rational_contrast():
    _check(acceptance.rational_contrast())


def test_offdiag_decomposition():
    _check(acceptance.offdiag_decomposition())


def test_dyadic_tail_numerics():
    _check(acceptance.dyadic_tail_numerics())
