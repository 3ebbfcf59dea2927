"""The eleven end-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (visible with pytest -s or on
failure) and asserts both the verdict and the runtime limit.
"""

import pytest

from towerlab import verify


_cache = {}


def run(number):
    if number not in _cache:
        _cache[number] = verify.ALL_CRITERIA[number - 1]()
    result = _cache[number]
    status = "PASS" if result["passed"] else "FAIL"
    print(f"criterion {number}: {status} ({result['seconds']}s) {result['detail']}")
    return result


def test_criterion_01_block_cyclic_suite():
    r = run(1)
    assert r["passed"], r["detail"]
    assert r["seconds"] < 30


def test_criterion_02_symmetric_form_variant_suite():
    r = run(2)
    assert r["passed"], r["detail"]


def test_criterion_03_orbit_facts():
    r = run(3)
    assert r["passed"], r["detail"]
    assert r["seconds"] < 5


def test_criterion_04_twist_rank_pipeline():
    r = run(4)
    assert r["passed"], r["detail"]
    assert r["seconds"] < 1200


def test_criterion_05_towers_verification():
    r = run(5)
    assert r["passed"], r["detail"]
    assert r["seconds"] < 600


def test_criterion_06_null_case():
    r = run(6)
    assert r["passed"], r["detail"]
    assert r["seconds"] < 60


def test_criterion_07_four_monomial_checker():
    r = run(7)
    assert r["passed"], r["detail"]


def test_criterion_08_conductor_parity():
    r = run(8)
    assert r["passed"], r["detail"]
    assert r["seconds"] < 5


def test_criterion_09_zeta_engine():
    r = run(9)
    assert r["passed"], r["detail"]
    assert r["seconds"] < 60


def test_criterion_10_pair_counts():
    r = run(10)
    assert r["passed"], r["detail"]
    assert r["seconds"] < 60


def test_criterion_11_rank_bounds():
    r = run(11)
    assert r["passed"], r["detail"]
