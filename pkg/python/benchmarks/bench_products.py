"""Timings for the product table and the associativity suite.

Run with ``pytest python/benchmarks/bench_products.py --benchmark-only``.
A fresh datum is loaded for every round so cached obstruction classes
and structure constants are rebuilt.
"""

from pathlib import Path

import pytest

from orbistar import load, product_table, run_suite
from orbistar.stringy import Theory

CORPUS = Path(__file__).resolve().parents[2] / "corpus"


def _fresh(name):
    return (load(CORPUS / f"{name}.json"),), {}


@pytest.mark.parametrize("theory", [Theory.CHOW, Theory.KTHEORY], ids=["chow", "k"])
def test_product_table_quadric(benchmark, theory):
    table = benchmark.pedantic(
        lambda datum: product_table(datum, theory), setup=lambda: _fresh("p1p1_swap"), rounds=5
    )
    assert len(table) == 6


def test_invariant_table_kummer(benchmark):
    table = benchmark.pedantic(
        lambda datum: product_table(datum, Theory.CHOW, invariant=True), setup=lambda: _fresh("kummer"), rounds=3
    )
    assert len(table) == 24


def test_associativity_s3(benchmark):
    reports = benchmark.pedantic(
        lambda datum: run_suite(datum, "assoc", [Theory.CHOW]), setup=lambda: _fresh("bg_s3"), rounds=3
    )
    assert all(r.passed for r in reports)


def test_associativity_kummer(benchmark):
    reports = benchmark.pedantic(
        lambda datum: run_suite(datum, "assoc", [Theory.CHOW]), setup=lambda: _fresh("kummer"), rounds=1
    )
    assert all(r.passed for r in reports)
