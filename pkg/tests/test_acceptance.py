"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Criteria 6, 7 and 10 share cached alpha sweeps and solver certificates, so
this module is meant to run in order (pytest's default).  Run with ``-s`` to
see the per-criterion lines; the CLI ``robinpeaks reproduce`` prints the same
table.
"""

import pytest

from robinpeaks import acceptance


def _check(result):
    print(result.line())
    assert result.passed, result.line()


def test_criterion_1_scaling_identity():
    _check(acceptance.criterion_1())


def test_criterion_2_hardy_positivity():
    _check(acceptance.criterion_2())


def test_criterion_3_truncation_squeeze():
    _check(acceptance.criterion_3())


def test_criterion_4_negative_counts():
    _check(acceptance.criterion_4())


def test_criterion_5_oracles():
    _check(acceptance.criterion_5())


def test_criterion_6_leading_order_law():
    _check(acceptance.criterion_6())


def test_criterion_7_localization():
    _check(acceptance.criterion_7())


def test_criterion_8_sandwiches():
    _check(acceptance.criterion_8())


def test_criterion_9_window_bound():
    _check(acceptance.criterion_9())


def test_criterion_10_certificates():
    _check(acceptance.criterion_10())
