"""Acceptance gate: one check per criterion, each reported on one line."""

import pytest

from sqwalk import verify

CRITERIA = [
    ("1 grover hitting times", lambda: verify.check_grover_hitting(tol=1e-12, limit=1.0)),
    ("2 closed-form cross-checks", lambda: verify.check_closed_forms(tol=1e-10, limit=5.0)),
    ("3 oracle equivalence", lambda: verify.check_oracle(tol=1e-9, n_graphs=50, n_max=30, limit=60.0)),
    ("4 three-step golden vector", lambda: verify.check_three_step(tol=1e-12, draws=10)),
    ("5 five-step path census", verify.check_five_step_census),
    ("6 path-filter golden vectors", lambda: verify.check_path_filters(order=24)),
    ("7 conservation suite", lambda: verify.check_conservation(tol=1e-9)),
    ("8 two-site coefficients", lambda: verify.check_two_site(tol=1e-10, draws=10)),
]


@pytest.mark.parametrize("label, run", CRITERIA, ids=[c[0].split(" ", 1)[1].replace(" ", "_") for c in CRITERIA])
def test_criterion(label, run, capsys):
    result = run()
    with capsys.disabled():
        print(f"\n[acceptance {label}] {result.line()}")
    assert result.passed, result.line()
