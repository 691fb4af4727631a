"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_outcomes = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    report = (yield).get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, summary = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        prev = _outcomes.get(number, ("PASS", summary, ""))[0]
        # a criterion split across several tests fails if any part fails
        if prev == "FAIL":
            status = "FAIL"
        detail = "; ".join(v for k, v in item.user_properties if k == "measured")
        prev_detail = _outcomes.get(number, ("", "", ""))[2]
        detail = "; ".join(d for d in (prev_detail, detail) if d)
        _outcomes[number] = (status, summary, detail)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        status, summary, detail = _outcomes[number]
        line = f"criterion {number:>2}: {status}  {summary}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)


@pytest.fixture(scope="session")
def j100_rows():
    """Time-averaged observables along h at j = 100 for gamma = 0.2 and 0.8 (default grids)."""
    import os

    import numpy as np

    from lmg_asymmetry.cli import DEFAULT_GRID
    from lmg_asymmetry.sweep import PointTask, evaluate_point, grid_from_spec, parallel_map

    h = grid_from_spec(DEFAULT_GRID)
    rows = {"h": h}
    for gamma in (0.2, 0.8):
        tasks = [PointTask(twice_j=200, gamma=gamma, h=float(x), generators=("z",)) for x in h]
        res = parallel_map(tasks, evaluate_point, os.cpu_count() or 1)
        rows[gamma] = {
            key: np.array([r[col] for r in res])
            for key, col in (("order", "order_parameter"), ("fz", "asymmetry_z"), ("bound", "entropy_bound"))
        }
    return rows
