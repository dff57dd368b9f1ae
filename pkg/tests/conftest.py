"""Prints one PASS/FAIL line per acceptance criterion after the run."""
import re

_CRITERIA = {
    1: "qubit counts for the reported dimension grid",
    2: "iteration counts for the reported dimension grid",
    3: "three-solution regime at n=8, one iteration",
    4: "no-solution uniformity at n=8",
    5: "overshoot regime at n=8 with five solutions, plus dual mode",
    6: "oracle phase pattern on 200 random instances",
    7: "uncompute round trips on exhaustive basis inputs",
    8: "end-to-end verification of 200 seeded 16x16 products",
    9: "lowering equivalence on random multi-controlled circuits",
}

_results: dict[int, str] = {}

_PATTERN = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    match = _PATTERN.search(report.nodeid)
    if not match:
        return
    num = int(match.group(1))
    if report.when == "call":
        _results[num] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _results[num] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(_results):
        outcome = _results[num].upper().replace("PASSED", "PASS").replace("FAILED", "FAIL")
        label = _CRITERIA.get(num, "")
        terminalreporter.write_line(f"criterion {num} ({label}): {outcome}")
