import re

_TITLES = {
    "01": "Chebyshev suite",
    "02": "O_N+ constants",
    "03": "quantum automorphism constants",
    "04": "Fourier-multiplier constants",
    "05": "Clifford verification",
    "06": "depolarizing curvature",
    "07": "K-matrix sharpness",
    "08": "two-point MLSI",
    "09": "q-Gram positivity",
    "10": "CB-return numerics",
    "11": "tensor / commuting square",
    "12": "torus constants",
    "13": "determinism",
}

_results: dict[str, bool] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"::test_(\d\d)_", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.failed:
        ok = report.passed if report.when == "call" else False
        _results[m.group(1)] = _results.get(m.group(1), True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_TITLES):
        if key in _results:
            status = "PASS" if _results[key] else "FAIL"
            terminalreporter.write_line(f"[{status}] criterion {int(key):2d}: {_TITLES[key]}")
