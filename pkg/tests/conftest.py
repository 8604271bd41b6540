import pytest

from boolfib.semantics import builtin_matrix
from boolfib.syntax import Signature, parse_formula

_criteria: list[tuple[int, bool, str]] = []


def record_criterion(number: int, passed: bool, detail: str = ""):
    _criteria.append((number, passed, detail))
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_criteria):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def and_or():
    m = builtin_matrix(["and", "or"])
    return m, lambda s: parse_formula(s, m.signature)


def parser_for(*names):
    sig = builtin_matrix(names).signature
    return lambda s: parse_formula(s, sig)


def sig_of(*names) -> Signature:
    return builtin_matrix(names).signature
