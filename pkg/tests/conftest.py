import pytest

from nernst_casimir.dispersion import GOLD_2, Drude


@pytest.fixture(scope="session")
def gold():
    return Drude(GOLD_2)


@pytest.fixture(scope="session")
def a_um():
    return 1e-6


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Context manager recording one PASS/FAIL line per acceptance criterion."""
    import time
    from contextlib import contextmanager

    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    @contextmanager
    def run(number, title):
        info = {"detail": ""}
        t0 = time.perf_counter()
        try:
            yield info
        except BaseException as exc:
            status, why = "FAIL", f" ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
            raise
        else:
            status, why = "PASS", ""
        finally:
            dt = time.perf_counter() - t0
            line = f"[{status}] {number:>2}. {title}: {info['detail']}{why} [{dt:.1f} s]"
            lines.append((number, line))
            print(line)

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
