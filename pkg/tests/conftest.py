import logging
import os
import sys
from functools import lru_cache

import pytest

MODULES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "Modules")
if MODULES_DIR not in sys.path:
    sys.path.insert(0, MODULES_DIR)

import GnumericsSL  # noqa: E402
import GsolverSL  # noqa: E402


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep tests away from the project's config.json and the caller's env."""
    monkeypatch.setenv("SHALLIT_CONFIG", str(tmp_path / "config.json"))
    monkeypatch.delenv("SHALLIT_DIGITS", raising=False)
    monkeypatch.delenv("SHALLIT_WORKERS", raising=False)
    return tmp_path / "config.json"


@pytest.fixture(autouse=True)
def restore_root_logger():
    """setup_logging replaces root handlers; put pytest's back afterwards."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    for handler in handlers:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level)


@pytest.fixture
def ctx60():
    return GnumericsSL.PrecCtx(60)


@pytest.fixture
def plastic(ctx60):
    """Real root of p^3 - p - 1, the n = 2 starting value."""
    mp = ctx60.mp
    return mp.findroot(lambda p: p ** 3 - p - 1, mp.mpf("1.3247"))


@lru_cache(maxsize=None)
def _solution(n, digits, refine):
    return GsolverSL.solve(n, GnumericsSL.PrecCtx(digits), refine=refine)


@pytest.fixture(scope="session")
def solved():
    """solved(n, digits=60, refine=False) -> Solution, cached for the session."""
    def get(n, digits=60, refine=False):
        return _solution(n, digits, refine)
    return get
