import os
import sys

import pytest
from hypothesis import settings

from plane_germs.parser import parse_germ

settings.register_profile("default", deadline=None, derandomize=True, max_examples=40)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def xy(text):
    return parse_germ(text)


def uv(text):
    return parse_germ(text, ("u", "v"))


@pytest.fixture
def P():
    return xy


@pytest.fixture
def Q():
    return uv


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
