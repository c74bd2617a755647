import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from edgespec.generators import corpus, leafy_corpus

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CORPUS = corpus()
LEAFY = leafy_corpus()


@pytest.fixture(params=sorted(CORPUS), scope="session")
def corpus_graph(request):
    return request.param, CORPUS[request.param]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
