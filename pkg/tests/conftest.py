import sys
from pathlib import Path

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from fsfdesign.core import FilterSpec  # noqa: E402
from fsfdesign.errors import SpecInfeasible  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")


@st.composite
def specs(draw, max_n=64, kinds=("lowpass", "bandpass"), min_t=0):
    """Valid FilterSpecs; geometry drawn to fit the half spectrum."""
    kind = draw(st.sampled_from(kinds))
    expansion = draw(st.sampled_from(("cosine", "sine")))
    low = max(8, 4 * min_t + 6) if kind == "bandpass" else max(4, 2 * min_t + 3)
    n = draw(st.integers(low, max_n))
    half = n // 2 if expansion == "cosine" else (n - 1) // 2
    if kind == "lowpass":
        t = draw(st.integers(min_t, min(4, half - 1)))
        bw = draw(st.integers(1, half - t))
        return FilterSpec(n, bw, t, "lowpass", expansion)
    t = draw(st.integers(min_t, min(4, (half - 2) // 2)))
    bw = draw(st.integers(1, half - 1 - 2 * t))
    m1 = draw(st.integers(0, half - 1 - 2 * t - bw))
    binding = draw(st.sampled_from(("symmetric", "independent")))
    try:
        return FilterSpec(n, bw, t, "bandpass", expansion, m1, binding)
    except SpecInfeasible:  # pragma: no cover - strategy bounds prevent this
        raise


def assignment(draw, spec):
    vals = draw(st.lists(st.floats(0, 1), min_size=spec.num_variables,
                         max_size=spec.num_variables))
    return np.array(vals, dtype=float)


@st.composite
def spec_and_values(draw, **kw):
    spec = draw(specs(**kw))
    return spec, assignment(draw, spec)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    passed = sum(ln.startswith("PASS") for ln in lines)
    terminalreporter.write_line(f"{passed}/{len(lines)} acceptance checks passed")
