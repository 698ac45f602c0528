import numpy as np
import pytest

from indefsl.coeffs import Coefficient
from indefsl.sl_ode import HalfLineProblem, Side, solve_cs


@pytest.fixture(scope="session")
def warm_kernels():
    """Pay the one-off JIT compilation cost outside any timed section."""
    p = HalfLineProblem(Side.PLUS, Coefficient.constant(0.0),
                        Coefficient.constant(1.0), X=1.0)
    solve_cs(p, 1j, [0.5])
    return True


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def free_problem(side=Side.PLUS, X=None):
    q = Coefficient.constant(0.0) if side is Side.PLUS else \
        Coefficient.constant(0.0, domain=(-np.inf, 0.0))
    w = Coefficient.constant(1.0) if side is Side.PLUS else \
        Coefficient.constant(1.0, domain=(-np.inf, 0.0))
    return HalfLineProblem(side, q, w, X=X)
