import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dilationlab.families import _scalar_instance, generate
from dilationlab.instances import parse_instance

INSTANCES_DIR = Path(__file__).parent.parent / "instances"


@pytest.fixture(scope="session")
def scalar_pair():
    """T_1 = 0.6, T_2 = 0.8 on C: commuting, doubly commuting, dilatable."""
    return parse_instance(_scalar_instance([np.array([[0.6]]), np.array([[0.8]])]))


@pytest.fixture(scope="session")
def nilpotent_pair():
    """T_1 = T_2 = e_12 on C^2: no regular isometric dilation."""
    e12 = np.zeros((2, 2), dtype=complex)
    e12[0, 1] = 1.0
    return parse_instance(_scalar_instance([e12, e12]))


@pytest.fixture(scope="session")
def half_scalar():
    """Single contraction T = 0.5 on C."""
    return parse_instance(_scalar_instance([np.array([[0.5]])]))


@pytest.fixture(scope="session")
def mult_m2():
    """M_2 acting on C^2 by multiplication, k = 2: isometric fixed point."""
    return parse_instance(generate("multiplication-isometric", seed=0, k=2, dims=2))
