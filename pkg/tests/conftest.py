import numpy as np
import pytest

import gyrokit as gk


@pytest.fixture(scope="session")
def z3():
    return gk.builtin("Z3")


@pytest.fixture(scope="session")
def z4():
    return gk.builtin("Z4")


@pytest.fixture(scope="session")
def k8():
    return gk.builtin("K8")


@pytest.fixture(scope="session")
def q8():
    return gk.builtin("Q8")


@pytest.fixture(scope="session")
def g24b():
    return gk.builtin("G24b")


@pytest.fixture(scope="session")
def e24b(z3, k8, g24b):
    return gk.coordinate_extension(z3, k8, g24b)


@pytest.fixture(scope="session")
def t24b(e24b):
    return gk.canonical_section(e24b)


def corrupt_cell(G, i, j, v):
    """Copy of G's table with one cell overwritten; not validated."""
    table = np.array(G.table)
    table[i, j] = v
    return gk.FiniteGyrogroup(table, name=f"{G.name}~corrupt", strict=False)
