import itertools
import math

import numpy as np
import pytest

from flattorsion.clifford import build_clifford7
from flattorsion.multilinear import AltForm, multi_indices


@pytest.fixture(scope="session")
def rep():
    return build_clifford7()


def random_form(rng, n, k):
    return AltForm.from_vector(n, k, rng.standard_normal(len(multi_indices(n, k))))


def brute_antisymmetric(arr):
    """Dense alternation oracle: sum over permutations with sign, no 1/k! (determinant convention)."""
    k = arr.ndim
    out = np.zeros_like(arr)
    for perm in itertools.permutations(range(k)):
        sign = np.linalg.det(np.eye(k)[list(perm)])
        out += sign * np.transpose(arr, perm)
    return out


def brute_wedge(a, b):
    """``(a ^ b) = Alt(a (x) b) / (k! l!)`` in the determinant convention."""
    A, B = a.to_array(), b.to_array()
    prod = np.multiply.outer(A, B)
    k, l = a.degree, b.degree
    return brute_antisymmetric(prod) / (math.factorial(k) * math.factorial(l))


ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
