"""Shared strategies and independent oracles for the test suite."""
from __future__ import annotations

import itertools
from fractions import Fraction

from hypothesis import strategies as st

POOL = [Fraction(k) for k in range(-5, 6)] + [Fraction(s, 2) for s in (-3, -1, 1, 3)]

rats = st.sampled_from(POOL)
small_rats = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def root_lists(min_size=0, max_size=4, elements=rats):
    return st.lists(elements, min_size=min_size, max_size=max_size)


def brute_force_shift_ratio(tops, bottoms) -> bool:
    """Exhaustive perfect matching: some bijection with every top - bottom in Z>=1."""
    if len(tops) != len(bottoms):
        return False
    return any(
        all((t - b).denominator == 1 and t - b >= 1 for t, b in zip(tops, perm))
        for perm in itertools.permutations(bottoms)
    )


def series_by_division(num_roots, den_roots, order):
    """Coefficients of prod(1 + a x)/prod(1 + b x) in x = u^-1 by long division."""
    def expand(roots):
        c = [Fraction(1)]
        for r in roots:
            c = [x + r * y for x, y in zip(c + [Fraction(0)], [Fraction(0)] + c)]
        return c + [Fraction(0)] * (order + 1)

    n, d = expand(num_roots), expand(den_roots)
    out = []
    for k in range(order + 1):
        out.append(n[k] - sum(d[j] * out[k - j] for j in range(1, k + 1)))
    return out


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, text: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {text}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
