"""Global limits. Override per call where the API takes the matching keyword."""

from __future__ import annotations

import os

# canonization / embedding are gated to this many vertices unless overridden
DENSE_MAX_N = 64

# default enumeration budget (steps) for census and branch-and-bound work
CENSUS_BUDGET = 10**8
BNB_BUDGET = 2 * 10**5

# exhaustive cap for the sparse connected graph count
SPARSE_COUNT_CAP = 8

THREADS_ENV = "TINYGRAPH_THREADS"


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1

# work budget for the connected census inside tinyness certification
CERTIFY_BUDGET = 10**6
