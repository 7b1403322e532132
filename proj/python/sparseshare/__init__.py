"""Sparse secret sharing of matrices over prime fields.

Thin Python layer over the C++ core: optimal padding distributions, leakage,
share encoding, decoding from any three worker products, and a straggler
simulation.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401


def multiply(a_shares, b_shares, picks, alphas=None, cross_check=None):
    """Decode A @ B from the worker products of the shares at 0-based `picks`."""
    picks = list(picks)
    if alphas is None:
        alphas = range(1, len(a_shares) + 1)
    alphas = list(alphas)
    evals = [evaluate_task(a_shares[i], b_shares[i], alphas[i]) for i in picks]  # noqa: F405
    if cross_check is None:
        cross_check = len(evals) > 3
    return reconstruct_product(evals, cross_check)  # noqa: F405
