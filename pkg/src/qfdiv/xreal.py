"""Extended-real arithmetic with the conventions 0*(+-inf) = 0 and log 0 = -inf.

Values are ordinary Python floats; +inf and -inf play the role of the two
infinite states. The helpers below only add the two conventions floats lack
and turn inf - inf into an error instead of NaN.
"""
import math

import numpy as np

from .errors import IndeterminateFormError

INF = math.inf


def xmul(a, b):
    """Product with 0 * (+-inf) = 0."""
    a = float(a)
    b = float(b)
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def xsum(values):
    """Sum of extended reals; raises if both +inf and -inf occur."""
    total = 0.0
    pos = neg = False
    for v in values:
        v = float(v)
        if math.isnan(v):
            raise IndeterminateFormError("NaN in extended-real sum")
        if v == INF:
            pos = True
        elif v == -INF:
            neg = True
        else:
            total += v
    if pos and neg:
        raise IndeterminateFormError("(+inf) + (-inf) encountered")
    if pos:
        return INF
    if neg:
        return -INF
    return total


def xlog(x):
    """log with log 0 = -inf and log(+inf) = +inf."""
    x = float(x)
    if x < 0:
        raise ValueError("log of a negative number")
    if x == 0.0:
        return -INF
    return math.log(x)


def is_finite(x):
    return bool(np.isfinite(x))


def to_json(x):
    """Serialize an extended real; infinities become strings."""
    x = float(x)
    if x == INF:
        return "+inf"
    if x == -INF:
        return "-inf"
    return x


def from_json(v):
    if v == "+inf":
        return INF
    if v == "-inf":
        return -INF
    return float(v)
