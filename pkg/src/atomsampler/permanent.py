"""Matrix permanents.

`permanent_glynn` is the workhorse: Glynn's formula evaluated over the
2^(n-1) sign vectors with the first sign fixed, walked in Gray-code order so
each step updates the running row sums with a single rank-one correction,
O(2^(n-1) n) arithmetic in total.  `permanent_naive` is the factorial-time
cross-check, summing row products over all permutations.
"""

from itertools import permutations

import numpy as np

from .errors import SizeCapError, ValidationError

#: Glynn evaluation refuses matrices larger than this by default.
GLYNN_CAP = 28

#: The permutation sum is only sane for tiny matrices.
NAIVE_CAP = 9


def _checked_square(a, cap, name):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n < 1:
        raise ValidationError(f"{name} needs n >= 1")
    if n > cap:
        raise SizeCapError(f"{name} capped at n <= {cap}, got n = {n}")
    return a, n


def permanent_glynn(a, cap=GLYNN_CAP):
    """Permanent of a complex square matrix via Glynn's formula.

    Cost doubles with every row; the default cap keeps runaway inputs out.
    """
    a, n = _checked_square(a, cap, "permanent_glynn")
    if n == 1:
        return complex(a[0, 0])
    # row sums for the all-plus sign vector
    sums = a.sum(axis=0)
    total = sums.prod()
    sign = 1.0
    gray_prev = 0
    for k in range(1, 1 << (n - 1)):
        gray = k ^ (k >> 1)
        bit = (gray ^ gray_prev).bit_length() - 1
        # bit b toggles the sign in front of row b + 1 (row 0 stays fixed)
        if (gray >> bit) & 1:
            sums = sums - 2.0 * a[bit + 1]
        else:
            sums = sums + 2.0 * a[bit + 1]
        sign = -sign
        total += sign * sums.prod()
        gray_prev = gray
    return complex(total / (1 << (n - 1)))


def permanent_naive(a, cap=NAIVE_CAP):
    """Permanent by explicit permutation sum; oracle for small matrices."""
    a, n = _checked_square(a, cap, "permanent_naive")
    perms = np.array(list(permutations(range(n))), dtype=np.intp)
    return complex(a[np.arange(n), perms].prod(axis=1).sum())
