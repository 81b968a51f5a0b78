import numpy as np


def merged_chisquare_pvalue(observed, expected):
    """Chi-square p-value with sparse bins pooled so the test is well posed.

    Bins with expected count below five are merged into one; a pooled bin
    with zero expectation (impossible outcomes that were never observed) is
    dropped.  Expectations are rescaled to match the observed total.
    """
    from scipy import stats

    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    keep = expected >= 5.0
    observed = np.append(observed[keep], observed[~keep].sum())
    expected = np.append(expected[keep], expected[~keep].sum())
    if expected[-1] == 0.0 and observed[-1] == 0.0:
        observed, expected = observed[:-1], expected[:-1]
    expected *= observed.sum() / expected.sum()
    return stats.chisquare(observed, expected).pvalue
