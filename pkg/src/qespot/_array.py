import numpy as np


def as_array(x):
    return np.asarray(x, dtype=float)


def unwrap(result):
    """Return a Python float for 0-d results, the array otherwise."""
    result = np.asarray(result)
    if result.ndim == 0:
        return float(result)
    return result
