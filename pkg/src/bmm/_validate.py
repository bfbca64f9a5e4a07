import numpy as np

from .errors import ConfigError, EmptyInputError


def as_sample(values, name="sample"):
    """Return ``values`` as a finite, non-empty 1-D float64 array."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.ndim != 1:
        raise ConfigError(f"{name} must be one-dimensional, got shape {x.shape}")
    if x.size == 0:
        raise EmptyInputError(f"{name} is empty")
    if not np.all(np.isfinite(x)):
        raise ConfigError(f"{name} contains NaN or infinite values")
    return x


def check_positive(value, name):
    if not (np.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_count(value, name, minimum=1):
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_seed(seed):
    if isinstance(seed, bool) or int(seed) != seed or not (0 <= seed < 2**64):
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)
