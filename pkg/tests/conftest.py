from functools import lru_cache

from frobeig.splitfield import splitting_field
from frobeig.weil import validate


@lru_cache(maxsize=None)
def split_cached(q, coeffs):
    """validate + splitting_field, cached across the whole test session."""
    data = validate(q, list(coeffs))
    return data, splitting_field(data)
