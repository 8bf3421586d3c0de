"""Resource caps. These are configuration, not constants of the mathematics."""
from typing import NamedTuple

from resonpy.exceptions import ResourceRefusal


class ResourceCaps(NamedTuple):
    max_exact_M: int = 26
    max_pair_operations: int = 10 ** 9
    max_gcd_elements: int = 2 ** 12
    max_restricted_terms: int = 10 ** 7
    max_quadruple_operations: int = 10 ** 9
    max_tail_T: float = 2000
    max_quadrature_T: float = 1e4
    max_quadrature_operations: int = 10 ** 10
    max_search_T: float = 1e5
    max_reference_t: float = 1e7
    max_reference_digits: int = 30
    max_samples: int = 10 ** 7

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls._fields)
        if unknown:
            raise KeyError("Unknown resource caps: {}".format(sorted(unknown)))
        return cls(**d)

    def check(self, name, requested):
        """Raise ResourceRefusal if ``requested`` exceeds the cap called ``name``."""
        limit = getattr(self, name)
        if requested > limit:
            raise ResourceRefusal(name, limit, requested)


DEFAULT_CAPS = ResourceCaps()
