"""Exact arithmetic: residue fields, truncated DVRs, number theory, small matrices."""

from .dvr_tower import DvrElement, RingSpec, dvr_make, mu_prime_to_p, teichmuller_lift
from .residue_field import FieldElem, FieldSpec, ff_enumerate, ff_make, ff_mult_order

__all__ = [
    "DvrElement",
    "RingSpec",
    "dvr_make",
    "mu_prime_to_p",
    "teichmuller_lift",
    "FieldElem",
    "FieldSpec",
    "ff_enumerate",
    "ff_make",
    "ff_mult_order",
]
