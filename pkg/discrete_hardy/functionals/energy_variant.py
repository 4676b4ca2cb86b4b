'''Creation Date: 18/10/26

Summation-range tags for the right-hand sides.
'''

import re
from dataclasses import dataclass
from typing import Optional

from ..errors import ValidationError

LOCAL_TAGS = ('LOCAL_EXCLUDE_ORIGIN', 'LOCAL_INCLUDE_ORIGIN', 'LOCAL_WEIGHTED')
FRAC_TAGS = ('FRAC_EXCLUDE_ORIGIN', 'FRAC_FULL', 'FRAC_WEIGHTED')
WEIGHTED_TAGS = ('LOCAL_WEIGHTED', 'FRAC_WEIGHTED')
WEIGHT_MODES = ('outer', 'max')

_PARSE = re.compile(r'^\s*([A-Z_]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$')


@dataclass(frozen=True)
class EnergyVariant:
    '''Which index pairs an energy sums over.

    LOCAL_EXCLUDE_ORIGIN: j, k both nonzero neighbours.
    LOCAL_INCLUDE_ORIGIN: all neighbour pairs, the origin included.
    LOCAL_WEIGHTED(eps): j nonzero, k any neighbour, weighted by ||j||^-eps ('outer') or by (||j|| v ||k||)^-eps ('max').
    FRAC_EXCLUDE_ORIGIN: j != m, both nonzero.
    FRAC_FULL: all j != m.
    FRAC_WEIGHTED(eps): all j != m, kernel exponent raised by eps.
    '''
    tag: str
    eps: Optional[float] = None
    weight: str = 'outer'

    def __post_init__(self):
        if self.tag not in LOCAL_TAGS + FRAC_TAGS:
            raise ValidationError(f'energy variant should be one of {LOCAL_TAGS + FRAC_TAGS}, was {self.tag}.')
        if self.tag in WEIGHTED_TAGS:
            if self.eps is None or self.eps < 0:
                raise ValidationError(f'{self.tag} needs eps >= 0, was {self.eps}.')
        elif self.eps is not None:
            raise ValidationError(f'eps given with non-weighted variant {self.tag}.')
        if self.weight not in WEIGHT_MODES:
            raise ValidationError(f'weight should be one of {WEIGHT_MODES}, was {self.weight}.')
        if self.weight != 'outer' and self.tag != 'LOCAL_WEIGHTED':
            raise ValidationError(f'weight={self.weight!r} only applies to LOCAL_WEIGHTED, not {self.tag}.')

    @property
    def is_local(self):
        return self.tag in LOCAL_TAGS

    @property
    def is_fractional(self):
        return self.tag in FRAC_TAGS

    @classmethod
    def parse(cls, text):
        '''Parses 'FRAC_FULL', 'LOCAL_WEIGHTED(0.5)' or 'LOCAL_WEIGHTED(0.5, max)'.'''
        match = _PARSE.match(text)
        if match is None:
            raise ValidationError(f'cannot parse energy variant {text!r}.')
        tag, args = match.groups()
        if not args:
            return cls(tag)
        parts = [a.strip() for a in args.split(',')]
        weight = parts[1] if len(parts) > 1 else 'outer'
        return cls(tag, float(parts[0]), weight)

    def __str__(self):
        if self.eps is None:
            return self.tag
        if self.weight != 'outer':
            return f'{self.tag}({self.eps!r}, {self.weight})'
        return f'{self.tag}({self.eps!r})'


def as_variant(variant):
    '''Accepts an EnergyVariant or its string form.'''
    if isinstance(variant, EnergyVariant):
        return variant
    return EnergyVariant.parse(variant)
