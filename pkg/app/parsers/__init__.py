"""
Text grammars for ordinals, sets, space terms, region files and poset files.
"""

from app.parsers.documents import parse_poset_file, parse_region_file
from app.parsers.expressions import parse_ordinal, parse_set, parse_term

__all__ = [
    "parse_ordinal",
    "parse_set",
    "parse_term",
    "parse_region_file",
    "parse_poset_file",
]
