"""
Exact ordinal arithmetic, scattered sets and regions, finite duality, the
space-term rank calculus, club constructions and the sublattice classifier.
"""
