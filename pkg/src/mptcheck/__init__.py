"""Check property-transformer contracts, symbolic transition systems and
quantified LTL with Büchi automata."""

__version__ = "0.1.0"
