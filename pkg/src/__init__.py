"""
geocube - Cubical homology, products and co-orientation sign checks

Exact integer homology of ordered cubical complexes, cup, cap and cross
products, dual blocks and Poincare duality checks, and a randomized
suite for the sign rules of oriented and co-oriented fiber products.
"""

__version__ = "0.1.0"
__author__ = "Galkurta"
__license__ = "MIT"
