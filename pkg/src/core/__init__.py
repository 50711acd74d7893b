"""Core modules for exact algebra, cubical complexes and orientations"""
