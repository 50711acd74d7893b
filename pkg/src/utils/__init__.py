"""Utility modules for geocube: logging, documents and the corpus"""
