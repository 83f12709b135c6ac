"""Sparse generalized singular vectors by proximal gradient descent, for
feature selection and non-parallel hyperplane classification.
"""
