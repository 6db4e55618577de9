"""Dyadic Haar calculus, paraproducts and operator-norm estimates."""

from ._bipara import (
    apply,
    carleson_constant,
    construct,
    haar_forward,
    haar_inverse,
    norm,
    opnorm_l2,
    opnorm_search,
    pi4_matrix_bound,
    sparse_extract,
)

__all__ = [
    "apply",
    "carleson_constant",
    "construct",
    "haar_forward",
    "haar_inverse",
    "norm",
    "opnorm_l2",
    "opnorm_search",
    "pi4_matrix_bound",
    "sparse_extract",
]
