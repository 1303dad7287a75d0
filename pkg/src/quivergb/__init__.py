"""Exact symbolic engine for determinantal ideals of bipartite quivers:
natural minor generators, Groebner verification by S-pair reduction and by
constructive chain certificates, and tensor-rank applications."""

__all__ = ["poly", "layout", "minors", "groebner", "spair", "tensors"]

__version__ = "1.0.0"
