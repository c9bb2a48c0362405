"""Unlabeled-subgraph censuses, tinyness checks and counting bounds for graphs."""

__version__ = "0.1.0"
