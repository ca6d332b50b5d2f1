"""Hierarchical reinforcement learning lab.

Three testbeds under one deterministic, seeded harness: a multi-resolution
feudal maze, a portfolio-doubling stock market with five agent families, and
a driving-telemetry subroutine miner (t-SNE embedding + K-means centroids).
"""

__version__ = "0.1.0"
