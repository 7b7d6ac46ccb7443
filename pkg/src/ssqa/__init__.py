"""Stochastic simulated quantum annealing (SSQA) with SSA and SA baselines."""

__version__ = "0.1.0"
