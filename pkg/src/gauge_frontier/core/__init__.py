"""Numerical core for gauge-frontier.

``divergence`` holds the Gaussian distances, ``channels`` the per-class
pair distances, ``codebook`` finite input sets, ``packing`` the packing
and frontier bounds, ``gauge`` the gauge readings and ``montecarlo`` the
error-probability harness.
"""
