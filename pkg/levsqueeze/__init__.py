"""
Levitated-nanoparticle ponderomotive squeezing laboratory
Analytic spectra, Langevin simulation, spectral fitting and homodyne tomography
"""

__version__ = "1.0.0"
__author__ = "levsqueeze developers"
