"""priorsense recovers structured signals from linear measurements with the help of a similar prior signal and
computes the Gaussian-width bounds on how many measurements that takes.
"""
__version__ = '0.1.0'

from priorsense import utilities
from priorsense import proximal
from priorsense import ensembles
from priorsense import geometry
from priorsense import recovery
from priorsense import solver
from priorsense import prior
from priorsense import experiments
