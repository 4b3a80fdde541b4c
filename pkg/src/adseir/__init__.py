"""SEIR dynamics on adaptive clustered contact networks.

Pairwise ODE models with two moment closures, social-distancing
intervention schemes, effectiveness metrics, network generators, and an
exact stochastic simulator for cross-validation.
"""

__version__ = "0.1.0"

from .kernel import BACKEND  # noqa: F401
