"""Tropical multiple Horn problem: planar networks, the map m, and checks around it."""

from .trop import NEG_INF, GZPattern, gz_check
from .network import PlanarNetwork, Weighting, standard_network, standard_weighting
from .multipath import MFunction, m_map, calA, calA_inverse
from .horncheck import horn_trop, rhombus_check, tetrahedron_check, octahedron_check

__version__ = "0.1.0"
